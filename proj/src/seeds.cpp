#include "nclid/seeds.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#include "nclid/parallel.hpp"

namespace nclid {

std::uint64_t stage_seed(std::uint64_t master, std::string_view stage, std::uint64_t run) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stage) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(mix64(master ^ h), run);
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("NCLID_THREADS")) {
    try {
      auto n = std::stoul(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace nclid
