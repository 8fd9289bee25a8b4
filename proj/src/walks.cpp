#include <algorithm>
#include <cmath>
#include <numeric>

#include "nclid/embedding.hpp"
#include "nclid/error.hpp"
#include "nclid/parallel.hpp"
#include "nclid/seeds.hpp"

namespace nclid {

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw ConfigError("walks_per_node must be at least 1");
  if (walk_length < 2) throw ConfigError("walk_length must be at least 2");
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw ConfigError("walk parameters p and q must be positive");
  }
}

namespace {

inline double bias(const Snapshot& g, NodeId prev, NodeId candidate, double inv_p, double inv_q) {
  if (candidate == prev) return inv_p;
  if (g.has_edge(prev, candidate)) return 1.0;
  return inv_q;
}

std::optional<NodeId> step(const Snapshot& g, std::optional<NodeId> prev, NodeId cur, double inv_p, double inv_q,
                           Rng& rng, std::vector<double>& weights) {
  const auto nb = g.neighbors(cur);
  if (nb.empty()) return std::nullopt;
  if (!prev) return nb[rng.below(nb.size())];
  weights.resize(nb.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    weights[i] = bias(g, *prev, nb[i], inv_p, inv_q);
    total += weights[i];
  }
  double r = rng.uniform() * total;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    r -= weights[i];
    if (r < 0.0) return nb[i];
  }
  return nb.back();
}

constexpr std::uint64_t kShuffleStream = 0x5f3759dfULL;

}  // namespace

std::vector<double> transition_distribution(const Snapshot& g, std::optional<NodeId> prev, NodeId cur, double p,
                                            double q) {
  if (cur >= g.node_count()) throw ArgumentError("node out of range");
  const auto nb = g.neighbors(cur);
  std::vector<double> probs(nb.size(), 0.0);
  if (nb.empty()) return probs;
  if (!prev) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(nb.size()));
    return probs;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    probs[i] = bias(g, *prev, nb[i], 1.0 / p, 1.0 / q);
    total += probs[i];
  }
  for (auto& x : probs) x /= total;
  return probs;
}

std::vector<Walk> sample_walks(const Snapshot& g, std::span<const NodeId> starts, const WalkConfig& cfg,
                               std::size_t threads) {
  cfg.validate();
  for (NodeId v : starts) {
    if (v >= g.node_count()) throw ArgumentError("walk start out of range");
  }
  const std::size_t per_round = starts.size();
  std::vector<Walk> walks(per_round * cfg.walks_per_node);
  if (walks.empty()) return walks;

  std::vector<NodeId> order(starts.begin(), starts.end());
  std::vector<std::pair<NodeId, std::size_t>> jobs;  // (start, round) per output slot
  jobs.reserve(walks.size());
  for (std::size_t r = 0; r < cfg.walks_per_node; ++r) {
    Rng shuffle(derive_seed(cfg.seed, kShuffleStream, r));
    std::shuffle(order.begin(), order.end(), shuffle);
    for (NodeId v : order) jobs.emplace_back(v, r);
  }

  const double inv_p = 1.0 / cfg.p;
  const double inv_q = 1.0 / cfg.q;
  parallel_for(walks.size(), threads, [&](std::size_t slot) {
    auto [start, round] = jobs[slot];
    Rng rng(derive_seed(cfg.seed, start, round));
    std::vector<double> weights;
    Walk& walk = walks[slot];
    walk.reserve(cfg.walk_length);
    walk.push_back(start);
    std::optional<NodeId> prev;
    while (walk.size() < cfg.walk_length) {
      auto next = step(g, prev, walk.back(), inv_p, inv_q, rng, weights);
      if (!next) break;
      prev = walk.back();
      walk.push_back(*next);
    }
  });
  return walks;
}

std::vector<NodeId> evolutionary_nodes(const Snapshot& prev, const Snapshot& cur) {
  std::vector<NodeId> out;
  for (NodeId v : cur.active()) {
    if (v >= prev.node_count()) {
      out.push_back(v);
      continue;
    }
    auto a = prev.neighbors(v);
    auto b = cur.neighbors(v);
    if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) out.push_back(v);
  }
  return out;
}

}  // namespace nclid
