#include "nclid/lid.hpp"

#include <cmath>
#include <string>

#include "nclid/error.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

NcLidScore nc_lid(const Snapshot& g, NodeId n, double alpha) {
  if (!g.is_active(n)) throw ArgumentError("node " + std::to_string(n) + " is not active");
  const auto community = detect_natural_community(g, n, alpha);
  const auto dist = bfs_distances(g, n);

  NcLidScore score;
  score.node = n;
  score.community_size = community.members.size();
  score.radius = community.radius;
  for (const auto& d : dist) {
    if (d && *d <= community.radius) ++score.ball;
  }
  score.value = std::log(static_cast<double>(score.ball) / static_cast<double>(score.community_size));
  return score;
}

std::vector<NcLidScore> nc_lid_snapshot(const Snapshot& g, double alpha, std::size_t threads) {
  const auto active = g.active();
  std::vector<NcLidScore> scores(active.size());
  parallel_for(active.size(), threads, [&](std::size_t i) { scores[i] = nc_lid(g, active[i], alpha); });
  return scores;
}

}  // namespace nclid
