#include "nclid/community.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "nclid/error.hpp"

namespace nclid {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("fitness alpha must be positive");
}

// Strict "a has higher fitness than b". Exact rational comparison for alpha = 1.
bool fitter(CommunityDegrees a, CommunityDegrees b, double alpha) {
  if (a.internal == 0) return false;
  if (b.internal == 0) return true;
  if (alpha == 1.0) {
    const auto lhs = static_cast<__int128>(a.internal) * (b.internal + b.boundary);
    const auto rhs = static_cast<__int128>(b.internal) * (a.internal + a.boundary);
    return lhs > rhs;
  }
  const double fa = fitness_value(a, alpha);
  const double fb = fitness_value(b, alpha);
  return fa > fb + 1e-12 * std::max(1.0, std::abs(fb));
}

}  // namespace

CommunityDegrees community_degrees(const Snapshot& g, std::span<const NodeId> members) {
  std::vector<char> inside(g.node_count(), 0);
  for (NodeId v : members) {
    if (v >= g.node_count()) throw ArgumentError("community member out of range");
    inside[v] = 1;
  }
  CommunityDegrees d;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!inside[v]) continue;
    for (NodeId u : g.neighbors(v)) {
      if (inside[u]) {
        ++d.internal;
      } else {
        ++d.boundary;
      }
    }
  }
  return d;
}

double fitness_value(CommunityDegrees d, double alpha) {
  if (d.internal == 0) return 0.0;
  return static_cast<double>(d.internal) / std::pow(static_cast<double>(d.internal + d.boundary), alpha);
}

double community_fitness(const Snapshot& g, std::span<const NodeId> members, double alpha) {
  check_alpha(alpha);
  if (members.empty()) throw ArgumentError("community member set is empty");
  for (NodeId v : members) {
    if (!g.is_active(v)) throw ArgumentError("community member " + std::to_string(v) + " is not active");
  }
  return fitness_value(community_degrees(g, members), alpha);
}

bool NaturalCommunity::contains(NodeId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

NaturalCommunity detect_natural_community(const Snapshot& g, NodeId seed, double alpha) {
  check_alpha(alpha);
  if (!g.is_active(seed)) throw ArgumentError("seed " + std::to_string(seed) + " is not active");

  const std::size_t n = g.node_count();
  std::vector<char> inside(n, 0);
  std::vector<std::int64_t> links_in(n, 0);  // neighbours inside the community
  std::set<NodeId> members;
  std::set<NodeId> frontier;
  CommunityDegrees current;

  auto add = [&](NodeId v) {
    const auto deg = static_cast<std::int64_t>(g.degree(v));
    current.internal += 2 * links_in[v];
    current.boundary += deg - 2 * links_in[v];
    inside[v] = 1;
    members.insert(v);
    frontier.erase(v);
    for (NodeId u : g.neighbors(v)) {
      ++links_in[u];
      if (!inside[u]) frontier.insert(u);
    }
  };
  auto remove = [&](NodeId v) {
    const auto deg = static_cast<std::int64_t>(g.degree(v));
    current.internal -= 2 * links_in[v];
    current.boundary -= deg - 2 * links_in[v];
    inside[v] = 0;
    members.erase(v);
    if (links_in[v] > 0) frontier.insert(v);
    for (NodeId u : g.neighbors(v)) {
      if (--links_in[u] == 0 && !inside[u]) frontier.erase(u);
    }
  };
  auto with = [&](NodeId v) {
    const auto deg = static_cast<std::int64_t>(g.degree(v));
    return CommunityDegrees{current.internal + 2 * links_in[v], current.boundary + deg - 2 * links_in[v]};
  };
  auto without = [&](NodeId v) {
    const auto deg = static_cast<std::int64_t>(g.degree(v));
    return CommunityDegrees{current.internal - 2 * links_in[v], current.boundary - deg + 2 * links_in[v]};
  };

  add(seed);
  const std::size_t max_steps = 4 * n;
  std::size_t steps = 0;
  while (steps < max_steps) {
    std::optional<NodeId> best;
    CommunityDegrees best_degrees;
    for (NodeId v : frontier) {
      auto candidate = with(v);
      if (!best || fitter(candidate, best_degrees, alpha)) {
        best = v;
        best_degrees = candidate;
      }
    }
    if (!best || !fitter(best_degrees, current, alpha)) break;
    add(*best);
    ++steps;

    bool removed = true;
    while (removed && steps < max_steps) {
      removed = false;
      for (NodeId u : members) {
        if (u == seed) continue;
        if (fitter(without(u), current, alpha)) {
          remove(u);
          ++steps;
          removed = true;
          break;
        }
      }
    }
  }

  NaturalCommunity result;
  result.seed = seed;
  result.members.assign(members.begin(), members.end());
  result.degrees = current;
  result.fitness = fitness_value(current, alpha);
  result.steps = steps;
  auto dist = bfs_distances(g, seed);
  for (NodeId v : result.members) {
    if (dist[v]) result.radius = std::max(result.radius, *dist[v]);
  }
  return result;
}

}  // namespace nclid
