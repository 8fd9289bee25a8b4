#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nclid/graph.hpp"

namespace nclid {

/// Internal/boundary edge tallies of a node set. `internal` counts each internal
/// edge twice (sum of internal degrees); `boundary` counts edges leaving the set.
struct CommunityDegrees {
  std::int64_t internal = 0;
  std::int64_t boundary = 0;
};

CommunityDegrees community_degrees(const Snapshot& g, std::span<const NodeId> members);

/// k_in / (k_in + k_out)^alpha, 0 when the set has no internal edge.
double fitness_value(CommunityDegrees d, double alpha);

/// Fitness of an arbitrary member set. Throws ArgumentError on an empty set,
/// an inactive member or a non-positive alpha.
double community_fitness(const Snapshot& g, std::span<const NodeId> members, double alpha);

/// Seed-grown community.
struct NaturalCommunity {
  NodeId seed = 0;
  std::vector<NodeId> members;  ///< ascending
  double fitness = 0.0;
  CommunityDegrees degrees;
  std::uint32_t radius = 0;  ///< largest hop distance from the seed to a member
  std::size_t steps = 0;     ///< accepted additions plus removals

  bool contains(NodeId v) const;
};

/// Greedy fitness maximisation from a single seed.
///
/// Each round adds the frontier node with the largest strictly positive gain
/// (smallest index on ties), then repeatedly drops the lowest-index non-seed member
/// whose removal strictly raises fitness, rescanning after every drop. Growth stops
/// when no frontier node improves fitness. The total number of accepted steps is
/// capped at 4·|V|. A seed of degree 0 yields {seed} with fitness 0.
NaturalCommunity detect_natural_community(const Snapshot& g, NodeId seed, double alpha = 1.0);

}  // namespace nclid
