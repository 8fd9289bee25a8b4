#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "nclid/community.hpp"
#include "nclid/graph.hpp"

namespace nclid {

/// NC-LID of one node: -ln(|S| / D(n, k)) where S is the node's natural community,
/// k the largest distance from the node to a member of S, and D(n, k) the number of
/// nodes within distance k (the node itself included).
struct NcLidScore {
  NodeId node = 0;
  double value = 0.0;
  std::size_t community_size = 0;
  double radius = 0.0;  ///< hops for snapshots, time units for the temporal variant
  std::size_t ball = 0;
};

NcLidScore nc_lid(const Snapshot& g, NodeId n, double alpha = 1.0);

/// Scores for every active node of `g`, ascending by node index.
std::vector<NcLidScore> nc_lid_snapshot(const Snapshot& g, double alpha = 1.0, std::size_t threads = 1);

/// Mean earliest-arrival latency kept as an exact rational (sum / count of finite
/// latencies). count == 0 means unreachable from every start time.
struct TemporalDistance {
  std::int64_t latency_sum = 0;
  std::int64_t count = 0;

  bool reachable() const noexcept { return count > 0; }
  double mean() const noexcept {
    return count > 0 ? static_cast<double>(latency_sum) / static_cast<double>(count)
                     : std::numeric_limits<double>::infinity();
  }
  /// Exact a <= b on the means; an unreachable distance is larger than any reachable one.
  friend bool operator<=(const TemporalDistance& a, const TemporalDistance& b) noexcept {
    if (!b.reachable()) return true;
    if (!a.reachable()) return false;
    return static_cast<__int128>(a.latency_sum) * b.count <= static_cast<__int128>(b.latency_sum) * a.count;
  }
};

/// Temporal distances from `source` to every node.
///
/// For every distinct event timestamp s, the earliest arrival at each node is taken
/// over journeys whose first event departs the source at a time >= s and whose later
/// events have strictly increasing timestamps. Arrival is the timestamp of the last
/// event; latency(s) = arrival - s. Unreachable start times are left out of the mean.
/// The source itself is at distance 0.
std::vector<TemporalDistance> temporal_distances_from(const EventLog& log, NodeId source);

/// Mean latency from i to j, +infinity when j is never reachable from i.
double temporal_distance(const AggregatedGraph& ag, const EventLog& log, NodeId i, NodeId j);

/// Full matrix, row i = temporal_distances_from(log, i). Quadratic memory.
std::vector<std::vector<TemporalDistance>> temporal_distance_matrix(const EventLog& log, std::size_t threads = 1);

/// Earliest-arrival journey from i to j for start time `start`; empty when unreachable.
std::vector<Event> temporal_path(const EventLog& log, NodeId i, NodeId j, Timestamp start);

/// NC-LID on the aggregated graph with hop distance replaced by temporal distance.
/// Community detection runs unchanged on the unweighted aggregated adjacency.
NcLidScore temporal_nc_lid(const AggregatedGraph& ag, const EventLog& log, NodeId n, double alpha = 1.0);

}  // namespace nclid
