#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nclid {

using NodeId = std::uint32_t;
using Timestamp = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

/// Unweighted shortest-path length; std::nullopt marks an unreachable node.
using HopDistance = std::optional<std::uint32_t>;

/// Bijection between external node labels and dense indices (first-appearance order).
class LabelMap {
 public:
  NodeId intern(std::string_view label);
  std::optional<NodeId> find(std::string_view label) const;
  const std::string& label(NodeId id) const { return labels_.at(id); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct Event {
  NodeId x = 0;
  NodeId y = 0;
  Timestamp t = 0;
  double w = 1.0;
};

/// Time-ordered interaction log. Events are sorted by timestamp (stable w.r.t. input order).
struct EventLog {
  std::vector<Event> events;
  LabelMap labels;
  Timestamp t_min = 0;
  Timestamp t_max = 0;
  std::size_t self_loops_dropped = 0;

  std::size_t node_count() const noexcept { return labels.size(); }
};

/// Zero-based column positions inside an input line.
struct ParseOptions {
  std::size_t source_field = 0;
  std::size_t target_field = 1;
  std::size_t time_field = 2;
  std::size_t weight_field = 3;
};

/// Parses "source target timestamp [weight]" lines separated by spaces, tabs or commas.
/// Lines starting with '#' or '%' are comments. Self-loops are dropped and tallied.
EventLog parse_event_log(std::istream& in, const ParseOptions& options = {});
EventLog read_event_log(const std::filesystem::path& path, const ParseOptions& options = {});

/// Half-open time interval [start, end); the last interval of a sequence is closed.
struct Interval {
  double start = 0.0;
  double end = 0.0;
  bool closed = false;

  bool contains(double t) const noexcept { return t >= start && (t < end || (closed && t <= end)); }
};

/// Simple undirected graph over a global dense index space, stored as sorted CSR adjacency.
/// Nodes with at least one edge are active.
class Snapshot {
 public:
  Snapshot() = default;

  /// Builds from an edge list. Duplicates collapse; self-loops and out-of-range
  /// endpoints are rejected with ArgumentError.
  static Snapshot from_edges(std::size_t node_count, std::span<const Edge> edges, Interval interval = {});

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool is_active(NodeId v) const { return v < node_count() && degree(v) > 0; }
  bool has_edge(NodeId u, NodeId v) const;

  /// Active nodes in ascending order.
  std::span<const NodeId> active() const noexcept { return active_; }
  std::size_t active_count() const noexcept { return active_.size(); }

  /// Every edge once as (min, max), lexicographically sorted.
  std::vector<Edge> edges() const;

  const Interval& interval() const noexcept { return interval_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<NodeId> active_;
  Interval interval_;
};

/// How the observation period is cut into bins.
struct SnapshotSpec {
  enum class Kind { BinCount, BinWidth };

  Kind kind = Kind::BinCount;
  std::int64_t value = 1;

  static SnapshotSpec bins(std::int64_t count) { return {Kind::BinCount, count}; }
  static SnapshotSpec width(std::int64_t time_units) { return {Kind::BinWidth, time_units}; }
};

struct SnapshotSequence {
  std::vector<Snapshot> snapshots;
  /// snapshots.size() + 1 monotone cut points; first is t_min, last is t_max.
  std::vector<double> boundaries;
  LabelMap labels;

  std::size_t size() const noexcept { return snapshots.size(); }
  const Snapshot& operator[](std::size_t i) const { return snapshots[i]; }

  /// Indices of snapshots that received no edges.
  std::vector<std::size_t> empty_bins() const;
};

SnapshotSequence build_snapshots(const EventLog& log, const SnapshotSpec& spec);

struct ActivationStats {
  double nodes = 0.0;  ///< mean number of snapshots in which an ever-active node is active
  double edges = 0.0;  ///< same for distinct undirected edges
};

ActivationStats activation_stats(const SnapshotSequence& seq);

/// Hop distances from `source` to every node of the index space.
std::vector<HopDistance> bfs_distances(const Snapshot& g, NodeId source);

/// Number of nodes within `k` hops of `n`, counting `n` itself.
std::size_t ball_size(const Snapshot& g, NodeId n, std::uint32_t k);

/// All events folded into one graph with the sorted timestamps of each edge.
struct AggregatedGraph {
  Snapshot graph;
  std::vector<Edge> edges;                     ///< same order as graph.edges()
  std::vector<std::vector<Timestamp>> times;  ///< times[i] belongs to edges[i]

  std::span<const Timestamp> edge_times(NodeId u, NodeId v) const;
};

AggregatedGraph aggregate_graph(const EventLog& log);

/// Writes one "snapshot_NNN.edges" file per snapshot ("u v" dense indices) and a
/// manifest.json with {boundaries, label_map} into `dir`.
void write_snapshot_sequence(const SnapshotSequence& seq, const std::filesystem::path& dir);
SnapshotSequence read_snapshot_sequence(const std::filesystem::path& dir);

}  // namespace nclid
