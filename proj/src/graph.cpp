#include "nclid/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>

#include "nclid/error.hpp"

namespace nclid {

NodeId LabelMap::intern(std::string_view label) {
  auto it = index_.find(std::string(label));
  if (it != index_.end()) return it->second;
  auto id = static_cast<NodeId>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<NodeId> LabelMap::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  Timestamp t = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), t);
  if (ec == std::errc() && p == s.data() + s.size()) return t;
  // Integral values written in floating notation ("12.0", "1e3") are accepted.
  double d = 0.0;
  auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec2 != std::errc() || q != s.data() + s.size() || !std::isfinite(d)) return std::nullopt;
  if (d != std::floor(d) || std::abs(d) > 9.0e18) return std::nullopt;
  return static_cast<Timestamp>(d);
}

std::optional<double> parse_real(std::string_view s) {
  double d = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(d)) return std::nullopt;
  return d;
}

}  // namespace

EventLog parse_event_log(std::istream& in, const ParseOptions& options) {
  const std::size_t required =
      std::max({options.source_field, options.target_field, options.time_field}) + 1;
  const std::size_t maximum = std::max(required, options.weight_field + 1);

  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (view[first] == '#' || view[first] == '%') continue;

    auto fields = split_fields(view);
    if (fields.size() < required || fields.size() > maximum) {
      throw ParseError("expected " + std::to_string(required) + " to " + std::to_string(maximum) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    auto t = parse_timestamp(fields[options.time_field]);
    if (!t) throw ParseError("non-numeric timestamp '" + std::string(fields[options.time_field]) + "'", line_no);
    double w = 1.0;
    if (fields.size() > options.weight_field) {
      auto parsed = parse_real(fields[options.weight_field]);
      if (!parsed || *parsed <= 0.0) {
        throw ParseError("weight must be a positive number, got '" +
                             std::string(fields[options.weight_field]) + "'",
                         line_no);
      }
      w = *parsed;
    }
    auto src = fields[options.source_field];
    auto dst = fields[options.target_field];
    if (src == dst) {
      ++log.self_loops_dropped;
      continue;
    }
    NodeId x = log.labels.intern(src);
    NodeId y = log.labels.intern(dst);
    log.events.push_back({x, y, *t, w});
  }
  if (log.events.empty()) throw ParseError("event log is empty", 0);

  std::stable_sort(log.events.begin(), log.events.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  log.t_min = log.events.front().t;
  log.t_max = log.events.back().t;
  return log;
}

EventLog read_event_log(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_event_log(in, options);
}

Snapshot Snapshot::from_edges(std::size_t node_count, std::span<const Edge> edges, Interval interval) {
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) throw ArgumentError("edge endpoint out of range");
    if (u == v) throw ArgumentError("self-loop in snapshot edge list");
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Snapshot g;
  g.interval_ = interval;
  g.offsets_.assign(node_count + 1, 0);
  for (auto [u, v] : directed) ++g.offsets_[u + 1];
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.reserve(directed.size());
  for (auto [u, v] : directed) g.targets_.push_back(v);
  for (NodeId v = 0; v < node_count; ++v) {
    if (g.degree(v) > 0) g.active_.push_back(v);
  }
  return g;
}

bool Snapshot::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Snapshot::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<std::size_t> SnapshotSequence::empty_bins() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (snapshots[i].edge_count() == 0) out.push_back(i);
  }
  return out;
}

SnapshotSequence build_snapshots(const EventLog& log, const SnapshotSpec& spec) {
  if (log.events.empty()) throw ArgumentError("event log is empty");
  if (spec.value <= 0) throw ConfigError("snapshot count or width must be positive");

  const Timestamp span = log.t_max - log.t_min;
  std::int64_t bins = 0;
  if (spec.kind == SnapshotSpec::Kind::BinCount) {
    bins = spec.value;
  } else {
    // t_max on an exact multiple of the width still belongs to the last bin (closed end).
    bins = span == 0 ? 1 : (span + spec.value - 1) / spec.value;
  }
  if (bins <= 0) throw ConfigError("snapshot settings yield zero bins");

  SnapshotSequence seq;
  seq.labels = log.labels;
  seq.boundaries.resize(static_cast<std::size_t>(bins) + 1);
  for (std::int64_t i = 0; i <= bins; ++i) {
    if (spec.kind == SnapshotSpec::Kind::BinCount) {
      seq.boundaries[i] = static_cast<double>(log.t_min) +
                          static_cast<double>(span) * static_cast<double>(i) / static_cast<double>(bins);
    } else {
      seq.boundaries[i] = static_cast<double>(log.t_min + i * spec.value);
    }
  }
  seq.boundaries.back() = static_cast<double>(log.t_max);

  auto bin_of = [&](Timestamp t) -> std::int64_t {
    const auto offset = static_cast<__int128>(t - log.t_min);
    std::int64_t b = 0;
    if (spec.kind == SnapshotSpec::Kind::BinCount) {
      b = span == 0 ? 0 : static_cast<std::int64_t>(offset * bins / span);
    } else {
      b = static_cast<std::int64_t>(offset / spec.value);
    }
    return std::min(b, bins - 1);
  };

  std::vector<std::vector<Edge>> per_bin(static_cast<std::size_t>(bins));
  for (const auto& e : log.events) {
    per_bin[bin_of(e.t)].emplace_back(std::min(e.x, e.y), std::max(e.x, e.y));
  }
  seq.snapshots.reserve(per_bin.size());
  for (std::size_t i = 0; i < per_bin.size(); ++i) {
    Interval iv{seq.boundaries[i], seq.boundaries[i + 1], i + 1 == per_bin.size()};
    seq.snapshots.push_back(Snapshot::from_edges(log.node_count(), per_bin[i], iv));
  }
  return seq;
}

ActivationStats activation_stats(const SnapshotSequence& seq) {
  if (seq.snapshots.empty()) throw ArgumentError("snapshot sequence is empty");
  std::vector<std::size_t> node_count(seq.labels.size(), 0);
  std::map<Edge, std::size_t> edge_count;
  for (const auto& g : seq.snapshots) {
    if (node_count.size() < g.node_count()) node_count.resize(g.node_count(), 0);
    for (NodeId v : g.active()) ++node_count[v];
    for (const auto& e : g.edges()) ++edge_count[e];
  }
  ActivationStats stats;
  std::size_t ever_active = 0;
  std::size_t total = 0;
  for (auto c : node_count) {
    if (c > 0) {
      ++ever_active;
      total += c;
    }
  }
  if (ever_active > 0) stats.nodes = static_cast<double>(total) / static_cast<double>(ever_active);
  std::size_t edge_total = 0;
  for (const auto& [e, c] : edge_count) edge_total += c;
  if (!edge_count.empty()) {
    stats.edges = static_cast<double>(edge_total) / static_cast<double>(edge_count.size());
  }
  return stats;
}

std::vector<HopDistance> bfs_distances(const Snapshot& g, NodeId source) {
  if (!g.is_active(source)) throw ArgumentError("bfs source " + std::to_string(source) + " is not active");
  std::vector<HopDistance> dist(g.node_count());
  std::vector<NodeId> queue;
  queue.reserve(g.active_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    std::uint32_t next = *dist[u] + 1;
    for (NodeId v : g.neighbors(u)) {
      if (!dist[v]) {
        dist[v] = next;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::size_t ball_size(const Snapshot& g, NodeId n, std::uint32_t k) {
  if (!g.is_active(n)) throw ArgumentError("ball center " + std::to_string(n) + " is not active");
  std::vector<std::uint32_t> depth(g.node_count(), 0);
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> queue{n};
  seen[n] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    if (depth[u] == k) continue;
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return queue.size();
}

std::span<const Timestamp> AggregatedGraph::edge_times(NodeId u, NodeId v) const {
  Edge key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return {};
  return times[static_cast<std::size_t>(it - edges.begin())];
}

AggregatedGraph aggregate_graph(const EventLog& log) {
  if (log.events.empty()) throw ArgumentError("event log is empty");
  std::map<Edge, std::vector<Timestamp>> grouped;
  for (const auto& e : log.events) {
    grouped[{std::min(e.x, e.y), std::max(e.x, e.y)}].push_back(e.t);
  }
  AggregatedGraph ag;
  ag.edges.reserve(grouped.size());
  ag.times.reserve(grouped.size());
  for (auto& [edge, ts] : grouped) {
    std::sort(ts.begin(), ts.end());
    ag.edges.push_back(edge);
    ag.times.push_back(std::move(ts));
  }
  Interval whole{static_cast<double>(log.t_min), static_cast<double>(log.t_max), true};
  ag.graph = Snapshot::from_edges(log.node_count(), ag.edges, whole);
  return ag;
}

}  // namespace nclid
