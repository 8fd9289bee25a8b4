#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "nclid/error.hpp"
#include "nclid/lid.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

namespace {

constexpr Timestamp kNever = std::numeric_limits<Timestamp>::max();

struct ScanResult {
  std::vector<Timestamp> arrival;
  std::vector<std::optional<std::size_t>> via;  // index of the event that set the arrival
};

std::size_t first_event_at_or_after(const EventLog& log, Timestamp t) {
  auto it = std::lower_bound(log.events.begin(), log.events.end(), t,
                             [](const Event& e, Timestamp value) { return e.t < value; });
  return static_cast<std::size_t>(it - log.events.begin());
}

// Earliest arrival from `source` when the first hop may depart at any t >= start.
void earliest_arrival(const EventLog& log, NodeId source, Timestamp start, std::vector<Timestamp>& arrival,
                      std::vector<std::optional<std::size_t>>* via) {
  std::fill(arrival.begin(), arrival.end(), kNever);
  if (via) std::fill(via->begin(), via->end(), std::nullopt);
  auto can_leave = [&](NodeId u, Timestamp t) { return u == source || arrival[u] < t; };
  auto reach = [&](NodeId v, Timestamp t, std::size_t idx) {
    if (v != source && t < arrival[v]) {
      arrival[v] = t;
      if (via) (*via)[v] = idx;
    }
  };
  for (std::size_t idx = first_event_at_or_after(log, start); idx < log.events.size(); ++idx) {
    const Event& e = log.events[idx];
    // Both tests use the state before this event, so one event never chains with itself.
    const bool from_x = can_leave(e.x, e.t);
    const bool from_y = can_leave(e.y, e.t);
    if (from_x) reach(e.y, e.t, idx);
    if (from_y) reach(e.x, e.t, idx);
  }
}

void check_node(const EventLog& log, NodeId v) {
  if (v >= log.node_count()) throw ArgumentError("unknown node " + std::to_string(v));
}

}  // namespace

std::vector<TemporalDistance> temporal_distances_from(const EventLog& log, NodeId source) {
  check_node(log, source);
  const std::size_t n = log.node_count();

  std::vector<Timestamp> starts;
  std::vector<Timestamp> departures;
  for (const auto& e : log.events) {
    if (starts.empty() || starts.back() != e.t) starts.push_back(e.t);
    if ((e.x == source || e.y == source) && (departures.empty() || departures.back() != e.t)) {
      departures.push_back(e.t);
    }
  }
  std::vector<std::int64_t> prefix(starts.size() + 1, 0);
  for (std::size_t i = 0; i < starts.size(); ++i) prefix[i + 1] = prefix[i] + starts[i];

  std::vector<TemporalDistance> out(n);
  std::vector<Timestamp> arrival(n);
  // Every start time s in (previous departure, d] first leaves the source at d, so
  // the earliest arrivals for the whole group equal those for start time d.
  std::size_t group_begin = 0;
  for (Timestamp d : departures) {
    auto group_end = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), d) - starts.begin());
    const auto group_count = static_cast<std::int64_t>(group_end - group_begin);
    const std::int64_t group_sum = prefix[group_end] - prefix[group_begin];
    group_begin = group_end;
    if (group_count == 0) continue;

    earliest_arrival(log, source, d, arrival, nullptr);
    for (NodeId v = 0; v < n; ++v) {
      if (v == source || arrival[v] == kNever) continue;
      out[v].latency_sum += group_count * arrival[v] - group_sum;
      out[v].count += group_count;
    }
  }
  // The diagonal is zero by definition.
  out[source] = TemporalDistance{0, 1};
  return out;
}

double temporal_distance(const AggregatedGraph& ag, const EventLog& log, NodeId i, NodeId j) {
  check_node(log, i);
  check_node(log, j);
  if (i >= ag.graph.node_count() || j >= ag.graph.node_count()) {
    throw ArgumentError("node outside the aggregated graph");
  }
  return temporal_distances_from(log, i)[j].mean();
}

std::vector<std::vector<TemporalDistance>> temporal_distance_matrix(const EventLog& log, std::size_t threads) {
  std::vector<std::vector<TemporalDistance>> rows(log.node_count());
  parallel_for(rows.size(), threads,
               [&](std::size_t i) { rows[i] = temporal_distances_from(log, static_cast<NodeId>(i)); });
  return rows;
}

std::vector<Event> temporal_path(const EventLog& log, NodeId i, NodeId j, Timestamp start) {
  check_node(log, i);
  check_node(log, j);
  if (i == j) return {};
  std::vector<Timestamp> arrival(log.node_count());
  std::vector<std::optional<std::size_t>> via(log.node_count());
  earliest_arrival(log, i, start, arrival, &via);
  if (arrival[j] == kNever) return {};

  std::vector<Event> path;
  NodeId cur = j;
  while (cur != i) {
    const Event& e = log.events[*via[cur]];
    // Orient the event along the journey.
    NodeId prev = e.x == cur ? e.y : e.x;
    path.push_back(Event{prev, cur, e.t, e.w});
    cur = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

NcLidScore temporal_nc_lid(const AggregatedGraph& ag, const EventLog& log, NodeId n, double alpha) {
  check_node(log, n);
  if (!ag.graph.is_active(n)) throw ArgumentError("node " + std::to_string(n) + " is not in the aggregated graph");
  const auto community = detect_natural_community(ag.graph, n, alpha);
  const auto dist = temporal_distances_from(log, n);

  TemporalDistance radius{0, 1};
  std::size_t reachable_members = 0;
  for (NodeId v : community.members) {
    if (!dist[v].reachable()) continue;
    ++reachable_members;
    if (!(dist[v] <= radius)) radius = dist[v];
  }
  if (community.members.size() > 1 && reachable_members <= 1) {
    throw UndefinedError("no member of the community of node " + std::to_string(n) + " is temporally reachable");
  }

  NcLidScore score;
  score.node = n;
  score.community_size = reachable_members;
  score.radius = radius.mean();
  for (const auto& d : dist) {
    if (d.reachable() && d <= radius) ++score.ball;
  }
  score.value = std::log(static_cast<double>(score.ball) / static_cast<double>(score.community_size));
  return score;
}

}  // namespace nclid
