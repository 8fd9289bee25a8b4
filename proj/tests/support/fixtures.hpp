#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "nclid/graph.hpp"
#include "nclid/seeds.hpp"

namespace nclid::testing {

inline Snapshot graph(std::size_t n, std::initializer_list<Edge> edges) {
  std::vector<Edge> e(edges);
  return Snapshot::from_edges(n, e);
}

/// Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3 (a..f = 0..5).
inline Snapshot barbell() { return graph(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}); }

inline Snapshot complete(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  }
  return Snapshot::from_edges(n, e);
}

inline Snapshot star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Snapshot::from_edges(leaves + 1, e);
}

inline Snapshot random_graph(std::size_t n, double density, Rng& rng) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < density) e.emplace_back(u, v);
    }
  }
  return Snapshot::from_edges(n, e);
}

inline Snapshot random_tree(std::size_t n, Rng& rng) {
  std::vector<Edge> e;
  for (NodeId v = 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(rng.below(v)), v);
  return Snapshot::from_edges(n, e);
}

inline EventLog log_from(const std::string& text) {
  std::istringstream in(text);
  return parse_event_log(in);
}

/// Random event log over `nodes` labels with timestamps in [1, max_time].
inline EventLog random_log(std::size_t nodes, std::size_t events, Timestamp max_time, Rng& rng) {
  std::ostringstream out;
  for (std::size_t i = 0; i < events; ++i) {
    auto x = rng.below(nodes);
    auto y = rng.below(nodes - 1);
    if (y >= x) ++y;
    out << 'n' << x << ' ' << 'n' << y << ' ' << 1 + static_cast<Timestamp>(rng.below(max_time)) << '\n';
  }
  return log_from(out.str());
}

}  // namespace nclid::testing
