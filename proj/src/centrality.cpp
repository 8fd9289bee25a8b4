#include "nclid/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nclid/error.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

std::string_view to_string(CentralityMetric metric) {
  switch (metric) {
    case CentralityMetric::Degree: return "degree";
    case CentralityMetric::Betweenness: return "betweenness";
    case CentralityMetric::Closeness: return "closeness";
    case CentralityMetric::Eigenvector: return "eigenvector";
    case CentralityMetric::Shell: return "shell";
  }
  return "unknown";
}

CentralityMetric parse_centrality_metric(std::string_view name) {
  for (auto m : kAllCentralityMetrics) {
    if (name == to_string(m)) return m;
  }
  if (name == "shell-index") return CentralityMetric::Shell;
  throw ArgumentError("unknown centrality metric '" + std::string(name) + "'");
}

CentralityVector centrality(const Snapshot& g, CentralityMetric metric, std::size_t threads) {
  if (g.active_count() == 0) throw ArgumentError("centrality needs at least one active node");
  switch (metric) {
    case CentralityMetric::Degree: return {metric, degree_centrality(g)};
    case CentralityMetric::Betweenness: return {metric, betweenness_centrality(g, threads)};
    case CentralityMetric::Closeness: return {metric, closeness_centrality(g)};
    case CentralityMetric::Eigenvector: return {metric, eigenvector_centrality(g)};
    case CentralityMetric::Shell: return {metric, shell_index(g)};
  }
  throw ArgumentError("unknown centrality metric");
}

std::vector<double> degree_centrality(const Snapshot& g) {
  std::vector<double> out(g.node_count(), 0.0);
  for (NodeId v : g.active()) out[v] = static_cast<double>(g.degree(v));
  return out;
}

namespace {

// Single-source Brandes dependency accumulation into `score`.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n) : sigma(n), dist(n), delta(n) {}

  std::vector<double> sigma;
  std::vector<std::int64_t> dist;
  std::vector<double> delta;
  std::vector<NodeId> order;
  std::vector<NodeId> queue;
};

void accumulate_from(const Snapshot& g, NodeId s, BrandesWorkspace& ws, std::vector<double>& score) {
  std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
  std::fill(ws.dist.begin(), ws.dist.end(), -1);
  std::fill(ws.delta.begin(), ws.delta.end(), 0.0);
  ws.order.clear();
  ws.queue.clear();

  ws.sigma[s] = 1.0;
  ws.dist[s] = 0;
  ws.queue.push_back(s);
  for (std::size_t head = 0; head < ws.queue.size(); ++head) {
    NodeId v = ws.queue[head];
    ws.order.push_back(v);
    for (NodeId w : g.neighbors(v)) {
      if (ws.dist[w] < 0) {
        ws.dist[w] = ws.dist[v] + 1;
        ws.queue.push_back(w);
      }
      if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
    }
  }
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    NodeId w = *it;
    for (NodeId v : g.neighbors(w)) {
      if (ws.dist[v] == ws.dist[w] - 1) ws.delta[v] += ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
    }
    if (w != s) score[w] += ws.delta[w];
  }
}

}  // namespace

std::vector<double> betweenness_centrality(const Snapshot& g, std::size_t threads) {
  const auto active = g.active();
  const std::size_t blocks = std::max<std::size_t>(1, std::min(threads, active.size()));
  std::vector<std::vector<double>> partial(blocks);
  const std::size_t chunk = (active.size() + blocks - 1) / std::max<std::size_t>(1, blocks);
  parallel_for(blocks, blocks, [&](std::size_t b) {
    partial[b].assign(g.node_count(), 0.0);
    BrandesWorkspace ws(g.node_count());
    const std::size_t end = std::min(active.size(), (b + 1) * chunk);
    for (std::size_t i = b * chunk; i < end; ++i) accumulate_from(g, active[i], ws, partial[b]);
  });
  std::vector<double> out(g.node_count(), 0.0);
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < p.size(); ++v) out[v] += p[v];
  }
  // Every unordered pair was visited from both ends.
  for (auto& x : out) x /= 2.0;
  return out;
}

std::vector<double> closeness_centrality(const Snapshot& g) {
  std::vector<double> out(g.node_count(), 0.0);
  const double others = static_cast<double>(g.active_count()) - 1.0;
  if (others <= 0.0) return out;
  for (NodeId v : g.active()) {
    const auto dist = bfs_distances(g, v);
    double reached = 0.0;
    double total = 0.0;
    for (const auto& d : dist) {
      if (d) {
        reached += 1.0;
        total += *d;
      }
    }
    if (total > 0.0) out[v] = (reached - 1.0) / total * ((reached - 1.0) / others);
  }
  return out;
}

std::vector<double> eigenvector_centrality(const Snapshot& g, const EigenvectorOptions& options) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);

  // Largest component; ties go to the component holding the smallest index.
  std::vector<int> component(n, -1);
  std::vector<std::vector<NodeId>> components;
  for (NodeId s : g.active()) {
    if (component[s] >= 0) continue;
    const int id = static_cast<int>(components.size());
    std::vector<NodeId> members{s};
    component[s] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (NodeId w : g.neighbors(members[head])) {
        if (component[w] < 0) {
          component[w] = id;
          members.push_back(w);
        }
      }
    }
    components.push_back(std::move(members));
  }
  if (components.empty()) return out;
  auto largest = std::max_element(components.begin(), components.end(),
                                  [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<NodeId> nodes = *largest;
  std::sort(nodes.begin(), nodes.end());

  std::vector<double> x(n, 0.0);
  std::vector<double> next(n, 0.0);
  const double start = 1.0 / std::sqrt(static_cast<double>(nodes.size()));
  for (NodeId v : nodes) x[v] = start;

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double norm = 0.0;
    for (NodeId v : nodes) {
      double acc = x[v];
      for (NodeId w : g.neighbors(v)) acc += x[w];
      next[v] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    double change = 0.0;
    for (NodeId v : nodes) {
      next[v] /= norm;
      change += (next[v] - x[v]) * (next[v] - x[v]);
    }
    std::swap(x, next);
    if (std::sqrt(change) < options.tolerance) {
      for (NodeId v : nodes) out[v] = x[v];
      return out;
    }
  }
  throw ConvergenceError("eigenvector centrality did not converge in " + std::to_string(options.max_iterations) +
                         " iterations");
}

std::vector<double> shell_index(const Snapshot& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> degree(n, 0);
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    max_degree = std::max(max_degree, degree[v]);
  }
  // Bucket sort by degree (Batagelj-Zaversnik).
  std::vector<std::size_t> bin(max_degree + 1, 0);
  for (auto d : degree) ++bin[d];
  std::size_t start = 0;
  for (auto& b : bin) {
    auto count = b;
    b = start;
    start += count;
  }
  std::vector<NodeId> order(n);
  std::vector<std::size_t> position(n);
  for (NodeId v = 0; v < n; ++v) {
    position[v] = bin[degree[v]]++;
    order[position[v]] = v;
  }
  for (std::size_t d = max_degree; d > 0; --d) bin[d] = bin[d - 1];
  if (!bin.empty()) bin[0] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    NodeId v = order[i];
    for (NodeId u : g.neighbors(v)) {
      if (degree[u] > degree[v]) {
        const std::size_t du = degree[u];
        const std::size_t pu = position[u];
        const std::size_t pw = bin[du];
        NodeId w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          position[u] = pw;
          position[w] = pu;
        }
        ++bin[du];
        --degree[u];
      }
    }
  }
  return {degree.begin(), degree.end()};
}

}  // namespace nclid
