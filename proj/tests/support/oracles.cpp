#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

namespace nclid::oracle {

namespace {

std::vector<std::vector<char>> adjacency(const Snapshot& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (auto [u, v] : g.edges()) {
    a[u][v] = 1;
    a[v][u] = 1;
  }
  return a;
}

// a/b > c/d for positive denominators.
bool greater(std::pair<std::int64_t, std::int64_t> x, std::pair<std::int64_t, std::int64_t> y) {
  return x.first * y.second > y.first * x.second;
}

}  // namespace

DistanceMatrix all_pairs(const Snapshot& g) {
  const std::size_t n = g.node_count();
  constexpr std::uint64_t inf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, inf));
  auto a = adjacency(g);
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  DistanceMatrix out(n, std::vector<std::optional<std::uint32_t>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] < inf) out[i][j] = static_cast<std::uint32_t>(d[i][j]);
    }
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> fitness_fraction(const Snapshot& g, std::span<const NodeId> members) {
  std::set<NodeId> in(members.begin(), members.end());
  std::int64_t k_in = 0;
  std::int64_t k_out = 0;
  for (auto [u, v] : g.edges()) {
    const bool iu = in.count(u) > 0;
    const bool iv = in.count(v) > 0;
    if (iu && iv) k_in += 2;
    else if (iu || iv) k_out += 1;
  }
  return {k_in, k_in + k_out};
}

CommunityTrace greedy_community(const Snapshot& g, NodeId seed) {
  const std::size_t n = g.node_count();
  auto a = adjacency(g);
  std::set<NodeId> members{seed};
  std::vector<Move> moves;
  auto fit = [&](const std::set<NodeId>& s) {
    std::vector<NodeId> v(s.begin(), s.end());
    return fitness_fraction(g, v);
  };

  while (moves.size() < 4 * n) {
    auto current = fit(members);
    std::optional<NodeId> best;
    std::pair<std::int64_t, std::int64_t> best_fit{0, 1};
    for (NodeId v = 0; v < n; ++v) {
      if (members.count(v)) continue;
      bool adjacent = false;
      for (NodeId m : members) adjacent = adjacent || a[v][m];
      if (!adjacent) continue;
      auto s = members;
      s.insert(v);
      auto f = fit(s);
      if (!best || greater(f, best_fit)) {
        best = v;
        best_fit = f;
      }
    }
    if (!best || !greater(best_fit, current)) break;
    members.insert(*best);
    moves.push_back({true, *best});

    bool again = true;
    while (again && moves.size() < 4 * n) {
      again = false;
      current = fit(members);
      for (NodeId u : members) {
        if (u == seed) continue;
        auto s = members;
        s.erase(u);
        if (greater(fit(s), current)) {
          members.erase(u);
          moves.push_back({false, u});
          again = true;
          break;
        }
      }
    }
  }
  return {{members.begin(), members.end()}, moves};
}

std::vector<double> betweenness(const Snapshot& g) {
  const std::size_t n = g.node_count();
  auto a = adjacency(g);
  auto d = all_pairs(g);
  std::vector<double> score(n, 0.0);
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      if (!d[s][t]) continue;
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> path{s};
      std::function<void(NodeId)> walk = [&](NodeId v) {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        for (NodeId w = 0; w < n; ++w) {
          if (a[v][w] && d[s][w] && *d[s][w] == *d[s][v] + 1 && d[w][t] && *d[w][t] + *d[s][w] == *d[s][t]) {
            path.push_back(w);
            walk(w);
            path.pop_back();
          }
        }
      };
      walk(s);
      for (const auto& p : paths) {
        for (std::size_t i = 1; i + 1 < p.size(); ++i) score[p[i]] += 1.0 / static_cast<double>(paths.size());
      }
    }
  }
  return score;
}

std::vector<Edge> reconstruct(const std::vector<std::vector<double>>& points, std::size_t budget) {
  std::vector<std::tuple<double, NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < points.size(); ++u) {
    for (NodeId v = u + 1; v < points.size(); ++v) {
      double s = 0.0;
      for (std::size_t k = 0; k < points[u].size(); ++k) s += (points[u][k] - points[v][k]) * (points[u][k] - points[v][k]);
      pairs.emplace_back(s, u, v);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<Edge> out;
  for (std::size_t i = 0; i < budget; ++i) out.emplace_back(std::get<1>(pairs[i]), std::get<2>(pairs[i]));
  return out;
}

MwuCounts mwu(std::span<const double> high, std::span<const double> low) {
  MwuCounts r;
  double greater_pairs = 0.0;
  double less_pairs = 0.0;
  double tie_pairs = 0.0;
  for (double h : high) {
    for (double l : low) {
      if (h > l) greater_pairs += 1;
      else if (h < l) less_pairs += 1;
      else tie_pairs += 1;
    }
  }
  const double total = static_cast<double>(high.size() * low.size());
  r.u_high = greater_pairs + 0.5 * tie_pairs;
  r.ps_high = greater_pairs / total;
  r.ps_low = less_pairs / total;

  // Permutation distribution of U over every choice of which pooled values form "high".
  std::vector<double> pooled(high.begin(), high.end());
  pooled.insert(pooled.end(), low.begin(), low.end());
  const std::size_t n = pooled.size();
  const std::size_t k = high.size();
  const double centre = total / 2.0;
  const double observed = std::abs(r.u_high - centre);
  std::size_t extreme = 0;
  std::size_t all = 0;
  std::vector<char> pick(n, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
  std::sort(pick.begin(), pick.end());
  do {
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pick[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (pick[j]) continue;
        u += pooled[i] > pooled[j] ? 1.0 : (pooled[i] == pooled[j] ? 0.5 : 0.0);
      }
    }
    ++all;
    if (std::abs(u - centre) >= observed - 1e-9) ++extreme;
  } while (std::next_permutation(pick.begin(), pick.end()));
  r.exact_p = std::min(1.0, static_cast<double>(extreme) / static_cast<double>(all));
  return r;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  auto ranks = [](std::span<const double> v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0.0;
      double equal = 0.0;
      for (double w : v) {
        if (w < v[i]) less += 1;
        else if (w == v[i]) equal += 1;
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  auto rx = ranks(x);
  auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
    sxy += (rx[i] - mx) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> temporal_distance(const EventLog& log, NodeId i, NodeId j) {
  if (i == j) return 0.0;
  std::set<Timestamp> starts;
  for (const auto& e : log.events) starts.insert(e.t);

  double sum = 0.0;
  std::size_t count = 0;
  for (Timestamp s : starts) {
    std::optional<Timestamp> best;
    // Depth-first over event sequences; `used` keeps each journey simple in events.
    std::vector<char> used(log.events.size(), 0);
    std::function<void(NodeId, std::optional<Timestamp>)> extend = [&](NodeId at, std::optional<Timestamp> last) {
      for (std::size_t e = 0; e < log.events.size(); ++e) {
        const auto& ev = log.events[e];
        if (used[e]) continue;
        const bool ok_time = last ? ev.t > *last : ev.t >= s;
        if (!ok_time) continue;
        NodeId next;
        if (ev.x == at) next = ev.y;
        else if (ev.y == at) next = ev.x;
        else continue;
        if (best && ev.t >= *best) continue;
        if (next == j) {
          best = ev.t;
          continue;
        }
        used[e] = 1;
        extend(next, ev.t);
        used[e] = 0;
      }
    };
    extend(i, std::nullopt);
    if (best) {
      sum += static_cast<double>(*best - s);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace nclid::oracle
