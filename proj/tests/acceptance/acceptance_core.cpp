// Oracle-equivalence acceptance checks. Prints one PASS/FAIL line per check and
// exits non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>

#include "fixtures.hpp"
#include "nclid/centrality.hpp"
#include "nclid/community.hpp"
#include "nclid/embedding.hpp"
#include "nclid/error.hpp"
#include "nclid/evaluation.hpp"
#include "nclid/lid.hpp"
#include "nclid/stats.hpp"
#include "oracles.hpp"

using namespace nclid;
using namespace nclid::testing;

namespace {

// Tolerances and budgets.
constexpr double kBfsSeconds = 5.0;
constexpr double kCommunitySeconds = 30.0;
constexpr double kLidTolerance = 1e-12;
constexpr double kF1Expected = 0.8317;
constexpr double kF1Tolerance = 5e-5;
constexpr double kSpearmanTolerance = 1e-12;
constexpr double kPValueTolerance = 1e-12;
constexpr double kBetweennessTolerance = 1e-9;
constexpr double kEigenResidual = 1e-8;
constexpr double kGradientRelative = 1e-4;
constexpr double kWalkDeviation = 0.01;
constexpr std::size_t kWalkSteps = 1'000'000;

int failures = 0;

void verdict(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %-32s %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

void check_bfs() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(stage_seed(1, "accept-bfs"));
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_graph(1 + rng.below(12), 0.1 + 0.5 * rng.uniform(), rng);
    auto oracle = oracle::all_pairs(g);
    for (NodeId s : g.active()) {
      auto d = bfs_distances(g, s);
      for (NodeId t = 0; t < g.node_count(); ++t) mismatches += d[t] != oracle[s][t];
    }
  }
  const double secs = seconds_since(start);
  verdict("bfs_equals_floyd_warshall", mismatches == 0 && secs < kBfsSeconds,
          fmt("200 graphs, %zu mismatches, %.2fs (limit %.0fs)", mismatches, secs, kBfsSeconds));
}

void check_community() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(stage_seed(1, "accept-community"));
  std::size_t seeds = 0, trace_mismatch = 0, not_optimal = 0, seed_lost = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_graph(2 + rng.below(9), 0.2 + 0.4 * rng.uniform(), rng);
    for (NodeId seed : g.active()) {
      ++seeds;
      auto c = detect_natural_community(g, seed);
      auto trace = oracle::greedy_community(g, seed);
      if (c.members != trace.members || c.steps != trace.moves.size()) ++trace_mismatch;
      if (!c.contains(seed)) ++seed_lost;
      auto f = oracle::fitness_fraction(g, c.members);
      auto worse_or_equal = [&](std::vector<NodeId> s) {
        std::sort(s.begin(), s.end());
        auto h = oracle::fitness_fraction(g, s);
        return h.first * f.second <= f.first * h.second;
      };
      bool ok = true;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (c.contains(v)) continue;
        bool frontier = false;
        for (NodeId u : g.neighbors(v)) frontier = frontier || c.contains(u);
        if (!frontier) continue;
        auto s = c.members;
        s.push_back(v);
        ok = ok && worse_or_equal(s);
      }
      for (NodeId u : c.members) {
        if (u == seed) continue;
        auto s = c.members;
        s.erase(std::find(s.begin(), s.end(), u));
        ok = ok && worse_or_equal(s);
      }
      if (!ok) ++not_optimal;
    }
  }
  const double secs = seconds_since(start);
  verdict("community_greedy_trace", trace_mismatch == 0 && not_optimal == 0 && seed_lost == 0 && secs < kCommunitySeconds,
          fmt("100 graphs, %zu seeds: %zu trace mismatches, %zu non-optimal, %zu lost seeds, %.2fs", seeds,
              trace_mismatch, not_optimal, seed_lost, secs));
}

void check_lid() {
  auto c = nc_lid(barbell(), 2);
  auto a = nc_lid(barbell(), 0);
  const double err_c = std::abs(c.value - std::log(4.0 / 3.0));
  Rng rng(stage_seed(1, "accept-lid"));
  std::size_t negative = 0, scored = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto g = random_graph(2 + rng.below(20), 0.05 + 0.5 * rng.uniform(), rng);
    for (const auto& s : nc_lid_snapshot(g)) {
      ++scored;
      negative += s.value < 0.0 || s.community_size > s.ball;
    }
  }
  verdict("nclid_barbell_and_sign", err_c <= kLidTolerance && a.value == 0.0 && negative == 0,
          fmt("seed c err %.1e, seed a %.17g, %zu negative of %zu scores on 500 snapshots", err_c, a.value, negative,
              scored));
}

void check_reconstruct() {
  Rng rng(stage_seed(1, "accept-reconstruct"));
  std::size_t mismatches = 0, tie_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(14);
    const std::size_t dim = 1 + rng.below(3);
    const bool grid = trial % 2 == 0;  // integer coordinates force distance ties
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts) {
      for (auto& x : p) x = grid ? static_cast<double>(rng.below(3)) : rng.uniform();
    }
    SnapshotEmbedding e;
    e.dim = dim;
    for (NodeId v = 0; v < n; ++v) {
      e.nodes.push_back(v);
      e.values.insert(e.values.end(), pts[v].begin(), pts[v].end());
    }
    const std::size_t budget = rng.below(n * (n - 1) / 2 + 1);
    auto got = reconstruct(e, budget);
    auto want = oracle::reconstruct(pts, budget);
    tie_cases += grid;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    mismatches += got != want;
  }
  verdict("reconstruct_equals_pair_sort", mismatches == 0,
          fmt("100 point sets (%zu with ties), %zu mismatches", tie_cases, mismatches));
}

void check_f1() {
  const double f1 = harmonic_mean(0.8289, 0.8346);
  verdict("f1_harmonic_mean", std::abs(f1 - kF1Expected) <= kF1Tolerance,
          fmt("f1(0.8289, 0.8346) = %.6f, expected %.4f +- %.0e", f1, kF1Expected, kF1Tolerance));
}

void check_mwu_spearman() {
  Rng rng(stage_seed(1, "accept-mwu"));
  std::size_t bad = 0;
  double worst_p = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t levels = trial % 2 ? 5 : 0;  // half the pairs carry ties
    auto draw = [&](std::size_t n) {
      std::vector<double> v(n);
      for (auto& x : v) x = levels ? static_cast<double>(rng.below(levels)) : rng.uniform();
      return v;
    };
    auto h = draw(1 + rng.below(10));
    auto l = draw(1 + rng.below(10));
    auto r = mwu(h, l);
    auto o = oracle::mwu(h, l);
    worst_p = std::max(worst_p, std::abs(r.p_value - o.exact_p));
    bad += r.u_high != o.u_high || r.ps_high != o.ps_high || r.ps_low != o.ps_low || !r.exact ||
           std::abs(r.p_value - o.exact_p) > kPValueTolerance;
  }
  double worst_rho = 0.0;
  std::size_t undefined = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(40);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = static_cast<double>(rng.below(trial % 2 ? 6 : 1000));
    for (auto& v : y) v = trial % 3 ? static_cast<double>(rng.below(5)) : rng.uniform();
    try {
      worst_rho = std::max(worst_rho, std::abs(spearman(x, y) - oracle::spearman(x, y)));
    } catch (const UndefinedError&) {
      ++undefined;
    }
  }
  verdict("mwu_and_spearman_oracles", bad == 0 && worst_rho <= kSpearmanTolerance,
          fmt("200 MWU pairs: %zu mismatches, max |dp| %.1e; 200 spearman: max |drho| %.1e (%zu constant skipped)", bad,
              worst_p, worst_rho, undefined));
}

void check_centrality() {
  Rng rng(stage_seed(1, "accept-centrality"));
  double worst_b = 0.0, worst_res = 0.0;
  std::size_t shell_violations = 0, convergence_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(11);
    auto g = trial % 2 ? random_tree(n, rng) : random_graph(n, 0.2 + 0.4 * rng.uniform(), rng);
    if (g.active_count() == 0) continue;
    auto b = betweenness_centrality(g);
    auto o = oracle::betweenness(g);
    for (NodeId v = 0; v < n; ++v) worst_b = std::max(worst_b, std::abs(b[v] - o[v]));
    auto s = shell_index(g);
    for (NodeId v = 0; v < n; ++v) shell_violations += s[v] > static_cast<double>(g.degree(v));
    try {
      auto e = eigenvector_centrality(g);
      double lambda = 0.0;
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId w : g.neighbors(u)) lambda += e[u] * e[w];
      }
      double res = 0.0;
      for (NodeId u = 0; u < n; ++u) {
        if (e[u] == 0.0) continue;
        double av = 0.0;
        for (NodeId w : g.neighbors(u)) av += e[w];
        res += (av - lambda * e[u]) * (av - lambda * e[u]);
      }
      worst_res = std::max(worst_res, std::sqrt(res));
    } catch (const ConvergenceError&) {
      ++convergence_failures;
    }
  }
  verdict("centrality_oracles",
          worst_b <= kBetweennessTolerance && shell_violations == 0 && worst_res <= kEigenResidual &&
              convergence_failures == 0,
          fmt("betweenness max err %.1e, shell>degree %zu, eigen residual %.1e, non-converged %zu", worst_b,
              shell_violations, worst_res, convergence_failures));
}

// log σ(x) written out independently of the library.
double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double objective(const std::vector<double>& in, const std::vector<double>& pos,
                 const std::vector<std::vector<double>>& negs) {
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  double f = log_sigmoid(dot(in, pos));
  for (const auto& n : negs) f += log_sigmoid(-dot(in, n));
  return f;
}

void check_gradient() {
  Rng rng(stage_seed(1, "accept-gradient"));
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 + rng.below(30);
    auto draw = [&] {
      std::vector<double> v(dim);
      for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
      return v;
    };
    auto in = draw();
    auto pos = draw();
    std::vector<std::vector<double>> negs(1 + rng.below(8));
    for (auto& n : negs) n = draw();

    std::vector<std::span<const double>> ns(negs.begin(), negs.end());
    auto g = sgns_gradient(in, pos, ns);

    std::vector<double> analytic;
    std::vector<double> numeric;
    const double h = 1e-6;
    auto probe = [&](std::vector<double>& v, const std::vector<double>& grad) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double keep = v[k];
        v[k] = keep + h;
        const double up = objective(in, pos, negs);
        v[k] = keep - h;
        const double down = objective(in, pos, negs);
        v[k] = keep;
        numeric.push_back((up - down) / (2 * h));
        analytic.push_back(grad[k]);
      }
    };
    probe(in, g.input);
    probe(pos, g.positive);
    for (std::size_t j = 0; j < negs.size(); ++j) probe(negs[j], g.negatives[j]);

    double diff = 0.0, norm_a = 0.0, norm_n = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      norm_a += analytic[i] * analytic[i];
      norm_n += numeric[i] * numeric[i];
    }
    worst = std::max(worst, std::sqrt(diff) / std::max({std::sqrt(norm_a), std::sqrt(norm_n), 1e-12}));
    worst = std::max(worst, std::abs(g.objective - objective(in, pos, negs)) / std::abs(objective(in, pos, negs)));
  }
  verdict("sgns_gradient_finite_difference", worst <= kGradientRelative,
          fmt("50 tuples, max relative error %.2e (limit %.0e)", worst, kGradientRelative));
}

double walk_deviation(const Snapshot& g, std::size_t steps_wanted, std::uint64_t seed, std::size_t& steps) {
  WalkConfig cfg;
  cfg.p = 2.0;
  cfg.q = 0.5;
  cfg.seed = seed;
  cfg.walk_length = 80;
  cfg.walks_per_node = (steps_wanted + g.active_count() * (cfg.walk_length - 2) - 1) /
                       (g.active_count() * (cfg.walk_length - 2));
  std::vector<NodeId> starts(g.active().begin(), g.active().end());
  auto walks = sample_walks(g, starts, cfg);

  // (prev, cur) -> counts per neighbour slot of cur. Only biased steps count:
  // the first step of a walk is uniform, and each start sees it just once per walk.
  std::map<std::pair<NodeId, NodeId>, std::vector<double>> counts;
  steps = 0;
  for (const auto& w : walks) {
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
      const NodeId prev = w[i - 1];
      auto nb = g.neighbors(w[i]);
      auto& c = counts[{prev, w[i]}];
      c.resize(nb.size(), 0.0);
      c[static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), w[i + 1]) - nb.begin())] += 1;
      ++steps;
    }
  }
  double worst = 0.0;
  for (const auto& [state, c] : counts) {
    auto exact = transition_distribution(g, state.first, state.second, 2.0, 0.5);
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) worst = std::max(worst, std::abs(c[k] / total - exact[k]));
  }
  return worst;
}

void check_walks() {
  // Two squares joined by chords, with triangles so every weight class occurs.
  auto g = graph(8, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 6}, {5, 6}, {5, 7}, {6, 7}, {0, 7}});
  std::size_t steps = 0;
  const double worst = walk_deviation(g, kWalkSteps, stage_seed(1, "accept-walks"), steps);
  std::size_t small_steps = 0;
  const double small = walk_deviation(g, 100'000, stage_seed(1, "accept-walks"), small_steps);
  verdict("walk_transition_frequencies", worst <= kWalkDeviation,
          fmt("%zu biased steps, max |freq - exact| %.4f (limit %.2f); at %zu steps: %.4f", steps, worst, kWalkDeviation,
              small_steps, small));
}

}  // namespace

int main() {
  check_bfs();
  check_community();
  check_lid();
  check_reconstruct();
  check_f1();
  check_mwu_spearman();
  check_centrality();
  check_gradient();
  check_walks();
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
