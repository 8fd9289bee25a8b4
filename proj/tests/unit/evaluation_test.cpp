#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "nclid/error.hpp"
#include "nclid/evaluation.hpp"
#include "oracles.hpp"

using namespace nclid;
using namespace nclid::testing;

namespace {

SnapshotEmbedding embedding_of(const std::vector<std::vector<double>>& points) {
  SnapshotEmbedding e;
  e.dim = points.empty() ? 0 : points[0].size();
  for (NodeId v = 0; v < points.size(); ++v) {
    e.nodes.push_back(v);
    e.values.insert(e.values.end(), points[v].begin(), points[v].end());
  }
  return e;
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, Rng& rng, bool grid) {
  std::vector<std::vector<double>> p(n, std::vector<double>(dim));
  for (auto& row : p) {
    for (auto& x : row) x = grid ? static_cast<double>(rng.below(3)) : rng.uniform();
  }
  return p;
}

}  // namespace

TEST(Reconstruct, SeparatedPairs) {
  auto e = embedding_of({{0, 0}, {0, 1}, {10, 0}, {10, 1}});
  EXPECT_EQ(reconstruct(e, 2), (std::vector<Edge>{{0, 1}, {2, 3}}));
  EXPECT_EQ(reconstruct(e, 6).size(), 6u);
  EXPECT_THROW(reconstruct(e, 7), ArgumentError);
  EXPECT_THROW(reconstruct(embedding_of({{0, 0}}), 0), ArgumentError);
}

TEST(Reconstruct, MatchesPairSortWithTies) {
  Rng rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(14);
    auto pts = random_points(n, 1 + rng.below(3), rng, trial % 2 == 0);
    const std::size_t budget = rng.below(n * (n - 1) / 2 + 1);
    EXPECT_EQ(reconstruct(embedding_of(pts), budget, 1 + trial % 3), oracle::reconstruct(pts, budget));
  }
}

TEST(Reconstruct, LargeInputCrossesTiles) {
  Rng rng(52);
  auto pts = random_points(300, 2, rng, true);
  auto got = reconstruct(embedding_of(pts), 500, 2);
  EXPECT_EQ(got, oracle::reconstruct(pts, 500));
}

TEST(Score, HandExample) {
  auto original = graph(3, {{0, 1}, {1, 2}});
  std::vector<Edge> recon{{0, 1}, {0, 2}};
  auto r = score_reconstruction(original, recon);
  ASSERT_EQ(r.nodes.size(), 3u);
  EXPECT_DOUBLE_EQ(r.nodes[0].precision, 0.5);
  EXPECT_DOUBLE_EQ(r.nodes[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(r.nodes[0].f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.nodes[1].precision, 1.0);
  EXPECT_DOUBLE_EQ(r.nodes[1].recall, 0.5);
  EXPECT_EQ(r.nodes[2].correct, 0u);
  EXPECT_DOUBLE_EQ(r.micro_precision, 0.5);
  EXPECT_DOUBLE_EQ(r.micro_recall, 0.5);
}

TEST(Score, HarmonicMean) {
  EXPECT_NEAR(harmonic_mean(0.8289, 0.8346), 0.8317, 5e-5);
  EXPECT_EQ(harmonic_mean(0.0, 0.0), 0.0);
}

TEST(Score, Invariants) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_graph(10, 0.3, rng);
    if (g.edge_count() == 0) continue;
    auto self = score_reconstruction(g, g.edges());
    EXPECT_EQ(self.micro_f1, 1.0);
    for (const auto& n : self.nodes) EXPECT_EQ(n.f1, 1.0);

    auto other = random_graph(10, 0.3, rng).edges();
    auto r = score_reconstruction(g, other);
    std::size_t correct = 0;
    for (const auto& n : r.nodes) {
      correct += n.correct;
      if (n.precision > 0 && n.recall > 0) EXPECT_NEAR(n.f1, harmonic_mean(n.precision, n.recall), 1e-15);
    }
    std::size_t shared = 0;
    for (auto e : other) shared += g.has_edge(e.first, e.second);
    EXPECT_EQ(correct, 2 * shared);
  }
}

TEST(Series, PerfectEmbeddingAndSkippedSnapshot) {
  // Two far-apart cliques are reconstructed exactly; the middle bin is empty.
  auto log = log_from("a b 0\nb c 0\na c 0\nd e 0\nd f 0\ne f 0\na b 20\nb c 20\na c 20\n");
  auto seq = build_snapshots(log, SnapshotSpec::width(10));
  ASSERT_EQ(seq.size(), 2u);
  EmbeddingSeries series(seq.size());
  for (std::size_t s = 0; s < seq.size(); ++s) {
    series[s].dim = 1;
    for (NodeId v : seq[s].active()) {
      series[s].nodes.push_back(v);
      series[s].values.push_back(v < 3 ? 0.0 + v * 0.01 : 100.0 + v * 0.01);
    }
  }
  auto eval = evaluate_series(seq, series);
  ASSERT_EQ(eval.reports.size(), 2u);
  for (const auto& r : eval.reports) EXPECT_EQ(r.micro_f1, 1.0);

  auto gap = build_snapshots(log_from("a b 0\nb c 25\na c 25"), SnapshotSpec::width(10));
  ASSERT_EQ(gap.size(), 3u);
  EmbeddingSeries gs(3);
  for (std::size_t s = 0; s < 3; ++s) {
    gs[s].dim = 1;
    for (NodeId v : gap[s].active()) {
      gs[s].nodes.push_back(v);
      gs[s].values.push_back(static_cast<double>(v));
    }
  }
  auto ge = evaluate_series(gap, gs);
  EXPECT_EQ(ge.skipped, std::vector<std::size_t>{1});
  ASSERT_EQ(ge.reports.size(), 2u);
  auto direct = score_reconstruction(gap[2], reconstruct(gs[2], gap[2].edge_count()));
  EXPECT_EQ(ge.reports[1].micro_f1, direct.micro_f1);
  EXPECT_EQ(ge.reports[1].snapshot_index, 2u);
}

TEST(Tune, SingleGridPointAndReproducible) {
  // Two 4-cliques in each of two snapshots.
  std::ostringstream out;
  for (int t : {1, 2}) {
    for (int base : {0, 4}) {
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) out << 'n' << base + i << " n" << base + j << ' ' << t << '\n';
      }
    }
  }
  auto seq = build_snapshots(log_from(out.str()), SnapshotSpec::bins(2));
  TuneOptions opts;
  opts.p_grid = {1.0};
  opts.q_grid = {1.0};
  opts.dims = {10};
  opts.runs = 2;
  opts.sgns.window = 5;
  auto a = tune(seq, opts);
  auto b = tune(seq, opts);
  ASSERT_EQ(a.table.size(), 1u);
  EXPECT_EQ(a.best.f1, a.table[0].f1);
  EXPECT_EQ(a.best.f1, b.best.f1);
  EXPECT_GT(a.best.f1, 0.8);
}
