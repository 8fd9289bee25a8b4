#include "nclid/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "nclid/error.hpp"
#include "nclid/parallel.hpp"
#include "nclid/seeds.hpp"

namespace nclid {

namespace {

struct Candidate {
  double distance;
  NodeId u;
  NodeId v;

  friend bool operator<(const Candidate& a, const Candidate& b) {
    return std::tie(a.distance, a.u, a.v) < std::tie(b.distance, b.u, b.v);
  }
};

constexpr std::size_t kTileRows = 256;

void keep_smallest(std::vector<Candidate>& c, std::size_t budget) {
  if (c.size() <= budget) return;
  std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(budget), c.end());
  c.resize(budget);
}

}  // namespace

std::vector<Edge> reconstruct(const SnapshotEmbedding& emb, std::size_t budget, std::size_t threads) {
  const std::size_t n = emb.size();
  if (n < 2) throw ArgumentError("reconstruction needs at least two embedded nodes");
  const std::size_t pairs = n * (n - 1) / 2;
  if (budget > pairs) {
    throw ArgumentError("edge budget " + std::to_string(budget) + " exceeds the " + std::to_string(pairs) +
                        " available pairs");
  }
  if (budget == 0) return {};

  // Upper-triangular tiles of the pair space, each reduced to its own best `budget`.
  const std::size_t blocks = (n + kTileRows - 1) / kTileRows;
  std::vector<std::pair<std::size_t, std::size_t>> tiles;
  for (std::size_t a = 0; a < blocks; ++a) {
    for (std::size_t b = a; b < blocks; ++b) tiles.emplace_back(a, b);
  }
  std::vector<std::vector<Candidate>> selected(tiles.size());
  parallel_for(tiles.size(), threads, [&](std::size_t t) {
    const auto [a, b] = tiles[t];
    auto& out = selected[t];
    const std::size_t i_end = std::min(n, (a + 1) * kTileRows);
    const std::size_t j_end = std::min(n, (b + 1) * kTileRows);
    for (std::size_t i = a * kTileRows; i < i_end; ++i) {
      const auto x = emb.row(i);
      for (std::size_t j = std::max(i + 1, b * kTileRows); j < j_end; ++j) {
        const auto y = emb.row(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < emb.dim; ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
        out.push_back({std::sqrt(acc), emb.nodes[i], emb.nodes[j]});
      }
    }
    keep_smallest(out, budget);
  });

  std::vector<Candidate> merged;
  for (auto& s : selected) merged.insert(merged.end(), s.begin(), s.end());
  keep_smallest(merged, budget);
  std::sort(merged.begin(), merged.end());

  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& c : merged) edges.emplace_back(c.u, c.v);
  return edges;
}

double harmonic_mean(double a, double b) { return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

ReconstructionReport score_reconstruction(const Snapshot& original, std::span<const Edge> recon) {
  const std::size_t n = original.node_count();
  std::vector<std::size_t> correct(n, 0);
  std::vector<std::size_t> recon_degree(n, 0);
  std::vector<char> involved(n, 0);
  for (NodeId v : original.active()) involved[v] = 1;
  for (auto [u, v] : recon) {
    if (u >= n || v >= n || u == v) throw ArgumentError("reconstructed edge outside the node space");
    ++recon_degree[u];
    ++recon_degree[v];
    involved[u] = involved[v] = 1;
    if (original.has_edge(u, v)) {
      ++correct[u];
      ++correct[v];
    }
  }

  ReconstructionReport report;
  report.edge_budget = recon.size();
  std::size_t sum_correct = 0;
  std::size_t sum_recon = 0;
  std::size_t sum_orig = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!involved[v]) continue;
    NodeReconstruction r;
    r.node = v;
    r.correct = correct[v];
    r.degree_original = original.degree(v);
    r.degree_reconstructed = recon_degree[v];
    r.precision = r.degree_reconstructed > 0 ? static_cast<double>(r.correct) / r.degree_reconstructed : 0.0;
    r.recall = r.degree_original > 0 ? static_cast<double>(r.correct) / r.degree_original : 0.0;
    r.f1 = harmonic_mean(r.precision, r.recall);
    sum_correct += r.correct;
    sum_recon += r.degree_reconstructed;
    sum_orig += r.degree_original;
    report.nodes.push_back(r);
  }
  report.micro_precision = sum_recon > 0 ? static_cast<double>(sum_correct) / sum_recon : 0.0;
  report.micro_recall = sum_orig > 0 ? static_cast<double>(sum_correct) / sum_orig : 0.0;
  report.micro_f1 = harmonic_mean(report.micro_precision, report.micro_recall);
  return report;
}

SeriesEvaluation evaluate_series(const SnapshotSequence& seq, const EmbeddingSeries& series, std::size_t threads) {
  if (series.size() != seq.size()) {
    throw ArgumentError("embedding series has " + std::to_string(series.size()) + " entries for " +
                        std::to_string(seq.size()) + " snapshots");
  }
  SeriesEvaluation result;
  for (std::size_t s = 0; s < seq.size(); ++s) {
    const Snapshot& g = seq[s];
    SnapshotEmbedding emb;
    emb.dim = series[s].dim;
    for (NodeId v : g.active()) {
      if (auto row = series[s].find(v)) {
        emb.nodes.push_back(v);
        auto vec = series[s].row(*row);
        emb.values.insert(emb.values.end(), vec.begin(), vec.end());
      }
    }
    if (emb.size() < 2) {
      result.skipped.push_back(s);
      continue;
    }
    // Edges touching a node without a vector stay in the original graph and count as misses.
    const std::size_t pairs = emb.size() * (emb.size() - 1) / 2;
    auto recon = reconstruct(emb, std::min(g.edge_count(), pairs), threads);
    auto report = score_reconstruction(g, recon);
    report.snapshot_index = s;
    result.reports.push_back(std::move(report));
  }
  return result;
}

ReconstructionReport last_snapshot_report(const SnapshotSequence& seq, const EmbeddingSeries& series,
                                          std::size_t threads) {
  auto eval = evaluate_series(seq, series, threads);
  if (eval.reports.empty()) throw UndefinedError("no snapshot could be evaluated");
  return eval.reports.back();
}

TuneResult tune(const SnapshotSequence& seq, const TuneOptions& options) {
  if (options.p_grid.empty() || options.q_grid.empty() || options.dims.empty()) {
    throw ConfigError("tuning grids must be non-empty");
  }
  if (options.runs < 1) throw ConfigError("tuning needs at least one run per configuration");

  std::vector<TuneRow> table;
  for (auto dim : options.dims) {
    for (auto p : options.p_grid) {
      for (auto q : options.q_grid) table.push_back(TuneRow{p, q, dim, 0.0, 0.0, 0.0});
    }
  }
  const std::size_t jobs = table.size() * options.runs;
  std::vector<ReconstructionReport> outcome(jobs);
  parallel_for(jobs, options.threads, [&](std::size_t job) {
    const TuneRow& row = table[job / options.runs];
    const std::size_t run = job % options.runs;
    WalkConfig walk = options.walk;
    walk.p = row.p;
    walk.q = row.q;
    walk.seed = stage_seed(options.master_seed, "tune-walk", run);
    SgnsConfig sgns = options.sgns;
    sgns.dim = row.dim;
    sgns.seed = stage_seed(options.master_seed, "tune-sgns", run);
    sgns.threads = 1;
    outcome[job] = last_snapshot_report(seq, embed_dynamic(seq, walk, sgns));
  });

  for (std::size_t c = 0; c < table.size(); ++c) {
    for (std::size_t r = 0; r < options.runs; ++r) {
      const auto& rep = outcome[c * options.runs + r];
      table[c].precision += rep.micro_precision;
      table[c].recall += rep.micro_recall;
      table[c].f1 += rep.micro_f1;
    }
    const auto runs = static_cast<double>(options.runs);
    table[c].precision /= runs;
    table[c].recall /= runs;
    table[c].f1 /= runs;
  }

  TuneResult result;
  result.table = table;
  result.best = *std::min_element(table.begin(), table.end(), [](const TuneRow& a, const TuneRow& b) {
    return std::make_tuple(-a.f1, a.dim, a.p, a.q) < std::make_tuple(-b.f1, b.dim, b.p, b.q);
  });
  return result;
}

}  // namespace nclid
