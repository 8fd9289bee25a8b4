#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nclid/embedding.hpp"
#include "nclid/graph.hpp"

namespace nclid {

/// The `budget` closest node pairs by Euclidean distance, as (min, max) node pairs in
/// increasing (distance, min, max) order. Throws ArgumentError when fewer than two
/// nodes are embedded or the budget exceeds the number of pairs.
std::vector<Edge> reconstruct(const SnapshotEmbedding& emb, std::size_t budget, std::size_t threads = 1);

double harmonic_mean(double a, double b);

struct NodeReconstruction {
  NodeId node = 0;
  std::size_t correct = 0;
  std::size_t degree_original = 0;
  std::size_t degree_reconstructed = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ReconstructionReport {
  std::size_t snapshot_index = 0;
  std::size_t edge_budget = 0;
  std::vector<NodeReconstruction> nodes;  ///< ascending node index
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
};

/// Per-node precision/recall/F1 of `recon` against `original`, over the active nodes
/// of `original` plus any endpoint of `recon`. Micro scores sum incidences over nodes.
ReconstructionReport score_reconstruction(const Snapshot& original, std::span<const Edge> recon);

struct SeriesEvaluation {
  std::vector<ReconstructionReport> reports;
  std::vector<std::size_t> skipped;  ///< snapshots with fewer than two embedded active nodes
};

/// Reconstructs and scores every snapshot from its own embedding, with budget = the
/// snapshot's edge count and only embedded active nodes participating.
SeriesEvaluation evaluate_series(const SnapshotSequence& seq, const EmbeddingSeries& series, std::size_t threads = 1);

struct TuneRow {
  double p = 1.0;
  double q = 1.0;
  std::size_t dim = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct TuneOptions {
  std::vector<double> p_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> q_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::size_t> dims{10, 25, 50, 100, 200};
  std::size_t runs = 10;
  WalkConfig walk;   ///< p, q and seed are overridden per run
  SgnsConfig sgns;   ///< dim and seed are overridden per run; threads is forced to 1
  std::uint64_t master_seed = 1;
  std::size_t threads = 1;  ///< concurrent (config, run) jobs
};

struct TuneResult {
  TuneRow best;
  std::vector<TuneRow> table;  ///< grid order: dim, then p, then q
};

/// Mean last-snapshot micro scores of `runs` independent embeddings per grid point.
/// Best = highest mean F1; ties prefer smaller dim, then smaller p, then smaller q.
TuneResult tune(const SnapshotSequence& seq, const TuneOptions& options);

/// Micro scores of the last evaluated snapshot of one embedding run.
ReconstructionReport last_snapshot_report(const SnapshotSequence& seq, const EmbeddingSeries& series,
                                          std::size_t threads = 1);

}  // namespace nclid
