#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "nclid/graph.hpp"

namespace nclid {

struct WalkConfig {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 32;  ///< nodes per walk, start included
  double p = 1.0;                ///< return parameter
  double q = 1.0;                ///< in-out parameter
  std::uint64_t seed = 1;

  void validate() const;
};

/// Skip-gram with negative sampling hyperparameters. threads > 1 selects the
/// lock-free throughput mode; threads == 1 is sequential and bit-reproducible.
struct SgnsConfig {
  std::size_t dim = 100;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs_initial = 5;
  std::size_t epochs_update = 1;
  double lr_initial = 0.025;
  double lr_min = 0.0001;
  double noise_power = 0.75;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  void validate() const;
};

using Walk = std::vector<NodeId>;

/// Second-order transition probabilities out of `cur`, aligned with g.neighbors(cur).
/// Weight 1/p returns to `prev`, 1 stays adjacent to `prev`, 1/q moves away; without
/// `prev` the step is uniform. Empty when `cur` has no neighbours.
std::vector<double> transition_distribution(const Snapshot& g, std::optional<NodeId> prev, NodeId cur, double p,
                                            double q);

/// walks_per_node biased walks from each start. Walk r from node v uses its own
/// generator seeded from (seed, v, r), so the output does not depend on `threads`.
/// Walks are ordered round by round; each round visits the starts in an order
/// shuffled by a generator seeded from (seed, r).
std::vector<Walk> sample_walks(const Snapshot& g, std::span<const NodeId> starts, const WalkConfig& cfg,
                               std::size_t threads = 1);

/// Nodes active in `cur` whose neighbour set differs from the one they had in `prev`.
std::vector<NodeId> evolutionary_nodes(const Snapshot& prev, const Snapshot& cur);

/// Objective log σ(u·v⁺) + Σ log σ(−u·v⁻) of one (context, target, negatives) tuple and
/// its gradient with respect to each vector.
struct SgnsGradient {
  double objective = 0.0;
  std::vector<double> input;
  std::vector<double> positive;
  std::vector<std::vector<double>> negatives;
};

double sgns_objective(std::span<const double> input, std::span<const double> positive,
                      std::span<const std::span<const double>> negatives);
SgnsGradient sgns_gradient(std::span<const double> input, std::span<const double> positive,
                           std::span<const std::span<const double>> negatives);

class EmbeddingModel {
 public:
  explicit EmbeddingModel(const SgnsConfig& cfg);

  const SgnsConfig& config() const noexcept { return cfg_; }
  std::size_t dim() const noexcept { return cfg_.dim; }
  std::size_t vocabulary_size() const noexcept { return nodes_.size(); }
  bool contains(NodeId v) const noexcept { return v < row_.size() && row_[v] >= 0; }
  /// Vocabulary in ascending node order.
  std::vector<NodeId> vocabulary() const;

  std::span<const double> input_vector(NodeId v) const;
  std::span<const double> output_vector(NodeId v) const;
  void set_input_vector(NodeId v, std::span<const double> values);

  /// Adds unseen walk nodes to the vocabulary, then runs `epochs` SGNS passes over the
  /// walks with the learning rate decaying linearly from lr_initial to lr_min. Returns
  /// the mean per-pair loss (−objective) of each epoch. An empty batch is a no-op.
  std::vector<double> train(std::span<const Walk> walks, std::size_t epochs, std::uint64_t seed);

 private:
  std::size_t ensure_node(NodeId v);
  void rebuild_noise_table();

  template <bool Shared>
  void train_range(std::span<const Walk> walks, std::size_t begin, std::size_t end, std::size_t epochs,
                   std::uint64_t seed, std::size_t total_words, std::vector<double>& loss, std::vector<double>& pairs);

  SgnsConfig cfg_;
  std::vector<std::int64_t> row_;  // node -> row, -1 when absent
  std::vector<NodeId> nodes_;      // row -> node
  std::vector<std::uint64_t> counts_;
  std::vector<double> input_;
  std::vector<double> output_;
  std::vector<double> noise_cdf_;
};

/// Fresh model trained on the first batch of walks. Throws TrainingError on an empty corpus.
EmbeddingModel train_initial(std::span<const Walk> walks, const SgnsConfig& cfg);

/// Continued training on new walks (epochs_update passes). Unseen nodes enter the vocabulary.
void incremental_update(EmbeddingModel& model, std::span<const Walk> walks, std::uint64_t seed);

/// Input vectors of a node subset, rows aligned with `nodes` (ascending).
struct SnapshotEmbedding {
  std::vector<NodeId> nodes;
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t size() const noexcept { return nodes.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
  std::optional<std::size_t> find(NodeId v) const;
};

using EmbeddingSeries = std::vector<SnapshotEmbedding>;

/// Copies the input vectors of the active nodes of `g` that are in the vocabulary.
SnapshotEmbedding snapshot_embedding(const EmbeddingModel& model, const Snapshot& g);

/// dynnode2vec: initial model on walks from every node of the first snapshot, then for
/// each later snapshot an update on walks from its evolutionary nodes. Throws
/// TrainingError when the first snapshot has no edges.
EmbeddingSeries embed_dynamic(const SnapshotSequence& seq, const WalkConfig& walk_cfg, const SgnsConfig& sgns_cfg);

/// "N D" header then "label v1 ... vD" lines with six decimals.
void write_embedding(const std::filesystem::path& path, const SnapshotEmbedding& emb, const LabelMap& labels);
SnapshotEmbedding read_embedding(const std::filesystem::path& path, const LabelMap& labels);

}  // namespace nclid
