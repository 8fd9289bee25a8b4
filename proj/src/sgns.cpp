#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "nclid/embedding.hpp"
#include "nclid/error.hpp"
#include "nclid/parallel.hpp"
#include "nclid/seeds.hpp"

namespace nclid {

void SgnsConfig::validate() const {
  if (dim < 1) throw ConfigError("embedding dimension must be positive");
  if (window < 1) throw ConfigError("window must be at least 1");
  if (negatives < 1) throw ConfigError("negatives must be at least 1");
  if (!(lr_initial > 0.0)) throw ConfigError("learning rate must be positive");
  if (lr_min < 0.0 || lr_min > lr_initial) throw ConfigError("minimum learning rate must lie in [0, lr_initial]");
  if (!(noise_power > 0.0)) throw ConfigError("noise power must be positive");
}

namespace {

constexpr std::uint64_t kInitStream = 0x1f2e3d4cULL;

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log σ(x), stable for large |x|.
inline double neg_log_sigmoid(double x) { return std::max(-x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// d/d(dot) of log σ(±dot): label − σ(dot), label 1 for the positive target, 0 for noise.
inline double label_coefficient(double dot, double label) { return label - sigmoid(dot); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <bool Shared>
inline double load(double& x) {
  if constexpr (Shared) {
    return std::atomic_ref<double>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool Shared>
inline void store(double& x, double value) {
  if constexpr (Shared) {
    std::atomic_ref<double>(x).store(value, std::memory_order_relaxed);
  } else {
    x = value;
  }
}

}  // namespace

double sgns_objective(std::span<const double> input, std::span<const double> positive,
                      std::span<const std::span<const double>> negatives) {
  double obj = -neg_log_sigmoid(dot(input, positive));
  for (auto neg : negatives) obj -= neg_log_sigmoid(-dot(input, neg));
  return obj;
}

SgnsGradient sgns_gradient(std::span<const double> input, std::span<const double> positive,
                           std::span<const std::span<const double>> negatives) {
  const std::size_t dim = input.size();
  if (positive.size() != dim) throw ArgumentError("vector dimension mismatch");
  SgnsGradient grad;
  grad.objective = sgns_objective(input, positive, negatives);
  grad.input.assign(dim, 0.0);

  const double g_pos = label_coefficient(dot(input, positive), 1.0);
  grad.positive.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    grad.input[i] += g_pos * positive[i];
    grad.positive[i] = g_pos * input[i];
  }
  for (auto neg : negatives) {
    if (neg.size() != dim) throw ArgumentError("vector dimension mismatch");
    const double g_neg = label_coefficient(dot(input, neg), 0.0);
    std::vector<double> g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      grad.input[i] += g_neg * neg[i];
      g[i] = g_neg * input[i];
    }
    grad.negatives.push_back(std::move(g));
  }
  return grad;
}

EmbeddingModel::EmbeddingModel(const SgnsConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

std::vector<NodeId> EmbeddingModel::vocabulary() const {
  std::vector<NodeId> v = nodes_;
  std::sort(v.begin(), v.end());
  return v;
}

std::span<const double> EmbeddingModel::input_vector(NodeId v) const {
  if (!contains(v)) throw ArgumentError("node " + std::to_string(v) + " is not in the vocabulary");
  return {input_.data() + static_cast<std::size_t>(row_[v]) * cfg_.dim, cfg_.dim};
}

std::span<const double> EmbeddingModel::output_vector(NodeId v) const {
  if (!contains(v)) throw ArgumentError("node " + std::to_string(v) + " is not in the vocabulary");
  return {output_.data() + static_cast<std::size_t>(row_[v]) * cfg_.dim, cfg_.dim};
}

void EmbeddingModel::set_input_vector(NodeId v, std::span<const double> values) {
  if (values.size() != cfg_.dim) {
    throw ArgumentError("vector of dimension " + std::to_string(values.size()) + " given to a model of dimension " +
                        std::to_string(cfg_.dim));
  }
  const std::size_t row = ensure_node(v);
  std::copy(values.begin(), values.end(), input_.begin() + static_cast<std::ptrdiff_t>(row * cfg_.dim));
}

std::size_t EmbeddingModel::ensure_node(NodeId v) {
  if (v >= row_.size()) row_.resize(static_cast<std::size_t>(v) + 1, -1);
  if (row_[v] >= 0) return static_cast<std::size_t>(row_[v]);
  const std::size_t row = nodes_.size();
  row_[v] = static_cast<std::int64_t>(row);
  nodes_.push_back(v);
  counts_.push_back(0);
  // Initialisation depends only on (seed, node), not on arrival order.
  Rng rng(derive_seed(cfg_.seed, kInitStream, v));
  const double scale = 1.0 / static_cast<double>(cfg_.dim);
  for (std::size_t i = 0; i < cfg_.dim; ++i) input_.push_back((rng.uniform() - 0.5) * scale);
  output_.resize(output_.size() + cfg_.dim, 0.0);
  return row;
}

void EmbeddingModel::rebuild_noise_table() {
  noise_cdf_.resize(counts_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    total += std::pow(static_cast<double>(counts_[i]), cfg_.noise_power);
    noise_cdf_[i] = total;
  }
}

std::vector<double> EmbeddingModel::train(std::span<const Walk> walks, std::size_t epochs, std::uint64_t seed) {
  std::size_t total_words = 0;
  for (const auto& walk : walks) total_words += walk.size();
  if (total_words == 0 || epochs == 0) return {};

  for (const auto& walk : walks) {
    for (NodeId v : walk) ++counts_[ensure_node(v)];
  }
  rebuild_noise_table();

  std::vector<double> loss(epochs, 0.0);
  std::vector<double> pairs(epochs, 0.0);
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg_.threads, walks.size()));
  if (workers == 1) {
    train_range<false>(walks, 0, walks.size(), epochs, seed, total_words, loss, pairs);
  } else {
    std::vector<std::vector<double>> worker_loss(workers, std::vector<double>(epochs, 0.0));
    std::vector<std::vector<double>> worker_pairs(workers, std::vector<double>(epochs, 0.0));
    const std::size_t chunk = (walks.size() + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(walks.size(), begin + chunk);
      std::size_t words = 0;
      for (std::size_t i = begin; i < end; ++i) words += walks[i].size();
      if (begin < end) {
        train_range<true>(walks, begin, end, epochs, derive_seed(seed, w), words, worker_loss[w], worker_pairs[w]);
      }
    });
    for (std::size_t w = 0; w < workers; ++w) {
      for (std::size_t e = 0; e < epochs; ++e) {
        loss[e] += worker_loss[w][e];
        pairs[e] += worker_pairs[w][e];
      }
    }
  }
  for (std::size_t e = 0; e < epochs; ++e) {
    if (pairs[e] > 0.0) loss[e] /= pairs[e];
  }
  return loss;
}

template <bool Shared>
void EmbeddingModel::train_range(std::span<const Walk> walks, std::size_t begin, std::size_t end, std::size_t epochs,
                                 std::uint64_t seed, std::size_t total_words, std::vector<double>& loss,
                                 std::vector<double>& pairs) {
  const std::size_t dim = cfg_.dim;
  const double noise_total = noise_cdf_.back();
  Rng rng(seed);
  std::vector<double> grad_in(dim);
  std::vector<double> l1(dim);
  const double schedule = static_cast<double>(epochs) * static_cast<double>(total_words);
  std::size_t processed = 0;

  auto sample_noise = [&]() -> std::size_t {
    const double r = rng.uniform() * noise_total;
    auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), r);
    return std::min<std::size_t>(static_cast<std::size_t>(it - noise_cdf_.begin()), noise_cdf_.size() - 1);
  };

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t w = begin; w < end; ++w) {
      const Walk& walk = walks[w];
      for (std::size_t pos = 0; pos < walk.size(); ++pos) {
        const double progress = static_cast<double>(processed++) / schedule;
        const double lr = std::max(cfg_.lr_min, cfg_.lr_initial - (cfg_.lr_initial - cfg_.lr_min) * progress);
        const auto center = static_cast<std::size_t>(row_[walk[pos]]);
        const std::size_t reach = cfg_.window - rng.below(cfg_.window);
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(walk.size() - 1, pos + reach);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const auto context = static_cast<std::size_t>(row_[walk[c]]);
          double* in = input_.data() + context * dim;
          for (std::size_t i = 0; i < dim; ++i) l1[i] = load<Shared>(in[i]);
          std::fill(grad_in.begin(), grad_in.end(), 0.0);

          for (std::size_t k = 0; k <= cfg_.negatives; ++k) {
            std::size_t target = center;
            double label = 1.0;
            if (k > 0) {
              target = sample_noise();
              if (target == center) continue;
              label = 0.0;
            }
            double* out = output_.data() + target * dim;
            double d = 0.0;
            for (std::size_t i = 0; i < dim; ++i) d += l1[i] * load<Shared>(out[i]);
            loss[epoch] += label > 0.0 ? neg_log_sigmoid(d) : neg_log_sigmoid(-d);
            const double g = label_coefficient(d, label) * lr;
            for (std::size_t i = 0; i < dim; ++i) {
              const double o = load<Shared>(out[i]);
              grad_in[i] += g * o;
              store<Shared>(out[i], o + g * l1[i]);
            }
          }
          pairs[epoch] += 1.0;
          for (std::size_t i = 0; i < dim; ++i) store<Shared>(in[i], load<Shared>(in[i]) + grad_in[i]);
        }
      }
    }
  }
}

EmbeddingModel train_initial(std::span<const Walk> walks, const SgnsConfig& cfg) {
  std::size_t words = 0;
  for (const auto& w : walks) words += w.size();
  if (words == 0) throw TrainingError("cannot train an embedding on an empty walk corpus");
  EmbeddingModel model(cfg);
  model.train(walks, cfg.epochs_initial, cfg.seed);
  return model;
}

void incremental_update(EmbeddingModel& model, std::span<const Walk> walks, std::uint64_t seed) {
  model.train(walks, model.config().epochs_update, seed);
}

}  // namespace nclid
