#include "nclid/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "nclid/error.hpp"

namespace nclid {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("correlation inputs differ in length");
  if (x.empty()) throw ArgumentError("correlation of empty samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedError("correlation with a constant sample is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("spearman inputs differ in length");
  if (x.size() < 3) throw ArgumentError("spearman needs at least 3 observations");
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  return pearson(rx, ry);
}

std::vector<NclidGroup> split_high_low(std::span<const Observation> observations) {
  struct Tally {
    double sum = 0.0;
    std::size_t count = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  std::map<std::size_t, Tally> per_snapshot;
  for (const auto& o : observations) {
    auto& t = per_snapshot[o.snapshot];
    t.sum += o.nclid;
    ++t.count;
    t.lo = std::min(t.lo, o.nclid);
    t.hi = std::max(t.hi, o.nclid);
  }
  std::vector<NclidGroup> labels;
  labels.reserve(observations.size());
  for (const auto& o : observations) {
    const auto& t = per_snapshot[o.snapshot];
    // Rounding can push the mean of equal values below them; keep it within range.
    const double mean = std::clamp(t.sum / static_cast<double>(t.count), t.lo, t.hi);
    labels.push_back(o.nclid > mean ? NclidGroup::High : NclidGroup::Low);
  }
  return labels;
}

namespace {

struct PairCounts {
  std::uint64_t greater = 0;  // h > l
  std::uint64_t ties = 0;
  std::uint64_t less = 0;
};

PairCounts count_pairs(std::span<const double> high, std::span<const double> low) {
  std::vector<double> sorted(low.begin(), low.end());
  std::sort(sorted.begin(), sorted.end());
  PairCounts c;
  for (double h : high) {
    auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), h);
    c.greater += static_cast<std::uint64_t>(lo - sorted.begin());
    c.ties += static_cast<std::uint64_t>(hi - lo);
    c.less += static_cast<std::uint64_t>(sorted.end() - hi);
  }
  return c;
}

// Doubled average ranks of the pooled sample (integers), high sample first.
std::vector<std::int64_t> doubled_ranks(std::span<const double> high, std::span<const double> low) {
  std::vector<double> pooled(high.begin(), high.end());
  pooled.insert(pooled.end(), low.begin(), low.end());
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pooled[a] < pooled[b]; });
  std::vector<std::int64_t> ranks(pooled.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = static_cast<std::int64_t>(i + 1 + j);
    i = j;
  }
  return ranks;
}

void check_samples(std::span<const double> high, std::span<const double> low) {
  if (high.empty() || low.empty()) throw ArgumentError("Mann-Whitney U needs two non-empty samples");
}

}  // namespace

double mwu_exact_p(std::span<const double> high, std::span<const double> low) {
  check_samples(high, low);
  const auto ranks = doubled_ranks(high, low);
  const std::size_t n = ranks.size();
  const std::size_t k = high.size();
  std::int64_t observed = 0;
  for (std::size_t i = 0; i < k; ++i) observed += ranks[i];
  const std::int64_t total = std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});

  // ways[j][s]: number of j-subsets of the pooled ranks whose doubled rank sum is s.
  std::vector<std::vector<double>> ways(k + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(ranks[i]);
    for (std::size_t j = std::min(k, i + 1); j >= 1; --j) {
      for (std::size_t s = static_cast<std::size_t>(total); s >= r; --s) ways[j][s] += ways[j - 1][s - r];
    }
  }
  // E[doubled rank sum] = k (n + 1).
  const auto expected = static_cast<std::int64_t>(k * (n + 1));
  const std::int64_t deviation = std::llabs(observed - expected);
  double extreme = 0.0;
  double all = 0.0;
  for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s) {
    all += ways[k][s];
    if (std::llabs(static_cast<std::int64_t>(s) - expected) >= deviation) extreme += ways[k][s];
  }
  return std::min(1.0, extreme / all);
}

double mwu_normal_p(std::span<const double> high, std::span<const double> low) {
  check_samples(high, low);
  const auto nh = static_cast<double>(high.size());
  const auto nl = static_cast<double>(low.size());
  const double n = nh + nl;
  const auto pairs = count_pairs(high, low);
  const double u = static_cast<double>(pairs.greater) + 0.5 * static_cast<double>(pairs.ties);

  std::vector<double> pooled(high.begin(), high.end());
  pooled.insert(pooled.end(), low.begin(), low.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double variance = nh * nl / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(u - nh * nl / 2.0) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

MwuResult mwu(std::span<const double> high, std::span<const double> low) {
  check_samples(high, low);
  const auto pairs = count_pairs(high, low);
  const double total = static_cast<double>(high.size()) * static_cast<double>(low.size());

  MwuResult r;
  r.n_high = high.size();
  r.n_low = low.size();
  r.u_high = static_cast<double>(pairs.greater) + 0.5 * static_cast<double>(pairs.ties);
  r.u_low = static_cast<double>(pairs.less) + 0.5 * static_cast<double>(pairs.ties);
  r.ps_high = static_cast<double>(pairs.greater) / total;
  r.ps_low = static_cast<double>(pairs.less) / total;
  r.mean_high = std::accumulate(high.begin(), high.end(), 0.0) / static_cast<double>(high.size());
  r.mean_low = std::accumulate(low.begin(), low.end(), 0.0) / static_cast<double>(low.size());
  r.exact = high.size() + low.size() <= kExactMwuLimit;
  r.p_value = r.exact ? mwu_exact_p(high, low) : mwu_normal_p(high, low);
  r.reject_null = r.p_value <= kSignificance;
  return r;
}

std::string_view to_string(ObservationField field) {
  switch (field) {
    case ObservationField::Nclid: return "nclid";
    case ObservationField::Precision: return "precision";
    case ObservationField::Recall: return "recall";
    case ObservationField::F1: return "f1";
    case ObservationField::Degree: return "degree";
    case ObservationField::Betweenness: return "betweenness";
    case ObservationField::Closeness: return "closeness";
    case ObservationField::Eigenvector: return "eigenvector";
    case ObservationField::Shell: return "shell";
  }
  return "unknown";
}

double field_value(const Observation& o, ObservationField field) {
  switch (field) {
    case ObservationField::Nclid: return o.nclid;
    case ObservationField::Precision: return o.precision;
    case ObservationField::Recall: return o.recall;
    case ObservationField::F1: return o.f1;
    case ObservationField::Degree: return o.centrality(CentralityMetric::Degree);
    case ObservationField::Betweenness: return o.centrality(CentralityMetric::Betweenness);
    case ObservationField::Closeness: return o.centrality(CentralityMetric::Closeness);
    case ObservationField::Eigenvector: return o.centrality(CentralityMetric::Eigenvector);
    case ObservationField::Shell: return o.centrality(CentralityMetric::Shell);
  }
  throw ArgumentError("unknown observation field");
}

Correlation correlate(std::span<const Observation> observations, ObservationField x, ObservationField y) {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(observations.size());
  ys.reserve(observations.size());
  for (const auto& o : observations) {
    xs.push_back(field_value(o, x));
    ys.push_back(field_value(o, y));
  }
  return {spearman(xs, ys), observations.size()};
}

MwuResult compare_high_low(std::span<const Observation> observations) {
  const auto labels = split_high_low(observations);
  std::vector<double> high;
  std::vector<double> low;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    (labels[i] == NclidGroup::High ? high : low).push_back(observations[i].f1);
  }
  return mwu(high, low);
}

}  // namespace nclid
