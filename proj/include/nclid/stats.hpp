#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nclid/centrality.hpp"
#include "nclid/graph.hpp"

namespace nclid {

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks. Needs equal lengths >= 3 (ArgumentError) and
/// non-constant inputs (UndefinedError).
double spearman(std::span<const double> x, std::span<const double> y);

/// One node in one snapshot.
struct Observation {
  std::size_t snapshot = 0;
  NodeId node = 0;
  double nclid = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::array<double, kAllCentralityMetrics.size()> centralities{};  ///< indexed like kAllCentralityMetrics

  double centrality(CentralityMetric m) const { return centralities[static_cast<std::size_t>(m)]; }
};

enum class NclidGroup { High, Low };

/// H when NC-LID is strictly above the mean NC-LID of the observation's own snapshot, else L.
std::vector<NclidGroup> split_high_low(std::span<const Observation> observations);

struct MwuResult {
  double u_high = 0.0;  ///< pairs with h > l plus half the tied pairs
  double u_low = 0.0;
  double p_value = 1.0;  ///< two-sided
  bool exact = false;    ///< permutation distribution rather than normal approximation
  bool reject_null = false;
  double mean_high = 0.0;
  double mean_low = 0.0;
  double ps_high = 0.0;  ///< P(h > l)
  double ps_low = 0.0;   ///< P(l > h)
  std::size_t n_high = 0;
  std::size_t n_low = 0;
};

inline constexpr double kSignificance = 0.05;
inline constexpr std::size_t kExactMwuLimit = 20;

/// Mann-Whitney U of `high` against `low`. Exact permutation p-value when the pooled
/// size is at most 20, otherwise the tie-corrected normal approximation with
/// continuity correction.
MwuResult mwu(std::span<const double> high, std::span<const double> low);

/// Two-sided p-values of the rank-sum statistic by each route, exposed for checks.
double mwu_exact_p(std::span<const double> high, std::span<const double> low);
double mwu_normal_p(std::span<const double> high, std::span<const double> low);

enum class ObservationField { Nclid, Precision, Recall, F1, Degree, Betweenness, Closeness, Eigenvector, Shell };

std::string_view to_string(ObservationField field);
double field_value(const Observation& o, ObservationField field);

struct Correlation {
  double rho = 0.0;
  std::size_t n = 0;
};

/// Spearman correlation over all observations pooled across snapshots.
Correlation correlate(std::span<const Observation> observations, ObservationField x, ObservationField y);

/// MWU on the F1 scores of the H and L groups.
MwuResult compare_high_low(std::span<const Observation> observations);

}  // namespace nclid
