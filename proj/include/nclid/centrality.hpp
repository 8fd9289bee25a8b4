#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "nclid/graph.hpp"

namespace nclid {

enum class CentralityMetric { Degree, Betweenness, Closeness, Eigenvector, Shell };

inline constexpr std::array<CentralityMetric, 5> kAllCentralityMetrics{
    CentralityMetric::Degree, CentralityMetric::Betweenness, CentralityMetric::Closeness,
    CentralityMetric::Eigenvector, CentralityMetric::Shell};

std::string_view to_string(CentralityMetric metric);
/// Accepts "degree", "betweenness", "closeness", "eigenvector", "shell" / "shell-index".
CentralityMetric parse_centrality_metric(std::string_view name);

/// One value per node of the index space; entries of inactive nodes are 0.
struct CentralityVector {
  CentralityMetric metric = CentralityMetric::Degree;
  std::vector<double> values;
};

struct EigenvectorOptions {
  std::size_t max_iterations = 1000;
  double tolerance = 1e-10;
};

CentralityVector centrality(const Snapshot& g, CentralityMetric metric, std::size_t threads = 1);

std::vector<double> degree_centrality(const Snapshot& g);

/// Unnormalised Brandes betweenness (each unordered pair counted once).
std::vector<double> betweenness_centrality(const Snapshot& g, std::size_t threads = 1);

/// Component-local closeness (r-1)/sum(d), scaled by (r-1)/(n_active-1) where r is
/// the size of the node's component.
std::vector<double> closeness_centrality(const Snapshot& g);

/// Principal eigenvector of the largest connected component by power iteration on
/// A + I, normalised to unit length; zeros elsewhere. Throws ConvergenceError.
std::vector<double> eigenvector_centrality(const Snapshot& g, const EigenvectorOptions& options = {});

/// k-core number by iterative minimum-degree peeling.
std::vector<double> shell_index(const Snapshot& g);

}  // namespace nclid
