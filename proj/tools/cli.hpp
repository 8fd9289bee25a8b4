#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nclid/embedding.hpp"
#include "nclid/error.hpp"
#include "nclid/graph.hpp"

namespace nclid::cli {

enum ExitCode : int { kSuccess = 0, kInternalError = 1, kInputError = 2, kMissingArtifact = 3 };

/// An upstream stage has not produced a file this stage reads.
class MissingArtifact : public Error {
 public:
  explicit MissingArtifact(const std::filesystem::path& path, std::string_view producer)
      : Error("missing artifact " + path.string() + " (produced by '" + std::string(producer) + "')"),
        path_(path) {}

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

/// Everything a command needs; written beside its outputs and loadable with --config.
struct RunManifest {
  std::string command;
  std::filesystem::path input;
  ParseOptions columns;
  SnapshotSpec snapshots = SnapshotSpec::bins(1);
  std::string resolution;  ///< bin width as typed, empty for a bin count
  double alpha = 1.0;
  bool temporal = false;
  bool communities = false;
  WalkConfig walk;
  SgnsConfig sgns;
  std::vector<double> p_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> q_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::size_t> dims{10, 25, 50, 100, 200};
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  ///< 0 = NCLID_THREADS or hardware concurrency
  bool deterministic = false;
  std::filesystem::path out = "out";

  std::size_t worker_count() const;
  /// Walk/SGNS configs with stage seeds and the training thread count filled in.
  WalkConfig seeded_walk() const;
  SgnsConfig seeded_sgns() const;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Bin width in time units: "day", "3-months", "2 weeks", "3600". Units are seconds
/// based (month = 30 days, year = 365 days). Throws ConfigError.
std::int64_t parse_resolution(std::string_view text);

/// Column roles in input order, e.g. "time,source,target" or "source,target,_,time".
/// A missing weight column makes a weight after the listed columns optional.
ParseOptions parse_columns(std::string_view text);

/// Fixed six-decimal rendering used by every CSV and JSON number; "nan" for NaN.
std::string fixed6(double v);

void cmd_stats(const RunManifest& m, std::ostream& out, std::ostream& err);
void cmd_nclid(const RunManifest& m, std::ostream& out, std::ostream& err);
void cmd_embed(const RunManifest& m, std::ostream& out, std::ostream& err);
void cmd_tune(const RunManifest& m, std::ostream& out, std::ostream& err);
void cmd_evaluate(const RunManifest& m, std::ostream& out, std::ostream& err);
void cmd_report(const RunManifest& m, std::ostream& out, std::ostream& err);

/// Full command line (argv[0] excluded). Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nclid::cli
