#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace nclid::cli {

namespace {

using Command = void (*)(const RunManifest&, std::ostream&, std::ostream&);

struct Binding {
  CLI::Option* option;
  std::function<void(RunManifest&)> apply;
};

// Storage shared by every subcommand; only one subcommand is parsed per run.
struct Values {
  std::string input, resolution, columns, out, config;
  std::int64_t snapshots = 0;
  double alpha = 1.0, p = 1.0, q = 1.0;
  std::size_t dim = 0, walks = 0, walk_length = 0, window = 0, negatives = 0, epochs_initial = 0, epochs_update = 0,
              runs = 0, threads = 0;
  std::uint64_t seed = 0;
  std::vector<double> p_grid, q_grid;
  std::vector<std::size_t> dims;
  bool temporal = false, deterministic = false, communities = false;
};

std::vector<Binding> add_options(CLI::App& sub, Values& v, std::string_view name) {
  std::vector<Binding> b;
  auto add = [&](CLI::Option* o, std::function<void(RunManifest&)> f) { b.push_back({o, std::move(f)}); };

  add(sub.add_option("--input,-i", v.input, "event log: source target time [weight] per line"),
      [&](RunManifest& m) { m.input = v.input; });
  add(sub.add_option("--columns", v.columns, "column roles in order, e.g. time,source,target"),
      [&](RunManifest& m) { m.columns = parse_columns(v.columns); });
  auto* snaps = sub.add_option("--snapshots", v.snapshots, "number of equal-width snapshots");
  auto* res = sub.add_option("--resolution", v.resolution, "snapshot width: day, week, 3-months, seconds");
  snaps->excludes(res);
  add(snaps, [&](RunManifest& m) {
    m.snapshots = SnapshotSpec::bins(v.snapshots);
    m.resolution.clear();
  });
  add(res, [&](RunManifest& m) {
    m.snapshots = SnapshotSpec::width(parse_resolution(v.resolution));
    m.resolution = v.resolution;
  });
  add(sub.add_option("--out,-o", v.out, "output directory"), [&](RunManifest& m) { m.out = v.out; });
  add(sub.add_option("--seed", v.seed, "master seed"), [&](RunManifest& m) { m.seed = v.seed; });
  add(sub.add_option("--threads", v.threads, "worker count (default: NCLID_THREADS or all cores)"),
      [&](RunManifest& m) { m.threads = v.threads; });
  add(sub.add_flag("--deterministic", v.deterministic, "single-threaded, bit-reproducible training"),
      [&](RunManifest& m) { m.deterministic = v.deterministic; });
  sub.add_option("--config", v.config, "JSON run manifest; flags override its values")->check(CLI::ExistingFile);

  if (name == "nclid" || name == "report") {
    add(sub.add_option("--alpha", v.alpha, "community fitness exponent"), [&](RunManifest& m) { m.alpha = v.alpha; });
  }
  if (name == "nclid") {
    add(sub.add_flag("--temporal", v.temporal, "temporal-distance NC-LID on the aggregated graph"),
        [&](RunManifest& m) { m.temporal = v.temporal; });
    add(sub.add_flag("--communities", v.communities, "also dump natural communities to communities.json"),
        [&](RunManifest& m) { m.communities = v.communities; });
  }
  if (name == "embed" || name == "tune") {
    add(sub.add_option("--walks", v.walks, "walks per node"), [&](RunManifest& m) { m.walk.walks_per_node = v.walks; });
    add(sub.add_option("--walk-length", v.walk_length, "nodes per walk"),
        [&](RunManifest& m) { m.walk.walk_length = v.walk_length; });
    add(sub.add_option("--window", v.window, "skip-gram window"), [&](RunManifest& m) { m.sgns.window = v.window; });
    add(sub.add_option("--negatives", v.negatives, "negative samples per pair"),
        [&](RunManifest& m) { m.sgns.negatives = v.negatives; });
    add(sub.add_option("--epochs-initial", v.epochs_initial, "epochs on the first snapshot"),
        [&](RunManifest& m) { m.sgns.epochs_initial = v.epochs_initial; });
    add(sub.add_option("--epochs-update", v.epochs_update, "epochs per incremental update"),
        [&](RunManifest& m) { m.sgns.epochs_update = v.epochs_update; });
  }
  if (name == "embed") {
    add(sub.add_option("--dim", v.dim, "embedding dimension"), [&](RunManifest& m) { m.sgns.dim = v.dim; });
    add(sub.add_option("--p", v.p, "return parameter"), [&](RunManifest& m) { m.walk.p = v.p; });
    add(sub.add_option("--q", v.q, "in-out parameter"), [&](RunManifest& m) { m.walk.q = v.q; });
  }
  if (name == "tune") {
    add(sub.add_option("--dim", v.dims, "dimension grid")->delimiter(','), [&](RunManifest& m) { m.dims = v.dims; });
    add(sub.add_option("--p", v.p_grid, "p grid")->delimiter(','), [&](RunManifest& m) { m.p_grid = v.p_grid; });
    add(sub.add_option("--q", v.q_grid, "q grid")->delimiter(','), [&](RunManifest& m) { m.q_grid = v.q_grid; });
    add(sub.add_option("--runs", v.runs, "runs per grid point"), [&](RunManifest& m) { m.runs = v.runs; });
  }
  return b;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NC-LID and dynamic node embedding toolkit", "nclid"};
  app.require_subcommand(1);
  Values values;
  const std::vector<std::pair<std::string, std::string>> names{
      {"stats", "dataset summary: nodes, edges, snapshots, activation"},
      {"nclid", "NC-LID of every node in every snapshot (or temporal)"},
      {"embed", "dynnode2vec embeddings per snapshot"},
      {"tune", "grid search of p, q and dimension by last-snapshot F1"},
      {"evaluate", "graph reconstruction scores from stored embeddings"},
      {"report", "correlations, MWU test and figure tables"}};
  const std::map<std::string, Command> commands{{"stats", cmd_stats}, {"nclid", cmd_nclid},
                                                {"embed", cmd_embed}, {"tune", cmd_tune},
                                                {"evaluate", cmd_evaluate}, {"report", cmd_report}};
  std::map<std::string, std::vector<Binding>> bindings;
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    bindings[name] = add_options(*sub, values, name);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    for (const auto& [name, help] : names) {
      auto* sub = app.get_subcommand(name);
      if (!sub->parsed()) continue;
      RunManifest m;
      if (!values.config.empty()) {
        std::ifstream in(values.config);
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(values.config + ": " + e.what());
        }
        m = manifest_from_json(j);
      }
      for (const auto& b : bindings[name]) {
        if (b.option->count() > 0) b.apply(m);
      }
      m.command = name;
      m.walk.validate();
      m.sgns.validate();
      if (!(m.alpha > 0.0)) throw ConfigError("alpha must be positive");
      commands.at(name)(m, out, err);
    }
    return kSuccess;
  } catch (const MissingArtifact& e) {
    err << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const ParseError& e) {
    err << "error: input: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace nclid::cli
