#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "nclid/centrality.hpp"
#include "nclid/community.hpp"
#include "nclid/evaluation.hpp"
#include "nclid/lid.hpp"
#include "nclid/parallel.hpp"
#include "nclid/stats.hpp"

namespace nclid::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json round6(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::round(v * 1e6) / 1e6;
}

// Input file stem; stages without --input take it from the embed manifest.
std::string network_name(const RunManifest& m) {
  if (!m.input.empty()) return m.input.stem().string();
  std::ifstream in(m.out / "manifest.embed.json");
  if (in) {
    try {
      auto j = json::parse(in);
      return fs::path(j.value("input", std::string())).stem().string();
    } catch (const json::exception&) {
    }
  }
  return m.out.filename().string();
}

std::string snapshot_file(std::string_view prefix, std::size_t i, std::string_view ext) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "_%03zu", i);
  return std::string(prefix) + buf + std::string(ext);
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

void write_json(const fs::path& path, const json& j) { open_output(path) << j.dump(2) << '\n'; }

void write_manifest(const RunManifest& m) {
  write_json(m.out / ("manifest." + m.command + ".json"), to_json(m));
}

EventLog load_log(const RunManifest& m) {
  if (m.input.empty()) throw ConfigError("no --input given");
  if (!fs::is_regular_file(m.input)) throw ConfigError("input file not found: " + m.input.string());
  return read_event_log(m.input, m.columns);
}

void warn_empty_bins(const SnapshotSequence& seq, std::ostream& err) {
  for (auto b : seq.empty_bins()) err << "warning: snapshot " << b << " has no edges\n";
}

void require(const fs::path& path, std::string_view producer) {
  if (!fs::exists(path)) throw MissingArtifact(path, producer);
}

fs::path embedding_path(const RunManifest& m, std::size_t s) {
  return m.out / "embeddings" / snapshot_file("snapshot", s, ".emb");
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

constexpr std::string_view kReconstructionHeader =
    "snapshot_index,node_label,correct,degree_original,degree_reconstructed,precision,recall,f1";

}  // namespace

void cmd_stats(const RunManifest& m, std::ostream& out, std::ostream& err) {
  auto log = load_log(m);
  auto seq = build_snapshots(log, m.snapshots);
  warn_empty_bins(seq, err);
  auto ag = aggregate_graph(log);
  auto act = activation_stats(seq);
  const std::string resolution =
      m.snapshots.kind == SnapshotSpec::Kind::BinCount ? "bins" : (m.resolution.empty() ? "custom" : m.resolution);

  std::ostringstream row;
  row << network_name(m) << ',' << log.node_count() << ',' << ag.edges.size() << ',' << seq.size() << ','
      << resolution << ',' << fixed6(act.nodes) << ',' << fixed6(act.edges);
  const std::string header = "network,nodes,edges,snapshots,resolution,a_v,a_e";
  open_output(m.out / "table1.csv") << header << '\n' << row.str() << '\n';
  write_json(m.out / "table1.json", {{"network", network_name(m)},
                                     {"nodes", log.node_count()},
                                     {"edges", ag.edges.size()},
                                     {"snapshots", seq.size()},
                                     {"resolution", resolution},
                                     {"events", log.events.size()},
                                     {"self_loops_dropped", log.self_loops_dropped},
                                     {"a_v", round6(act.nodes)},
                                     {"a_e", round6(act.edges)}});
  write_manifest(m);
  out << header << '\n' << row.str() << '\n';
}

void cmd_nclid(const RunManifest& m, std::ostream& out, std::ostream& err) {
  auto log = load_log(m);
  const std::size_t threads = m.worker_count();
  double sum = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  auto tally = [&](double v) {
    sum += v;
    max = count == 0 ? v : std::max(max, v);
    ++count;
  };
  json summary{{"network", network_name(m)}, {"alpha", m.alpha}, {"temporal", m.temporal}};

  if (m.temporal) {
    auto ag = aggregate_graph(log);
    const auto nodes = ag.graph.active();
    std::vector<std::optional<NcLidScore>> scores(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t i) {
      try {
        scores[i] = temporal_nc_lid(ag, log, nodes[i], m.alpha);
      } catch (const UndefinedError&) {
      }
    });
    auto csv = open_output(m.out / "temporal_nclid.csv");
    csv << "node_label,nclid,community_size,radius,ball\n";
    json undefined = json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& label = log.labels.label(nodes[i]);
      if (!scores[i]) {
        undefined.push_back(label);
        continue;
      }
      const auto& s = *scores[i];
      csv << label << ',' << fixed6(s.value) << ',' << s.community_size << ',' << fixed6(s.radius) << ','
          << s.ball << '\n';
      tally(s.value);
    }
    if (!undefined.empty()) err << "warning: temporal NC-LID undefined for " << undefined.size() << " node(s)\n";
    summary["undefined"] = undefined;
  } else {
    auto seq = build_snapshots(log, m.snapshots);
    warn_empty_bins(seq, err);
    auto csv = open_output(m.out / "nclid.csv");
    csv << "snapshot_index,node_label,nclid,community_size,radius,ball\n";
    json communities = json::array();
    for (std::size_t s = 0; s < seq.size(); ++s) {
      for (const auto& score : nc_lid_snapshot(seq[s], m.alpha, threads)) {
        csv << s << ',' << seq.labels.label(score.node) << ',' << fixed6(score.value) << ',' << score.community_size
            << ',' << static_cast<std::uint64_t>(score.radius) << ',' << score.ball << '\n';
        tally(score.value);
        if (m.communities) {
          auto c = detect_natural_community(seq[s], score.node, m.alpha);
          json members = json::array();
          for (NodeId v : c.members) members.push_back(seq.labels.label(v));
          communities.push_back({{"snapshot_index", s},
                                 {"node_label", seq.labels.label(score.node)},
                                 {"fitness", round6(c.fitness)},
                                 {"members", members}});
        }
      }
    }
    if (m.communities) write_json(m.out / "communities.json", communities);
  }

  const double mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
  summary["count"] = count;
  summary["mean_nclid"] = round6(mean);
  summary["max_nclid"] = round6(max);
  write_json(m.out / (m.temporal ? "temporal_nclid_summary.json" : "nclid_summary.json"), summary);
  write_manifest(m);
  out << "mean_nclid " << fixed6(mean) << "\nmax_nclid " << fixed6(max) << '\n';
}

void cmd_embed(const RunManifest& m, std::ostream& out, std::ostream& err) {
  auto log = load_log(m);
  auto seq = build_snapshots(log, m.snapshots);
  warn_empty_bins(seq, err);
  auto series = embed_dynamic(seq, m.seeded_walk(), m.seeded_sgns());
  write_snapshot_sequence(seq, m.out / "snapshots");
  fs::create_directories(m.out / "embeddings");
  for (std::size_t s = 0; s < series.size(); ++s) write_embedding(embedding_path(m, s), series[s], seq.labels);
  write_manifest(m);
  out << "embedded " << series.size() << " snapshot(s) into " << (m.out / "embeddings").string() << '\n';
}

void cmd_tune(const RunManifest& m, std::ostream& out, std::ostream& err) {
  auto log = load_log(m);
  auto seq = build_snapshots(log, m.snapshots);
  warn_empty_bins(seq, err);
  TuneOptions opts;
  opts.p_grid = m.p_grid;
  opts.q_grid = m.q_grid;
  opts.dims = m.dims;
  opts.runs = m.runs;
  opts.walk = m.walk;
  opts.sgns = m.sgns;
  opts.master_seed = m.seed;
  opts.threads = m.worker_count();
  auto result = tune(seq, opts);

  auto rows = result.table;
  std::stable_sort(rows.begin(), rows.end(), [](const TuneRow& a, const TuneRow& b) { return a.f1 > b.f1; });
  auto csv = open_output(m.out / "tune.csv");
  csv << "network,dim,p,q,precision,recall,f1\n";
  for (const auto& r : rows) {
    csv << network_name(m) << ',' << r.dim << ',' << fixed6(r.p) << ',' << fixed6(r.q) << ',' << fixed6(r.precision)
        << ',' << fixed6(r.recall) << ',' << fixed6(r.f1) << '\n';
  }
  const auto& b = result.best;
  write_json(m.out / "tune_best.json", {{"network", network_name(m)},
                                        {"dim", b.dim},
                                        {"p", b.p},
                                        {"q", b.q},
                                        {"precision", round6(b.precision)},
                                        {"recall", round6(b.recall)},
                                        {"f1", round6(b.f1)},
                                        {"runs", m.runs}});
  write_manifest(m);
  out << "best dim=" << b.dim << " p=" << b.p << " q=" << b.q << " f1=" << fixed6(b.f1) << '\n';
}

void cmd_evaluate(const RunManifest& m, std::ostream& out, std::ostream& err) {
  require(m.out / "snapshots" / "manifest.json", "embed");
  auto seq = read_snapshot_sequence(m.out / "snapshots");
  EmbeddingSeries series;
  for (std::size_t s = 0; s < seq.size(); ++s) {
    require(embedding_path(m, s), "embed");
    series.push_back(read_embedding(embedding_path(m, s), seq.labels));
  }
  auto eval = evaluate_series(seq, series, m.worker_count());
  for (auto s : eval.skipped) err << "warning: snapshot " << s << " skipped (fewer than two embedded nodes)\n";

  auto csv = open_output(m.out / "reconstruction.csv");
  csv << kReconstructionHeader << '\n';
  json reports = json::array();
  for (const auto& r : eval.reports) {
    for (const auto& n : r.nodes) {
      csv << r.snapshot_index << ',' << seq.labels.label(n.node) << ',' << n.correct << ',' << n.degree_original << ','
          << n.degree_reconstructed << ',' << fixed6(n.precision) << ',' << fixed6(n.recall) << ',' << fixed6(n.f1)
          << '\n';
    }
    reports.push_back({{"snapshot_index", r.snapshot_index},
                       {"edge_budget", r.edge_budget},
                       {"nodes", r.nodes.size()},
                       {"micro_precision", round6(r.micro_precision)},
                       {"micro_recall", round6(r.micro_recall)},
                       {"micro_f1", round6(r.micro_f1)}});
  }
  write_json(m.out / "reconstruction.json", {{"network", network_name(m)}, {"snapshots", reports}, {"skipped", eval.skipped}});
  write_manifest(m);
  if (!eval.reports.empty()) {
    const auto& last = eval.reports.back();
    out << "last snapshot " << last.snapshot_index << " micro_f1 " << fixed6(last.micro_f1) << '\n';
  }
}

void cmd_report(const RunManifest& m, std::ostream& out, std::ostream& err) {
  require(m.out / "snapshots" / "manifest.json", "embed");
  require(m.out / "reconstruction.csv", "evaluate");
  auto seq = read_snapshot_sequence(m.out / "snapshots");
  const std::size_t threads = m.worker_count();

  struct Quality {
    double precision, recall, f1;
  };
  std::map<std::pair<std::size_t, NodeId>, Quality> quality;
  {
    std::ifstream in(m.out / "reconstruction.csv");
    std::string line;
    if (!std::getline(in, line) || line != kReconstructionHeader) {
      throw ParseError("reconstruction.csv: unexpected header", 1);
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto f = split_csv(line);
      if (f.size() != 8) throw ParseError("reconstruction.csv: expected 8 fields", line_no);
      auto node = seq.labels.find(f[1]);
      if (!node) throw ParseError("reconstruction.csv: unknown node '" + std::string(f[1]) + "'", line_no);
      try {
        quality[{std::stoul(std::string(f[0])), *node}] = {std::stod(std::string(f[5])), std::stod(std::string(f[6])),
                                                           std::stod(std::string(f[7]))};
      } catch (const std::logic_error&) {
        throw ParseError("reconstruction.csv: malformed number", line_no);
      }
    }
  }

  std::vector<Observation> obs;
  auto cent_csv = open_output(m.out / "centrality.csv");
  cent_csv << "snapshot_index,node_label,metric,value\n";
  double nclid_sum = 0.0;
  double nclid_max = 0.0;
  std::size_t nclid_count = 0;
  for (std::size_t s = 0; s < seq.size(); ++s) {
    const auto& g = seq[s];
    if (g.active_count() == 0) continue;
    std::vector<double> nclid(g.node_count(), 0.0);
    for (const auto& score : nc_lid_snapshot(g, m.alpha, threads)) {
      nclid[score.node] = score.value;
      nclid_sum += score.value;
      nclid_max = nclid_count == 0 ? score.value : std::max(nclid_max, score.value);
      ++nclid_count;
    }
    std::array<std::vector<double>, kAllCentralityMetrics.size()> cent;
    for (std::size_t k = 0; k < kAllCentralityMetrics.size(); ++k) {
      cent[k] = centrality(g, kAllCentralityMetrics[k], threads).values;
    }
    for (NodeId v : g.active()) {
      for (std::size_t k = 0; k < kAllCentralityMetrics.size(); ++k) {
        cent_csv << s << ',' << seq.labels.label(v) << ',' << to_string(kAllCentralityMetrics[k]) << ','
                 << fixed6(cent[k][v]) << '\n';
      }
      auto it = quality.find({s, v});
      if (it == quality.end()) continue;
      Observation o;
      o.snapshot = s;
      o.node = v;
      o.nclid = nclid[v];
      o.precision = it->second.precision;
      o.recall = it->second.recall;
      o.f1 = it->second.f1;
      for (std::size_t k = 0; k < kAllCentralityMetrics.size(); ++k) o.centralities[k] = cent[k][v];
      obs.push_back(o);
    }
  }
  if (obs.empty()) throw ArgumentError("no observations: reconstruction.csv shares no node with the snapshots");

  const std::string net = network_name(m);
  auto groups = split_high_low(obs);
  auto obs_csv = open_output(m.out / "observations.csv");
  obs_csv << "snapshot_index,node_label,nclid,precision,recall,f1,degree,betweenness,closeness,eigenvector,shell,group\n";
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto& o = obs[i];
    obs_csv << o.snapshot << ',' << seq.labels.label(o.node) << ',' << fixed6(o.nclid) << ',' << fixed6(o.precision)
            << ',' << fixed6(o.recall) << ',' << fixed6(o.f1);
    for (double c : o.centralities) obs_csv << ',' << fixed6(c);
    obs_csv << ',' << (groups[i] == NclidGroup::High ? 'H' : 'L') << '\n';
  }

  auto rho = [&](ObservationField f) {
    try {
      return correlate(obs, ObservationField::Nclid, f).rho;
    } catch (const Error& e) {
      err << "warning: spearman(nclid, " << to_string(f) << ") undefined: " << e.what() << '\n';
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  json spearman;
  auto fig2 = open_output(m.out / "fig2_centrality_correlations.csv");
  fig2 << "network,measure,rho,n\n";
  for (auto f : {ObservationField::Degree, ObservationField::Betweenness, ObservationField::Closeness,
                 ObservationField::Eigenvector, ObservationField::Shell}) {
    const double r = rho(f);
    spearman[std::string(to_string(f))] = round6(r);
    fig2 << net << ',' << to_string(f) << ',' << fixed6(r) << ',' << obs.size() << '\n';
  }
  auto fig3 = open_output(m.out / "fig3_quality_correlations.csv");
  fig3 << "network,measure,rho,n\n";
  for (auto f : {ObservationField::Precision, ObservationField::Recall, ObservationField::F1}) {
    const double r = rho(f);
    spearman[std::string(to_string(f))] = round6(r);
    fig3 << net << ',' << to_string(f) << ',' << fixed6(r) << ',' << obs.size() << '\n';
  }

  const double nclid_mean = nclid_count > 0 ? nclid_sum / static_cast<double>(nclid_count) : 0.0;
  open_output(m.out / "fig1_nclid.csv") << "network,mean_nclid,max_nclid\n"
                                        << net << ',' << fixed6(nclid_mean) << ',' << fixed6(nclid_max) << '\n';

  json mwu_json = nullptr;
  auto table3 = open_output(m.out / "table3_mwu.csv");
  table3 << "network,f1_h,f1_l,u,p,acc,ps_h,ps_l,n_h,n_l\n";
  try {
    auto r = compare_high_low(obs);
    mwu_json = {{"u", round6(r.u_high)},    {"p", r.p_value},           {"accepted", !r.reject_null},
                {"f1_H", round6(r.mean_high)}, {"f1_L", round6(r.mean_low)}, {"ps_H", round6(r.ps_high)},
                {"ps_L", round6(r.ps_low)},  {"n_H", r.n_high},          {"n_L", r.n_low},
                {"exact", r.exact}};
    char p[32];
    std::snprintf(p, sizeof(p), "%.6e", r.p_value);
    table3 << net << ',' << fixed6(r.mean_high) << ',' << fixed6(r.mean_low) << ',' << fixed6(r.u_high) << ',' << p
           << ',' << (r.reject_null ? "no" : "yes") << ',' << fixed6(r.ps_high) << ',' << fixed6(r.ps_low) << ','
           << r.n_high << ',' << r.n_low << '\n';
  } catch (const ArgumentError& e) {
    err << "warning: MWU skipped: " << e.what() << '\n';
  }

  write_json(m.out / "report.json", {{"network", net},
                                     {"observations", obs.size()},
                                     {"nclid", {{"mean", round6(nclid_mean)}, {"max", round6(nclid_max)}}},
                                     {"spearman", spearman},
                                     {"mwu", mwu_json}});
  write_manifest(m);
  out << "report for " << obs.size() << " observations written to " << m.out.string() << '\n';
}

}  // namespace nclid::cli
