#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nclid/error.hpp"
#include "nclid/graph.hpp"

namespace nclid {

namespace {

std::string snapshot_file_name(std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshot_%03zu.edges", i);
  return buf;
}

}  // namespace

void write_snapshot_sequence(const SnapshotSequence& seq, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::ofstream out(dir / snapshot_file_name(i));
    if (!out) throw Error("cannot write " + (dir / snapshot_file_name(i)).string());
    for (auto [u, v] : seq[i].edges()) out << u << ' ' << v << '\n';
  }
  nlohmann::json manifest;
  manifest["boundaries"] = seq.boundaries;
  manifest["label_map"] = seq.labels.labels();
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

SnapshotSequence read_snapshot_sequence(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }

  SnapshotSequence seq;
  seq.boundaries = manifest.at("boundaries").get<std::vector<double>>();
  for (const auto& label : manifest.at("label_map")) seq.labels.intern(label.get<std::string>());
  if (seq.boundaries.size() < 2) throw ParseError("manifest needs at least two boundaries", 0);

  const std::size_t count = seq.boundaries.size() - 1;
  for (std::size_t i = 0; i < count; ++i) {
    std::ifstream edges_in(dir / snapshot_file_name(i));
    if (!edges_in) throw Error("cannot open " + (dir / snapshot_file_name(i)).string());
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(edges_in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream fields(line);
      NodeId u = 0;
      NodeId v = 0;
      if (!(fields >> u >> v)) throw ParseError(snapshot_file_name(i) + ": expected 'u v'", line_no);
      edges.emplace_back(u, v);
    }
    Interval iv{seq.boundaries[i], seq.boundaries[i + 1], i + 1 == count};
    seq.snapshots.push_back(Snapshot::from_edges(seq.labels.size(), edges, iv));
  }
  return seq;
}

}  // namespace nclid
