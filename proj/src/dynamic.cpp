#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nclid/embedding.hpp"
#include "nclid/error.hpp"
#include "nclid/seeds.hpp"

namespace nclid {

std::optional<std::size_t> SnapshotEmbedding::find(NodeId v) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
  if (it == nodes.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

SnapshotEmbedding snapshot_embedding(const EmbeddingModel& model, const Snapshot& g) {
  SnapshotEmbedding emb;
  emb.dim = model.dim();
  for (NodeId v : g.active()) {
    if (!model.contains(v)) continue;
    emb.nodes.push_back(v);
    auto vec = model.input_vector(v);
    emb.values.insert(emb.values.end(), vec.begin(), vec.end());
  }
  return emb;
}

EmbeddingSeries embed_dynamic(const SnapshotSequence& seq, const WalkConfig& walk_cfg, const SgnsConfig& sgns_cfg) {
  walk_cfg.validate();
  sgns_cfg.validate();
  if (seq.size() == 0) throw ArgumentError("snapshot sequence is empty");
  if (seq[0].edge_count() == 0) throw TrainingError("the first snapshot has no edges; nothing to initialise from");

  auto walks_for = [&](std::size_t s, std::span<const NodeId> starts) {
    WalkConfig cfg = walk_cfg;
    cfg.seed = derive_seed(walk_cfg.seed, s);
    return sample_walks(seq[s], starts, cfg, sgns_cfg.threads);
  };

  EmbeddingSeries series;
  series.reserve(seq.size());
  auto initial = walks_for(0, seq[0].active());
  EmbeddingModel model = train_initial(initial, sgns_cfg);
  series.push_back(snapshot_embedding(model, seq[0]));

  for (std::size_t s = 1; s < seq.size(); ++s) {
    const auto evolved = evolutionary_nodes(seq[s - 1], seq[s]);
    auto walks = walks_for(s, evolved);
    incremental_update(model, walks, derive_seed(sgns_cfg.seed, s));
    series.push_back(snapshot_embedding(model, seq[s]));
  }
  return series;
}

void write_embedding(const std::filesystem::path& path, const SnapshotEmbedding& emb, const LabelMap& labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << emb.size() << ' ' << emb.dim << '\n';
  char buf[64];
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out << labels.label(emb.nodes[i]);
    for (double x : emb.row(i)) {
      std::snprintf(buf, sizeof(buf), " %.6f", x);
      out << buf;
    }
    out << '\n';
  }
}

SnapshotEmbedding read_embedding(const std::filesystem::path& path, const LabelMap& labels) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header", 1);
  std::size_t count = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> count >> dim) || dim == 0) throw ParseError(path.string() + ": header must be 'N D'", 1);
  }

  std::vector<std::pair<NodeId, std::vector<double>>> rows;
  rows.reserve(count);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string label;
    fields >> label;
    auto node = labels.find(label);
    if (!node) throw ParseError(path.string() + ": unknown node label '" + label + "'", line_no);
    std::vector<double> values(dim);
    for (auto& x : values) {
      if (!(fields >> x)) throw ParseError(path.string() + ": expected " + std::to_string(dim) + " values", line_no);
    }
    rows.emplace_back(*node, std::move(values));
  }
  if (rows.size() != count) {
    throw ParseError(path.string() + ": header announces " + std::to_string(count) + " rows, found " +
                         std::to_string(rows.size()),
                     0);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  SnapshotEmbedding emb;
  emb.dim = dim;
  for (auto& [node, values] : rows) {
    emb.nodes.push_back(node);
    emb.values.insert(emb.values.end(), values.begin(), values.end());
  }
  return emb;
}

}  // namespace nclid
