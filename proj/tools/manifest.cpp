#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "cli.hpp"
#include "nclid/parallel.hpp"
#include "nclid/seeds.hpp"

namespace nclid::cli {

using nlohmann::json;

std::size_t RunManifest::worker_count() const { return threads > 0 ? threads : default_thread_count(); }

WalkConfig RunManifest::seeded_walk() const {
  WalkConfig w = walk;
  w.seed = stage_seed(seed, "walk");
  return w;
}

SgnsConfig RunManifest::seeded_sgns() const {
  SgnsConfig s = sgns;
  s.seed = stage_seed(seed, "sgns");
  s.threads = deterministic ? 1 : worker_count();
  return s;
}

json to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["input"] = m.input.string();
  j["columns"] = {{"source", m.columns.source_field},
                  {"target", m.columns.target_field},
                  {"time", m.columns.time_field},
                  {"weight", m.columns.weight_field}};
  if (m.snapshots.kind == SnapshotSpec::Kind::BinCount) {
    j["snapshots"] = {{"bins", m.snapshots.value}};
  } else {
    j["snapshots"] = {{"width", m.snapshots.value}, {"resolution", m.resolution}};
  }
  j["alpha"] = m.alpha;
  j["temporal"] = m.temporal;
  j["communities"] = m.communities;
  j["walk"] = {{"walks_per_node", m.walk.walks_per_node},
               {"walk_length", m.walk.walk_length},
               {"p", m.walk.p},
               {"q", m.walk.q}};
  j["sgns"] = {{"dim", m.sgns.dim},
               {"window", m.sgns.window},
               {"negatives", m.sgns.negatives},
               {"epochs_initial", m.sgns.epochs_initial},
               {"epochs_update", m.sgns.epochs_update},
               {"lr_initial", m.sgns.lr_initial},
               {"lr_min", m.sgns.lr_min},
               {"noise_power", m.sgns.noise_power}};
  j["tune"] = {{"p_grid", m.p_grid}, {"q_grid", m.q_grid}, {"dims", m.dims}, {"runs", m.runs}};
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["deterministic"] = m.deterministic;
  j["out"] = m.out.string();
  return j;
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.command = j.value("command", m.command);
    m.input = j.value("input", std::string());
    if (j.contains("columns")) {
      const auto& c = j["columns"];
      m.columns.source_field = c.value("source", m.columns.source_field);
      m.columns.target_field = c.value("target", m.columns.target_field);
      m.columns.time_field = c.value("time", m.columns.time_field);
      m.columns.weight_field = c.value("weight", m.columns.weight_field);
    }
    if (j.contains("snapshots")) {
      const auto& s = j["snapshots"];
      if (s.contains("bins")) {
        m.snapshots = SnapshotSpec::bins(s["bins"].get<std::int64_t>());
      } else if (s.contains("width")) {
        m.snapshots = SnapshotSpec::width(s["width"].get<std::int64_t>());
        m.resolution = s.value("resolution", std::string());
      } else if (s.contains("resolution")) {
        m.resolution = s["resolution"].get<std::string>();
        m.snapshots = SnapshotSpec::width(parse_resolution(m.resolution));
      }
    }
    m.alpha = j.value("alpha", m.alpha);
    m.temporal = j.value("temporal", m.temporal);
    m.communities = j.value("communities", m.communities);
    if (j.contains("walk")) {
      const auto& w = j["walk"];
      m.walk.walks_per_node = w.value("walks_per_node", m.walk.walks_per_node);
      m.walk.walk_length = w.value("walk_length", m.walk.walk_length);
      m.walk.p = w.value("p", m.walk.p);
      m.walk.q = w.value("q", m.walk.q);
    }
    if (j.contains("sgns")) {
      const auto& s = j["sgns"];
      m.sgns.dim = s.value("dim", m.sgns.dim);
      m.sgns.window = s.value("window", m.sgns.window);
      m.sgns.negatives = s.value("negatives", m.sgns.negatives);
      m.sgns.epochs_initial = s.value("epochs_initial", m.sgns.epochs_initial);
      m.sgns.epochs_update = s.value("epochs_update", m.sgns.epochs_update);
      m.sgns.lr_initial = s.value("lr_initial", m.sgns.lr_initial);
      m.sgns.lr_min = s.value("lr_min", m.sgns.lr_min);
      m.sgns.noise_power = s.value("noise_power", m.sgns.noise_power);
    }
    if (j.contains("tune")) {
      const auto& t = j["tune"];
      m.p_grid = t.value("p_grid", m.p_grid);
      m.q_grid = t.value("q_grid", m.q_grid);
      m.dims = t.value("dims", m.dims);
      m.runs = t.value("runs", m.runs);
    }
    m.seed = j.value("seed", m.seed);
    m.threads = j.value("threads", m.threads);
    m.deterministic = j.value("deterministic", m.deterministic);
    m.out = j.value("out", m.out.string());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return m;
}

std::int64_t parse_resolution(std::string_view text) {
  static const std::map<std::string, std::int64_t, std::less<>> units{
      {"s", 1},        {"second", 1}, {"minute", 60},     {"min", 60},       {"hour", 3600},   {"h", 3600},
      {"day", 86400},  {"d", 86400},  {"week", 604800},   {"w", 604800},     {"month", 2592000},
      {"year", 31536000}};
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::int64_t count = 1;
  const std::size_t digits = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i > digits) {
    auto [p, ec] = std::from_chars(text.data() + digits, text.data() + i, count);
    if (ec != std::errc()) throw ConfigError("bad resolution '" + std::string(text) + "'");
  }
  while (i < text.size() && (text[i] == '-' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
  std::string unit(text.substr(i));
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back()))) unit.pop_back();
  std::transform(unit.begin(), unit.end(), unit.begin(), [](unsigned char c) { return std::tolower(c); });
  if (unit.size() > 1 && unit.back() == 's' && !units.count(unit)) unit.pop_back();

  if (unit.empty()) {
    if (i == digits) throw ConfigError("empty resolution");
  } else {
    auto it = units.find(unit);
    if (it == units.end()) throw ConfigError("unknown time unit '" + unit + "'");
    count *= it->second;
  }
  if (count <= 0) throw ConfigError("resolution must be positive");
  return count;
}

ParseOptions parse_columns(std::string_view text) {
  ParseOptions o;
  std::vector<std::string> roles;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      roles.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  roles.push_back(cur);

  std::optional<std::size_t> src, dst, time, weight;
  for (std::size_t i = 0; i < roles.size(); ++i) {
    auto set = [&](std::optional<std::size_t>& slot) {
      if (slot) throw ConfigError("column role '" + roles[i] + "' given twice");
      slot = i;
    };
    const auto& r = roles[i];
    if (r == "source" || r == "src" || r == "u") set(src);
    else if (r == "target" || r == "dst" || r == "v") set(dst);
    else if (r == "time" || r == "t" || r == "timestamp") set(time);
    else if (r == "weight" || r == "w") set(weight);
    else if (r != "_") throw ConfigError("unknown column role '" + r + "'");
  }
  if (!src || !dst || !time) throw ConfigError("columns must name source, target and time");
  o.source_field = *src;
  o.target_field = *dst;
  o.time_field = *time;
  o.weight_field = weight ? *weight : roles.size();
  return o;
}

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

}  // namespace nclid::cli
