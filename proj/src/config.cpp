#include "torusrw/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "torusrw/errors.hpp"

namespace torusrw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

template <class T>
T number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("'" + key + "': cannot parse '" + text + "'");
  return v;
}

Point point(const std::string& key, const std::string& text) {
  std::vector<Coord> c;
  for (const auto& part : split(text, ',')) c.push_back(number<Coord>(key, part));
  if (c.empty()) throw ConfigError("'" + key + "': empty point");
  return Point(std::move(c));
}

std::vector<Point> points(const std::string& key, const std::string& text) {
  std::vector<Point> out;
  for (const auto& w : words(text)) out.push_back(point(key, w));
  return out;
}

}  // namespace

std::vector<Point> ExperimentConfig::centers_for(Coord side) const {
  const TorusGeometry geom(side, dim);
  std::vector<Point> out;
  if (center_rule == CenterRule::explicit_list) {
    for (const auto& c : centers) out.push_back(geom.canonical(c));
    return out;
  }
  const auto m = static_cast<double>(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto k = static_cast<Coord>(std::llround(static_cast<double>(i) * static_cast<double>(side) / m));
    out.push_back(geom.canonical(Point(std::vector<Coord>(static_cast<std::size_t>(dim), k))));
  }
  return out;
}

PointSet ExperimentConfig::target_for(Coord side) const {
  const TorusGeometry geom(side, dim);
  const auto cs = centers_for(side);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (const auto& w : windows[i]) pts.push_back(cs[i] + w);
  }
  return PointSet::on_torus(pts, geom);
}

void ExperimentConfig::validate() const {
  if (sides.empty()) throw ConfigError("N: at least one side length is required");
  for (Coord n : sides) {
    if (n < 2) throw ConfigError("N: side lengths must be >= 2");
  }
  if (dim < 1) throw ConfigError("d: must be >= 1");
  if (!(u > 0.0) || !std::isfinite(u)) throw ConfigError("u: must be a finite level > 0");
  if (trials < 100) throw ConfigError("trials: must be >= 100");
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  if (!(threshold >= 0.0)) throw ConfigError("threshold: must be >= 0");
  if (capacity_radius < 2) throw ConfigError("capacity_radius: must be >= 2");
  if (windows.empty()) throw ConfigError("windows: at least one window is required");
  for (const auto& w : windows) {
    if (w.empty()) throw ConfigError("windows: every window must be nonempty");
    for (const auto& p : w) {
      if (p.dim() != dim) throw ConfigError("windows: point " + to_string(p) + " does not have d coordinates");
    }
  }
  if (center_rule == CenterRule::explicit_list) {
    if (centers.size() != windows.size()) throw ConfigError("centers: need exactly one center per window");
    for (const auto& c : centers) {
      if (c.dim() != dim) throw ConfigError("centers: point " + to_string(c) + " does not have d coordinates");
    }
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  std::string windows_text, centers_text;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (key == "N") {
      cfg.sides.clear();
      for (const auto& part : split(value, ',')) cfg.sides.push_back(number<Coord>(key, part));
    } else if (key == "d") {
      cfg.dim = number<int>(key, value);
    } else if (key == "u") {
      cfg.u = number<double>(key, value);
    } else if (key == "windows") {
      windows_text = value;
    } else if (key == "centers") {
      centers_text = value;
    } else if (key == "trials") {
      cfg.trials = number<std::uint64_t>(key, value);
    } else if (key == "seed") {
      cfg.seed = number<std::uint64_t>(key, value);
    } else if (key == "workers") {
      cfg.workers = number<unsigned>(key, value);
    } else if (key == "threshold") {
      cfg.threshold = number<double>(key, value);
    } else if (key == "capacity_radius") {
      cfg.capacity_radius = number<Coord>(key, value);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!windows_text.empty()) {
    cfg.windows.clear();
    for (const auto& w : split(windows_text, ';')) cfg.windows.emplace_back(points("windows", w));
  } else {
    cfg.windows = {PointSet({Point::zero(cfg.dim)})};
  }
  if (!centers_text.empty() && centers_text != "separated") {
    cfg.center_rule = CenterRule::explicit_list;
    cfg.centers = points("centers", centers_text);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace torusrw
