#include "fpslab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fpslab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in);
}

RunConfig RunConfig::parse(std::istream& is) {
  RunConfig cfg;
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto pos = t.find('=');
    if (pos == std::string::npos) throw ConfigError("expected key=value, got: " + t);
    const std::string key = trim(t.substr(0, pos));
    const std::string value = trim(t.substr(pos + 1));
    if (key.empty()) throw ConfigError("empty key in config line: " + t);
    cfg.kv_[key] = value;
  }
  return cfg;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string RunConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const std::logic_error&) {
    throw ConfigError("config key is not a number: " + key);
  }
}

double RunConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long RunConfig::get_long_or(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  try {
    return std::stol(get(key));
  } catch (const std::logic_error&) {
    throw ConfigError("config key is not an integer: " + key);
  }
}

void RunConfig::set(const std::string& key, const std::string& value) { kv_[key] = value; }

std::string RunConfig::canonical_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [k, v] : kv_) {  // std::map iterates in sorted key order
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

ModelParams RunConfig::model() const {
  ModelParams p;
  p.mass = get_double_or("model.mass", 1.0);
  p.L[0] = get_double_or("model.L1", 2 * 3.14159265358979323846);
  p.L[1] = get_double_or("model.L2", p.L[0]);
  p.L[2] = get_double_or("model.L3", p.L[0]);
  p.validate();
  return p;
}

SlabConfig RunConfig::slab() const {
  SlabConfig s;
  s.a = get_double_or("slab.a", -1.0);
  s.b = get_double_or("slab.b", 1.0);
  s.validate();
  return s;
}

std::shared_ptr<SofteningFunction> RunConfig::softening() const {
  const std::string kind = get_or("soften.kind", "indicator");
  const double scale = get_double_or("soften.scale", 1.0);
  SofteningFunction f = SofteningFunction::indicator(-1, 1);
  if (kind == "none") return nullptr;
  if (kind == "indicator") {
    f = SofteningFunction::indicator(get_double_or("soften.a", slab().a),
                                     get_double_or("soften.b", slab().b));
  } else if (kind == "bump") {
    f = SofteningFunction::bump(get_double_or("soften.center", 0.0),
                                get_double("soften.halfwidth"));
  } else if (kind == "file") {
    f = SofteningFunction::tabulated_from_file(get("soften.file"));
  } else {
    throw ConfigError("unknown soften.kind: " + kind);
  }
  if (scale != 1.0) f = f.scaled(scale);
  return std::make_shared<SofteningFunction>(std::move(f));
}

double RunConfig::cutoff() const { return get_double("cutoff"); }

DiagnosticOptions RunConfig::diagnostics() const {
  DiagnosticOptions opt;
  opt.tail_tol = get_double_or("diag.tail_tol", opt.tail_tol);
  opt.decay_floor = get_double_or("diag.decay_floor", opt.decay_floor);
  opt.window_fraction = get_double_or("diag.window_fraction", opt.window_fraction);
  opt.min_modes = std::size_t(get_long_or("diag.min_modes", long(opt.min_modes)));
  return opt;
}

std::uint64_t RunConfig::seed() const {
  return std::uint64_t(get_long_or("seed", 20200813));
}

std::string RunConfig::output_dir() const {
  if (const char* env = std::getenv("FPSLAB_OUTPUT_DIR")) return env;
  return get_or("output.dir", ".");
}

void RunConfig::validate() const {
  const ModelParams mp = model();
  if (has("cutoff") && cutoff() < mp.mass)
    throw EmptySpectrum("config cutoff below the mass gap");
  const DiagnosticOptions opt = diagnostics();
  auto in_unit = [](double v) { return v > 0 && v < 1; };
  if (!in_unit(opt.decay_floor) || !in_unit(opt.window_fraction))
    throw ConfigError("diagnostic thresholds must lie in (0,1)");
  if (!(opt.tail_tol > 0 && opt.tail_tol < 1))
    throw ConfigError("diag.tail_tol must lie in (0,1)");
  if (has("soften.file")) {
    std::ifstream probe(get("soften.file"));
    if (!probe) throw ConfigError("soften.file does not exist: " + get("soften.file"));
  }
  slab();
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header_comments,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write: " + path);
  for (const auto& c : header_comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i] << (i + 1 < columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

void write_json(const std::string& path, const std::vector<std::string>& header_comments,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows) {
  nlohmann::json j;
  j["meta"] = header_comments;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) obj[columns[i]] = row[i];
    j["rows"].push_back(obj);
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace fpslab
