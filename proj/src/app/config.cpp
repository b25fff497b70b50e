#include "pcs/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcs::app {

const std::vector<CrystalPreset>& crystal_presets() {
  static const std::vector<CrystalPreset> presets{
      {"AgGaSe2", 4.4e4, 7.5e8},
      {"KTP", 7.6e3, 7.5e8},
  };
  return presets;
}

const CrystalPreset& find_preset(const std::string& name) {
  for (const auto& p : crystal_presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown crystal preset '" + name + "' (known: AgGaSe2, KTP)");
}

std::string format_number(double v) { return shortest(v); }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("setting '" + key + "': not a number: '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != static_cast<int>(v)) throw std::invalid_argument("setting '" + key + "': not an integer: '" + value + "'");
  return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw std::invalid_argument("setting '" + key + "': empty list");
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "experiment") experiment = value;
  else if (key == "g2") g2 = to_double(key, value);
  else if (key == "ratio") ratio = to_double(key, value);
  else if (key == "lambda") lambda = to_double(key, value);
  else if (key == "preset") preset = value;
  else if (key == "gamma3") gamma3 = to_double(key, value);
  else if (key == "epsilon") epsilon = to_double(key, value);
  else if (key == "nmax") n_max = to_int(key, value);
  else if (key == "t-end") t_end = to_double(key, value);
  else if (key == "dt") dt = to_double(key, value);
  else if (key == "rel-tol") rel_tol = to_double(key, value);
  else if (key == "record-every") record_every = to_double(key, value);
  else if (key == "grid-min") grid.min = to_double(key, value);
  else if (key == "grid-max") grid.max = to_double(key, value);
  else if (key == "grid-points") grid.points = to_int(key, value);
  else if (key == "out") out_dir = value;
  else if (key == "mapping") mapping = parse_radius_mapping(value);
  else if (key == "r0") r0 = to_double(key, value);
  else if (key == "reference") reference = value;
  else if (key == "max-leakage") max_leakage = to_double(key, value);
  else if (key == "g2-list") g2_list = to_list(key, value);
  else throw std::invalid_argument("unknown setting '" + key + "'");
}

void RunConfig::validate() const {
  if (preset) {
    find_preset(*preset);
    if (g2 || lambda || ratio) throw std::invalid_argument("a crystal preset derives lambda and g2; do not also give g2, lambda or ratio");
    if (!gamma3 || !epsilon) throw std::invalid_argument("preset " + *preset + " needs gamma3 and epsilon");
    if (!(*gamma3 > 0.0)) throw std::invalid_argument("gamma3 must be > 0");
    if (!(*epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  } else if (lambda && ratio) {
    throw std::invalid_argument("give exactly one of lambda or ratio, not both");
  }
  if (n_max < 1) throw std::invalid_argument("nmax must be >= 1");
  if (!(t_end > 0.0)) throw std::invalid_argument("t-end must be > 0");
  if (dt && rel_tol) throw std::invalid_argument("give at most one of dt or rel-tol");
  if (dt && !(*dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (rel_tol && !(*rel_tol > 0.0 && *rel_tol <= 1e-3)) throw std::invalid_argument("rel-tol must lie in (0, 1e-3]");
  if (record_every && !(*record_every > 0.0)) throw std::invalid_argument("record-every must be > 0");
  if (grid.points < 3 || !(grid.max > grid.min)) throw std::invalid_argument("grid needs max > min and >= 3 points");
  if (reference != "circle" && reference != "cat") throw std::invalid_argument("reference must be circle or cat");
  if (r0 && !(*r0 >= 0.0)) throw std::invalid_argument("r0 must be >= 0");
}

OscillatorParams RunConfig::oscillator() const {
  validate();
  if (preset) {
    const auto& p = find_preset(*preset);
    const double scale = *gamma3 * p.gamma;
    return {*epsilon * p.kappa / scale, p.kappa * p.kappa / scale};
  }
  if (!g2) throw std::invalid_argument("g2 is required (or a crystal preset)");
  if (!lambda && !ratio) throw std::invalid_argument("give one of lambda or ratio");
  if (ratio) return OscillatorParams::from_ratio(*ratio, *g2);
  if (!(*g2 >= 0.0) || !(*lambda >= 0.0)) throw std::invalid_argument("lambda and g2 must be >= 0");
  return {*lambda, *g2};
}

double RunConfig::circle_r0() const {
  if (r0) return *r0;
  if (ratio) return circle_radius(*ratio, mapping);
  const auto p = oscillator();
  if (!(p.g2 > 0.0)) throw std::invalid_argument("circle radius needs g2 > 0");
  return circle_radius(p.pump_ratio(), mapping);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  auto opt = [&](const char* k, const std::optional<double>& v) {
    if (v) e.emplace_back(k, format_number(*v));
  };
  e.emplace_back("experiment", experiment);
  opt("g2", g2);
  opt("ratio", ratio);
  opt("lambda", lambda);
  if (preset) e.emplace_back("preset", *preset);
  opt("gamma3", gamma3);
  opt("epsilon", epsilon);
  e.emplace_back("nmax", std::to_string(n_max));
  e.emplace_back("t-end", format_number(t_end));
  opt("dt", dt);
  opt("rel-tol", rel_tol);
  e.emplace_back("record-every", format_number(record_interval()));
  e.emplace_back("grid-min", format_number(grid.min));
  e.emplace_back("grid-max", format_number(grid.max));
  e.emplace_back("grid-points", std::to_string(grid.points));
  e.emplace_back("mapping", to_string(mapping));
  opt("r0", r0);
  e.emplace_back("reference", reference);
  e.emplace_back("max-leakage", format_number(max_leakage));
  if (!g2_list.empty()) {
    std::string s;
    for (double v : g2_list) s += (s.empty() ? "" : ",") + format_number(v);
    e.emplace_back("g2-list", s);
  }
  return e;
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_config(in);
}

}  // namespace pcs::app
