#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcs/liouvillian.hpp"
#include "pcs/states.hpp"

namespace pcs::app {

/// Crystal constants in s^-1. gamma_3 and epsilon are not tabulated and must be supplied.
struct CrystalPreset {
  std::string name;
  double kappa;
  double gamma;
};

const std::vector<CrystalPreset>& crystal_presets();
const CrystalPreset& find_preset(const std::string& name);

struct GridSpec {
  double min = -6.0;
  double max = 6.0;
  int points = 241;
};

/// Everything needed to re-run an experiment. Settable from a key=value file and from flags.
///
/// File grammar: one `key = value` per line; blank lines and lines starting with '#' are ignored.
/// Keys are the long flag names without the leading dashes (g2, ratio, lambda, nmax, t-end, ...).
struct RunConfig {
  std::string experiment = "run";
  std::optional<double> g2;
  std::optional<double> ratio;
  std::optional<double> lambda;
  std::optional<std::string> preset;
  std::optional<double> gamma3;
  std::optional<double> epsilon;
  int n_max = 20;
  double t_end = 0.2;
  std::optional<double> dt;
  std::optional<double> rel_tol;
  std::optional<double> record_every;
  GridSpec grid;
  std::string out_dir = ".";
  RadiusMapping mapping = RadiusMapping::dark_state;
  std::optional<double> r0;
  std::string reference = "circle";
  double max_leakage = 1e-6;
  std::vector<double> g2_list;

  /// Applies one key=value setting; throws std::invalid_argument on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  /// Resolves lambda and g^2 from the explicit values or the crystal preset.
  OscillatorParams oscillator() const;
  /// Reference radius: r0 if given, else circle_radius(lambda/g^2, mapping).
  /// Only the ratio is needed, so ideal-state commands may omit g2.
  double circle_r0() const;
  double record_interval() const { return record_every.value_or(t_end / 200.0); }

  /// Validates the invariants (exactly one of lambda / ratio, known preset, ...).
  void validate() const;

  /// Full echo of the configuration as ordered key/value pairs.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Shortest round-trip decimal form used in every metadata header.
std::string format_number(double v);

}  // namespace pcs::app
