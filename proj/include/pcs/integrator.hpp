#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcs/fock.hpp"
#include "pcs/liouvillian.hpp"

namespace pcs {

struct FixedStep {
  double dt = 0.0;
};

/// Step doubling with a local error target relative to max |rho|.
struct AdaptiveStep {
  double rel_tol = 1e-8;
};

struct EvolveControls {
  double t_end = 0.0;
  std::variant<FixedStep, AdaptiveStep> stepping = FixedStep{};
  double record_every = 0.0;
  double max_trace_drift = 1e-4;
  double max_leakage = 1e-6;
  /// Keep a full density-matrix copy at every record (memory heavy: (n_max+1)^4 entries each).
  bool keep_snapshots = false;
  /// Run the Hermitian eigensolver at every record and store "min_eigenvalue".
  bool track_min_eigenvalue = false;
};

/// Named observables in insertion order; the order is stable across records.
class ObservableSet {
 public:
  void set(const std::string& name, double value);
  std::optional<double> get(const std::string& name) const;
  const std::vector<std::pair<std::string, double>>& items() const { return items_; }

 private:
  std::vector<std::pair<std::string, double>> items_;
};

struct TrajectoryRecord {
  double tau = 0.0;
  ObservableSet observables;
  std::optional<TwoModeDensityMatrix> snapshot;
};

struct StepStatistics {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double smallest_dt = 0.0;
  double largest_dt = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  TwoModeDensityMatrix final_state;
  StepStatistics steps;

  /// Values of one observable across all records (records lacking it are skipped).
  std::vector<std::pair<double, double>> series(const std::string& name) const;
};

/// Called at every record with the current state; adds entries to the record's observables.
using Observer = std::function<void(double tau, const TwoModeDensityMatrix& rho, ObservableSet& out)>;

/// Raised when the run leaves the regime where the truncated basis can be trusted.
class EvolutionAborted : public std::runtime_error {
 public:
  EvolutionAborted(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

/// Step size with dt * max_row_abs_sum(L) <= 1, capped at 1e-3. This keeps every
/// eigenvalue of dt L inside the unit disc, which lies within the RK4 stability region.
double stable_time_step(const SuperOperator& L);

/// One classical fourth-order Runge-Kutta step of d rho/d tau = L rho.
TwoModeDensityMatrix step_rk4(const SuperOperator& L, const TwoModeDensityMatrix& rho, double dt);

/// Integrates from rho0 to controls.t_end. Records land at multiples of record_every and at t_end.
/// Every record carries "trace", "hermiticity_defect" and "leakage" ahead of observer output.
/// Throws EvolutionAborted on trace drift or leakage beyond the configured bounds.
Trajectory evolve(const SuperOperator& L, const TwoModeDensityMatrix& rho0, const EvolveControls& controls,
                  std::span<const Observer> observers = {});

}  // namespace pcs
