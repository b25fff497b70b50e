#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pcs/fock.hpp"
#include "pcs/integrator.hpp"
#include "pcs/measurement.hpp"

namespace pcs {

/// Fidelity of a state against a pure reference under both conventions in use:
/// f_overlap = <psi|rho|psi> (squared overlap) and f_sqrt = sqrt(f_overlap) (Uhlmann form for pure references).
struct FidelityRecord {
  double tau = 0.0;
  double f_overlap = 0.0;
  double f_sqrt = 0.0;
  /// Amount removed when clipping the raw quadratic form into [0, 1]; zero for well-behaved input.
  double clipped = 0.0;
};

FidelityRecord pure_fidelity(const TwoModePureState& psi, const TwoModeDensityMatrix& rho, double tau = 0.0);
FidelityRecord pure_fidelity(std::span<const Complex> psi, const SingleModeDensityMatrix& rho, double tau = 0.0);

struct FidelitySeries {
  std::vector<FidelityRecord> records;
  /// Record with the largest f_overlap (the maximiser is the same for f_sqrt).
  FidelityRecord best;
  /// Times whose conditioning slice had no weight.
  std::vector<double> skipped;
};

/// Fidelity against circle_state(r0) for every snapshot in the trajectory.
FidelitySeries circle_fidelity_series(const Trajectory& trajectory, double r0);

/// Conditions every snapshot on idler X_0 = 0 and compares the signal with cat_state(i beta, +1).
FidelitySeries cat_fidelity_series(const Trajectory& trajectory, double beta);

/// Observers that compute the same quantities during evolve() without keeping snapshots.
/// They write "<prefix>" (f_overlap) and "<prefix>_sqrt".
Observer circle_fidelity_observer(double r0, const Cutoff& cutoff, std::string prefix = "f_circle");
Observer cat_fidelity_observer(double beta, const Cutoff& cutoff, std::string prefix = "f_cat");

/// Rebuilds a series from observer output stored in the trajectory records.
FidelitySeries fidelity_series_from_observables(const Trajectory& trajectory, const std::string& prefix);

/// "tau,f_overlap,f_sqrt" rows.
void write_csv(std::ostream& os, const FidelitySeries& series);

}  // namespace pcs
