#include "pcs/fidelity.hpp"

#include <cmath>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "pcs/states.hpp"

namespace pcs {

namespace {

FidelityRecord finish(double raw, double tau) {
  FidelityRecord r;
  r.tau = tau;
  r.f_overlap = raw;
  if (raw > 1.0) {
    r.clipped = raw - 1.0;
    r.f_overlap = 1.0;
  } else if (raw < 0.0) {
    r.clipped = -raw;
    r.f_overlap = 0.0;
  }
  if (r.clipped > 1e-9) std::cerr << "warning: fidelity clipped by " << r.clipped << " at tau=" << tau << "\n";
  r.f_sqrt = std::sqrt(r.f_overlap);
  return r;
}

void add_record(FidelitySeries& s, const FidelityRecord& r) {
  if (s.records.empty() || r.f_overlap > s.best.f_overlap) s.best = r;
  s.records.push_back(r);
}

const TwoModeDensityMatrix& snapshot_of(const TrajectoryRecord& rec) {
  if (!rec.snapshot) throw std::invalid_argument("trajectory record at tau=" + std::to_string(rec.tau) +
                                                 " has no density-matrix snapshot");
  return *rec.snapshot;
}

std::vector<Complex> cat_reference(double beta, const Cutoff& cutoff) {
  return cat_state(Complex(0.0, beta), +1, cutoff);
}

}  // namespace

FidelityRecord pure_fidelity(const TwoModePureState& psi, const TwoModeDensityMatrix& rho, double tau) {
  require_same_cutoff(psi.cutoff(), rho.cutoff(), "pure_fidelity");
  const auto amp = psi.amplitudes();
  const std::size_t d = amp.size();
  Complex s = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    if (amp[r] == Complex(0.0)) continue;
    Complex inner = 0.0;
    for (std::size_t c = 0; c < d; ++c)
      if (amp[c] != Complex(0.0)) inner += rho.element(r, c) * amp[c];
    s += std::conj(amp[r]) * inner;
  }
  return finish(s.real(), tau);
}

FidelityRecord pure_fidelity(std::span<const Complex> psi, const SingleModeDensityMatrix& rho, double tau) {
  if (psi.size() != static_cast<std::size_t>(rho.dim())) throw std::invalid_argument("pure_fidelity: cutoff mismatch");
  Complex s = 0.0;
  for (int n = 0; n < rho.dim(); ++n) {
    Complex inner = 0.0;
    for (int m = 0; m < rho.dim(); ++m) inner += rho(n, m) * psi[m];
    s += std::conj(psi[n]) * inner;
  }
  return finish(s.real(), tau);
}

FidelitySeries circle_fidelity_series(const Trajectory& trajectory, double r0) {
  FidelitySeries out;
  if (trajectory.records.empty()) return out;
  const auto ref = circle_state({r0}, snapshot_of(trajectory.records.front()).cutoff());
  for (const auto& rec : trajectory.records) add_record(out, pure_fidelity(ref, snapshot_of(rec), rec.tau));
  return out;
}

FidelitySeries cat_fidelity_series(const Trajectory& trajectory, double beta) {
  FidelitySeries out;
  if (trajectory.records.empty()) return out;
  const auto ref = cat_reference(beta, snapshot_of(trajectory.records.front()).cutoff());
  for (const auto& rec : trajectory.records) {
    try {
      const auto cond = condition_on_idler(snapshot_of(rec), 0.0, 0.0);
      add_record(out, pure_fidelity(ref, cond.normalized, rec.tau));
    } catch (const NullConditioning& e) {
      std::cerr << "skipping tau=" << rec.tau << ": " << e.what() << "\n";
      out.skipped.push_back(rec.tau);
    }
  }
  return out;
}

Observer circle_fidelity_observer(double r0, const Cutoff& cutoff, std::string prefix) {
  return [ref = circle_state({r0}, cutoff), prefix = std::move(prefix)](double tau, const TwoModeDensityMatrix& rho,
                                                                         ObservableSet& out) {
    const auto f = pure_fidelity(ref, rho, tau);
    out.set(prefix, f.f_overlap);
    out.set(prefix + "_sqrt", f.f_sqrt);
  };
}

Observer cat_fidelity_observer(double beta, const Cutoff& cutoff, std::string prefix) {
  return [ref = cat_reference(beta, cutoff), prefix = std::move(prefix)](double tau, const TwoModeDensityMatrix& rho,
                                                                          ObservableSet& out) {
    try {
      const auto cond = condition_on_idler(rho, 0.0, 0.0);
      const auto f = pure_fidelity(ref, cond.normalized, tau);
      out.set(prefix, f.f_overlap);
      out.set(prefix + "_sqrt", f.f_sqrt);
    } catch (const NullConditioning& e) {
      std::cerr << "skipping tau=" << tau << ": " << e.what() << "\n";
    }
  };
}

FidelitySeries fidelity_series_from_observables(const Trajectory& trajectory, const std::string& prefix) {
  FidelitySeries out;
  for (const auto& rec : trajectory.records) {
    const auto f = rec.observables.get(prefix);
    if (!f) {
      out.skipped.push_back(rec.tau);
      continue;
    }
    FidelityRecord r;
    r.tau = rec.tau;
    r.f_overlap = *f;
    r.f_sqrt = rec.observables.get(prefix + "_sqrt").value_or(std::sqrt(*f));
    add_record(out, r);
  }
  return out;
}

void write_csv(std::ostream& os, const FidelitySeries& series) {
  os << "tau,f_overlap,f_sqrt\n";
  for (const auto& r : series.records)
    os << shortest(r.tau) << ',' << shortest(r.f_overlap) << ',' << shortest(r.f_sqrt) << '\n';
}

}  // namespace pcs
