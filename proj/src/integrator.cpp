#include "pcs/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace pcs {

void ObservableSet::set(const std::string& name, double value) {
  for (auto& [k, v] : items_) {
    if (k == name) {
      v = value;
      return;
    }
  }
  items_.emplace_back(name, value);
}

std::optional<double> ObservableSet::get(const std::string& name) const {
  for (const auto& [k, v] : items_)
    if (k == name) return v;
  return std::nullopt;
}

std::vector<std::pair<double, double>> Trajectory::series(const std::string& name) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : records)
    if (auto v = r.observables.get(name)) out.emplace_back(r.tau, *v);
  return out;
}

double stable_time_step(const SuperOperator& L) {
  const double bound = L.max_row_abs_sum();
  return bound > 0.0 ? std::min(1e-3, 1.0 / bound) : 1e-3;
}

namespace {

// Scratch buffers for RK4 in compressed coordinates.
class Rk4Workspace {
 public:
  explicit Rk4Workspace(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(const SuperOperator& L, std::span<const Complex> y, std::span<Complex> out, double dt) {
    const std::size_t n = y.size();
    L.apply_compressed(y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    L.apply_compressed(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    L.apply_compressed(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    L.apply_compressed(tmp_, k4_);
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
};

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

class Monitor {
 public:
  Monitor(const SuperOperator& L, const EvolveControls& c) : L_(L), c_(c) {}

  double trace(std::span<const Complex> y) const {
    double s = 0.0;
    for (auto k : L_.diagonal_positions()) s += y[k].real();
    return s;
  }

  double leakage(std::span<const Complex> y) const {
    double s = 0.0;
    for (auto k : L_.top_shell_positions()) s += y[k].real();
    return s;
  }

  void check(std::span<const Complex> y, double tau) const {
    const double tr = trace(y);
    if (!std::isfinite(tr) || std::abs(tr - 1.0) > c_.max_trace_drift) {
      std::ostringstream msg;
      msg << "trace drift " << tr - 1.0 << " at tau=" << tau << " exceeds " << c_.max_trace_drift
          << " (step too large or basis too small)";
      throw EvolutionAborted(msg.str(), tau);
    }
    const double leak = leakage(y);
    if (leak > c_.max_leakage) {
      std::ostringstream msg;
      msg << "top-shell population " << leak << " at tau=" << tau << " exceeds " << c_.max_leakage
          << " (increase n_max)";
      throw EvolutionAborted(msg.str(), tau);
    }
  }

 private:
  const SuperOperator& L_;
  const EvolveControls& c_;
};

void validate(const EvolveControls& c, const SuperOperator& L) {
  if (!(c.t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (!(c.record_every > 0.0)) throw std::invalid_argument("record_every must be > 0");
  if (const auto* f = std::get_if<FixedStep>(&c.stepping)) {
    if (!(f->dt > 0.0)) throw std::invalid_argument("fixed step dt must be > 0");
    if (f->dt * L.max_row_abs_sum() > 1.0) {
      std::cerr << "warning: dt=" << f->dt << " exceeds the stability heuristic 1/max_row_abs_sum="
                << 1.0 / L.max_row_abs_sum() << "\n";
    }
  } else {
    const auto& a = std::get<AdaptiveStep>(c.stepping);
    if (!(a.rel_tol > 0.0 && a.rel_tol <= 1e-3)) throw std::invalid_argument("rel_tol must lie in (0, 1e-3]");
  }
}

}  // namespace

TwoModeDensityMatrix step_rk4(const SuperOperator& L, const TwoModeDensityMatrix& rho, double dt) {
  require_same_cutoff(L.cutoff(), rho.cutoff(), "step_rk4");
  if (dt * L.max_row_abs_sum() > 1.0) {
    std::cerr << "warning: dt=" << dt << " exceeds the stability heuristic 1/max_row_abs_sum\n";
  }
  const auto y = L.gather(rho);
  std::vector<Complex> out(y.size());
  Rk4Workspace ws(y.size());
  ws.step(L, y, out, dt);
  return L.scatter(out);
}

Trajectory evolve(const SuperOperator& L, const TwoModeDensityMatrix& rho0, const EvolveControls& controls,
                  std::span<const Observer> observers) {
  validate(controls, L);
  require_same_cutoff(L.cutoff(), rho0.cutoff(), "evolve");
  if (hermiticity_defect(rho0) > 1e-10) throw std::invalid_argument("initial state is not Hermitian");
  if (std::abs(trace(rho0) - 1.0) > 1e-10) throw std::invalid_argument("initial state does not have unit trace");

  std::vector<Complex> y = L.gather(rho0);
  std::vector<Complex> next(y.size());
  Rk4Workspace ws(y.size());
  Monitor monitor(L, controls);

  Trajectory traj{{}, TwoModeDensityMatrix(L.cutoff()), {}};
  traj.steps.smallest_dt = std::numeric_limits<double>::infinity();

  auto record = [&](double tau) {
    TrajectoryRecord rec;
    rec.tau = tau;
    TwoModeDensityMatrix rho = L.scatter(y);
    rec.observables.set("trace", monitor.trace(y));
    rec.observables.set("hermiticity_defect", hermiticity_defect(rho));
    rec.observables.set("leakage", monitor.leakage(y));
    if (controls.track_min_eigenvalue) rec.observables.set("min_eigenvalue", min_eigenvalue(rho, 1e-6));
    for (const auto& obs : observers) obs(tau, rho, rec.observables);
    if (controls.keep_snapshots) rec.snapshot = std::move(rho);
    traj.records.push_back(std::move(rec));
  };

  // Record times are k * record_every, computed from k to avoid accumulating rounding.
  const auto n_records = static_cast<std::size_t>(std::floor(controls.t_end / controls.record_every + 1e-9));
  std::vector<double> marks;
  for (std::size_t k = 1; k <= n_records; ++k) marks.push_back(static_cast<double>(k) * controls.record_every);
  if (marks.empty() || controls.t_end - marks.back() > 1e-12 * controls.t_end) marks.push_back(controls.t_end);
  else marks.back() = controls.t_end;

  record(0.0);
  double tau = 0.0;

  if (const auto* fixed = std::get_if<FixedStep>(&controls.stepping)) {
    for (const double mark : marks) {
      // Equal sub-steps that land exactly on the mark; equals dt when record_every is a multiple of it.
      const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((mark - tau) / fixed->dt - 1e-9)));
      const double h = (mark - tau) / static_cast<double>(n);
      for (std::size_t s = 0; s < n; ++s) {
        ws.step(L, y, next, h);
        y.swap(next);
        monitor.check(y, tau + (s + 1) * h);
      }
      traj.steps.accepted += n;
      traj.steps.smallest_dt = std::min(traj.steps.smallest_dt, h);
      traj.steps.largest_dt = std::max(traj.steps.largest_dt, h);
      tau = mark;
      record(tau);
    }
  } else {
    const double rel_tol = std::get<AdaptiveStep>(controls.stepping).rel_tol;
    const double dt_cap = stable_time_step(L);
    double dt = dt_cap;
    std::vector<Complex> half(y.size());
    std::vector<Complex> two_half(y.size());
    for (const double mark : marks) {
      while (mark - tau > 1e-14 * std::max(1.0, mark)) {
        const bool last = dt >= mark - tau;
        const double h = last ? mark - tau : dt;
        ws.step(L, y, next, h);
        ws.step(L, y, half, 0.5 * h);
        ws.step(L, half, two_half, 0.5 * h);
        double err = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(two_half[i] - next[i]));
        err /= 15.0;
        const double tol = rel_tol * std::max(1e-300, max_abs(two_half));
        const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
        if (err <= tol) {
          y.swap(two_half);
          tau = last ? mark : tau + h;
          monitor.check(y, tau);
          ++traj.steps.accepted;
          traj.steps.smallest_dt = std::min(traj.steps.smallest_dt, h);
          traj.steps.largest_dt = std::max(traj.steps.largest_dt, h);
          if (!last) dt = std::min(dt_cap, h * std::clamp(factor, 0.2, 2.0));
        } else {
          ++traj.steps.rejected;
          dt = h * std::clamp(factor, 0.2, 0.9);
          if (dt < 1e-14 * std::max(1.0, controls.t_end)) {
            throw EvolutionAborted("adaptive step size underflow", tau);
          }
        }
      }
      tau = mark;
      record(tau);
    }
  }

  traj.final_state = L.scatter(y);
  return traj;
}

}  // namespace pcs
