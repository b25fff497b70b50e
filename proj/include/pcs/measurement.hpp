#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pcs/fock.hpp"

namespace pcs {

/// Quadrature sample points (units with hbar = omega = c = 1) and local-oscillator phases.
struct QuadratureGrid {
  std::vector<double> points;
  double theta1 = 0.0;
  double theta2 = 0.0;

  /// `count` evenly spaced points on [lo, hi]; the default is [-6, 6] with 241 points.
  static QuadratureGrid uniform(double lo = -6.0, double hi = 6.0, int count = 241);
  void validate() const;
};

struct DistributionSeries {
  QuadratureGrid grid;
  std::vector<double> values;
  /// Weight of the conditioning slice the distribution came from (1 if unconditioned).
  double normalization = 1.0;
  double tau = 0.0;
  /// Idler conditioning value, when the distribution is conditional.
  double x2 = 0.0;
};

/// Sampled P(x1, x2), row-major with x1 outer.
struct JointDistribution {
  QuadratureGrid grid;
  std::vector<double> values;

  double at(std::size_t i1, std::size_t i2) const { return values[i1 * grid.points.size() + i2]; }
};

struct ConditionedState {
  SingleModeDensityMatrix unnormalized;
  SingleModeDensityMatrix normalized;
  /// Trace of the unnormalised state: a probability density in x2.
  double weight = 0.0;
};

/// Raised when conditioning selects a slice of (numerically) zero weight.
class NullConditioning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real Hermite functions h_0(x) .. h_{n_max}(x) with h_n(x) = (2^n n! sqrt(pi))^{-1/2} e^{-x^2/2} H_n(x).
std::vector<double> hermite_functions(int n_max, double x);

/// <x_theta | n> for n = 0 .. n_max.
std::vector<Complex> quadrature_amplitudes(int n_max, double x, double theta);

/// <x_theta | n> = e^{-i n theta} h_n(x).
Complex quad_wavefunction(int n, double x, double theta);

JointDistribution joint_distribution(const TwoModeDensityMatrix& rho, const QuadratureGrid& grid);

/// Projects the idler onto the X_{theta2} eigenvalue x2. Throws NullConditioning when weight < 1e-12.
ConditionedState condition_on_idler(const TwoModeDensityMatrix& rho, double theta2, double x2);

/// P(x1) = sum_{n,m} sigma[n,m] <x1_theta1|n> <m|x1_theta1>, sampled on grid.points.
DistributionSeries signal_distribution(const SingleModeDensityMatrix& sigma, double theta1, const QuadratureGrid& grid);

/// Contrast (P_max - P_min) / (P_max + P_min), P_max the global maximum, P_min the lowest sample between
/// the outermost local maxima. Local maxima below 1e-6 P_max are ignored as rounding noise.
/// Returns 0 with fewer than two local maxima.
double fringe_visibility(std::span<const double> values);
double fringe_visibility(const DistributionSeries& p);

/// Trapezoid integral of the distribution over its grid.
double integrate(const DistributionSeries& p);

/// "# key=value" metadata lines, then "x,P".
void write_csv(std::ostream& os, const DistributionSeries& p,
               const std::vector<std::pair<std::string, std::string>>& metadata = {});

}  // namespace pcs
