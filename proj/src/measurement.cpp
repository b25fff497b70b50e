#include "pcs/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace pcs {

QuadratureGrid QuadratureGrid::uniform(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("quadrature grid needs at least two points");
  if (!(hi > lo)) throw std::invalid_argument("quadrature grid needs hi > lo");
  QuadratureGrid g;
  g.points.resize(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int k = 0; k < count; ++k) g.points[static_cast<std::size_t>(k)] = lo + k * step;
  g.points.back() = hi;
  return g;
}

void QuadratureGrid::validate() const {
  if (points.size() < 2) throw std::invalid_argument("quadrature grid needs at least two points");
  for (std::size_t k = 1; k < points.size(); ++k)
    if (!(points[k] > points[k - 1])) throw std::invalid_argument("quadrature grid points must increase strictly");
}

std::vector<double> hermite_functions(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("hermite_functions: n_max must be >= 0");
  std::vector<double> h(static_cast<std::size_t>(n_max) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) h[1] = std::numbers::sqrt2 * x * h[0];
  for (int n = 1; n < n_max; ++n) {
    h[n + 1] = x * std::sqrt(2.0 / (n + 1)) * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
  }
  return h;
}

std::vector<Complex> quadrature_amplitudes(int n_max, double x, double theta) {
  const auto h = hermite_functions(n_max, x);
  std::vector<Complex> out(h.size());
  for (std::size_t n = 0; n < h.size(); ++n) out[n] = std::polar(h[n], -static_cast<double>(n) * theta);
  return out;
}

Complex quad_wavefunction(int n, double x, double theta) {
  if (n < 0) throw std::invalid_argument("quad_wavefunction: n must be >= 0");
  return quadrature_amplitudes(n, x, theta)[static_cast<std::size_t>(n)];
}

namespace {

SingleModeDensityMatrix contract_idler(const TwoModeDensityMatrix& rho, std::span<const Complex> idler) {
  const int d = rho.cutoff().dim();
  SingleModeDensityMatrix sigma(rho.cutoff());
  for (int n1 = 0; n1 < d; ++n1) {
    for (int m1 = 0; m1 < d; ++m1) {
      Complex s = 0.0;
      for (int n2 = 0; n2 < d; ++n2) {
        if (idler[n2] == Complex(0.0)) continue;
        Complex inner = 0.0;
        for (int m2 = 0; m2 < d; ++m2) inner += rho(n1, n2, m1, m2) * std::conj(idler[m2]);
        s += idler[n2] * inner;
      }
      sigma(n1, m1) = s;
    }
  }
  return sigma;
}

double single_mode_probability(const SingleModeDensityMatrix& sigma, std::span<const Complex> psi) {
  const int d = sigma.dim();
  Complex s = 0.0;
  for (int n = 0; n < d; ++n) {
    Complex inner = 0.0;
    for (int m = 0; m < d; ++m) inner += sigma(n, m) * std::conj(psi[m]);
    s += psi[n] * inner;
  }
  return s.real();
}

}  // namespace

JointDistribution joint_distribution(const TwoModeDensityMatrix& rho, const QuadratureGrid& grid) {
  grid.validate();
  const int n_max = rho.cutoff().n_max();
  const std::size_t n_pts = grid.points.size();
  std::vector<std::vector<Complex>> signal(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) signal[k] = quadrature_amplitudes(n_max, grid.points[k], grid.theta1);

  JointDistribution out{grid, std::vector<double>(n_pts * n_pts)};
  for (std::size_t k2 = 0; k2 < n_pts; ++k2) {
    const auto idler = quadrature_amplitudes(n_max, grid.points[k2], grid.theta2);
    const auto sigma = contract_idler(rho, idler);
    for (std::size_t k1 = 0; k1 < n_pts; ++k1) out.values[k1 * n_pts + k2] = single_mode_probability(sigma, signal[k1]);
  }
  return out;
}

ConditionedState condition_on_idler(const TwoModeDensityMatrix& rho, double theta2, double x2) {
  const auto idler = quadrature_amplitudes(rho.cutoff().n_max(), x2, theta2);
  SingleModeDensityMatrix sigma = contract_idler(rho, idler);
  const double weight = trace(sigma).real();
  if (!(weight >= 1e-12)) {
    throw NullConditioning("conditioning on idler x2=" + std::to_string(x2) + " has weight " + std::to_string(weight));
  }
  SingleModeDensityMatrix normalized = sigma;
  for (int n = 0; n < sigma.dim(); ++n)
    for (int m = 0; m < sigma.dim(); ++m) normalized(n, m) /= weight;
  return {std::move(sigma), std::move(normalized), weight};
}

DistributionSeries signal_distribution(const SingleModeDensityMatrix& sigma, double theta1, const QuadratureGrid& grid) {
  grid.validate();
  DistributionSeries out;
  out.grid = grid;
  out.grid.theta1 = theta1;
  out.values.resize(grid.points.size());
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    const auto psi = quadrature_amplitudes(sigma.cutoff().n_max(), grid.points[k], theta1);
    out.values[k] = single_mode_probability(sigma, psi);
  }
  return out;
}

double fringe_visibility(std::span<const double> values) {
  if (values.size() < 3) return 0.0;
  const double p_max = *std::max_element(values.begin(), values.end());
  if (!(p_max > 0.0)) return 0.0;
  const double floor = 1e-6 * p_max;

  // Plateaus count once: a maximum is a run of equal samples with lower neighbours on both sides.
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < values.size();) {
    std::size_t j = i;
    while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
    if (j + 1 < values.size() && values[i] > values[i - 1] && values[i] > values[j + 1] && values[i] >= floor) {
      maxima.push_back(i);
    }
    i = j + 1;
  }
  if (maxima.size() < 2) return 0.0;
  const double p_min = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(maxima.front()),
                                         values.begin() + static_cast<std::ptrdiff_t>(maxima.back()) + 1);
  return (p_max - p_min) / (p_max + p_min);
}

double fringe_visibility(const DistributionSeries& p) { return fringe_visibility(p.values); }

double integrate(const DistributionSeries& p) {
  double s = 0.0;
  const auto& x = p.grid.points;
  for (std::size_t k = 1; k < x.size(); ++k) s += 0.5 * (x[k] - x[k - 1]) * (p.values[k] + p.values[k - 1]);
  return s;
}

void write_csv(std::ostream& os, const DistributionSeries& p,
               const std::vector<std::pair<std::string, std::string>>& metadata) {
  os << "# theta1=" << shortest(p.grid.theta1) << "\n# theta2=" << shortest(p.grid.theta2) << "\n# x2=" << shortest(p.x2)
     << "\n# tau=" << shortest(p.tau) << "\n# normalization=" << shortest(p.normalization) << "\n";
  for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
  os << "x,P\n";
  for (std::size_t k = 0; k < p.values.size(); ++k) os << shortest(p.grid.points[k]) << ',' << shortest(p.values[k]) << '\n';
}

}  // namespace pcs
