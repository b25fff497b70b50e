#include "pcs/states.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace pcs {

TruncatedAmplitudes coherent_coefficients(Complex alpha, const Cutoff& cutoff) {
  const double mean = std::norm(alpha);
  if (mean > 0.5 * cutoff.n_max()) {
    std::cerr << "warning: coherent amplitude |alpha|^2=" << mean << " is not small against n_max=" << cutoff.n_max()
              << "\n";
  }
  TruncatedAmplitudes out;
  out.coefficients.resize(cutoff.dim());
  Complex c = std::exp(-0.5 * mean);
  double kept = 0.0;
  for (int n = 0; n < cutoff.dim(); ++n) {
    out.coefficients[n] = c;
    kept += std::norm(c);
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  out.tail_mass = std::max(0.0, 1.0 - kept);
  return out;
}

TwoModePureState circle_state(CircleParams p, const Cutoff& cutoff) {
  if (!(p.r0 >= 0.0)) throw std::invalid_argument("circle radius r0 must be >= 0");
  TwoModePureState psi(cutoff);
  const double zeta = p.r0 * p.r0;
  // Unnormalised shape zeta^n / n!; the overall Bessel factor cancels in the renormalisation.
  double c = 1.0;
  double norm = 0.0;
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    psi.amp(n, n) = c;
    norm += c * c;
    c *= zeta / (n + 1);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (int n = 0; n <= cutoff.n_max(); ++n) psi.amp(n, n) *= scale;
  return psi;
}

TruncatedPairState ndpa_state(NdpaParams p, const Cutoff& cutoff) {
  if (!(p.r >= 0.0)) throw std::invalid_argument("NDPA squeeze argument must be >= 0");
  const double t = std::tanh(p.r);
  TwoModePureState psi(cutoff);
  double c = 1.0 / std::cosh(p.r);
  double kept = 0.0;
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    psi.amp(n, n) = c;
    kept += c * c;
    c *= t;
  }
  const double tail = std::max(0.0, 1.0 - kept);
  if (tail > 1e-8) {
    std::cerr << "warning: NDPA state r=" << p.r << " loses " << tail << " probability to truncation\n";
  }
  return {std::move(psi), tail};
}

std::vector<Complex> cat_state(Complex beta, int sign, const Cutoff& cutoff) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("cat parity sign must be +1 or -1");
  if (sign == -1 && beta == Complex(0.0)) throw std::invalid_argument("odd cat with beta = 0 is the null vector");
  const auto plus = coherent_coefficients(beta, cutoff).coefficients;
  const auto minus = coherent_coefficients(-beta, cutoff).coefficients;
  const double norm = std::sqrt(2.0 * (1.0 + sign * std::exp(-2.0 * std::norm(beta))));
  std::vector<Complex> out(plus.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    // Parity is exact: the cancelling sector is set to zero rather than left at rounding level.
    const bool even = n % 2 == 0;
    out[n] = (even == (sign == 1)) ? (plus[n] + static_cast<double>(sign) * minus[n]) / norm : Complex(0.0);
  }
  return out;
}

TwoModeDensityMatrix pure_to_density(const TwoModePureState& psi) {
  TwoModeDensityMatrix rho(psi.cutoff());
  const auto amp = psi.amplitudes();
  const std::size_t d = amp.size();
  for (std::size_t r = 0; r < d; ++r) {
    if (amp[r] == Complex(0.0)) continue;
    for (std::size_t c = 0; c < d; ++c) rho.element(r, c) = amp[r] * std::conj(amp[c]);
  }
  return rho;
}

double circle_mean_photon_number(double r0) {
  const double z = 2.0 * r0 * r0;
  if (z == 0.0) return 0.0;
  return r0 * r0 * std::cyl_bessel_i(1.0, z) / std::cyl_bessel_i(0.0, z);
}

double circle_radius(double pump_ratio, RadiusMapping mapping) {
  if (!(pump_ratio >= 0.0)) throw std::invalid_argument("pump ratio lambda/g^2 must be >= 0");
  return mapping == RadiusMapping::linear ? pump_ratio : std::sqrt(pump_ratio);
}

const char* to_string(RadiusMapping mapping) {
  return mapping == RadiusMapping::linear ? "linear" : "dark-state";
}

RadiusMapping parse_radius_mapping(const std::string& name) {
  if (name == "linear") return RadiusMapping::linear;
  if (name == "dark-state") return RadiusMapping::dark_state;
  throw std::invalid_argument("unknown radius mapping '" + name + "' (expected linear or dark-state)");
}

}  // namespace pcs
