#pragma once

#include <string>
#include <vector>

#include "pcs/fock.hpp"

namespace pcs {

/// Coherent radius of the m = 0 pair-coherent ("circle") state.
struct CircleParams {
  double r0 = 0.0;
};

/// Two-mode squeezing argument r = chi * epsilon * tau of the parametric amplifier.
struct NdpaParams {
  double r = 0.0;
};

/// Coefficients on a truncated single-mode basis, with the probability mass the truncation dropped.
struct TruncatedAmplitudes {
  std::vector<Complex> coefficients;
  double tail_mass = 0.0;
};

struct TruncatedPairState {
  TwoModePureState state;
  double tail_mass = 0.0;
};

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!), not renormalised.
TruncatedAmplitudes coherent_coefficients(Complex alpha, const Cutoff& cutoff);

/// sum_n c_n |n>|n> with c_n proportional to r0^{2n}/n!, renormalised over the truncated basis.
TwoModePureState circle_state(CircleParams p, const Cutoff& cutoff);

/// c_n = tanh^n(r) / cosh(r) on the diagonal n1 == n2.
TruncatedPairState ndpa_state(NdpaParams p, const Cutoff& cutoff);

/// (|beta> + sign |-beta>) / sqrt(2 (1 + sign e^{-2|beta|^2})). sign must be +1 or -1.
std::vector<Complex> cat_state(Complex beta, int sign, const Cutoff& cutoff);

TwoModeDensityMatrix pure_to_density(const TwoModePureState& psi);

/// r0^2 I1(2 r0^2) / I0(2 r0^2), the mean photon number per mode of the ideal circle state.
double circle_mean_photon_number(double r0);

/// How the oscillator's pump ratio lambda/g^2 is turned into a circle radius.
enum class RadiusMapping {
  /// r0 = lambda/g^2, the amplitude that labels the cat |i lambda/g^2> + |-i lambda/g^2>.
  linear,
  /// r0 = sqrt(lambda/g^2): the pure stationary state of pair pumping plus two-photon loss
  /// obeys a1 a2 |psi> = (lambda/g^2) |psi>, i.e. r0^2 = lambda/g^2.
  dark_state,
};

double circle_radius(double pump_ratio, RadiusMapping mapping);

const char* to_string(RadiusMapping mapping);
RadiusMapping parse_radius_mapping(const std::string& name);

}  // namespace pcs
