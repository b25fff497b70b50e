#pragma once

// Brute-force references for the tests. Nothing here reuses index arithmetic
// from the production library; the generator is assembled from explicit
// ladder-operator matrices and Kronecker products.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

constexpr int kMaxDenseCutoff = 6;

/// Truncated annihilation operator on levels 0..n_max.
Matrix annihilation(int n_max);

Matrix kron(const Matrix& a, const Matrix& b);

/// Generator acting on the row-major vectorisation of rho over the two-mode
/// basis |n1 n2>, n1 outer. Throws std::invalid_argument for n_max > 6.
Matrix dense_liouvillian(double lambda, double g2, int n_max);

/// |alpha e^{-tau}><alpha e^{-tau}| on levels 0..n_max, not renormalised.
CMatrix coherent_decay_reference(Complex alpha, double tau, int n_max);

/// Coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!) by direct power and factorial.
std::vector<Complex> coherent_amplitudes(Complex alpha, int n_max);

/// I_0(z) from its power series, summed until the terms vanish.
long double bessel_i0_series(long double z);

/// Normalised Hermite function h_n(x) via physicists' polynomials in long double.
long double hermite_function(int n, long double x);

/// Quadrature density of the normalised cat |beta> + sign |-beta>, closed form.
double cat_quadrature_density(Complex beta, int sign, double theta, double x);

}  // namespace oracle
