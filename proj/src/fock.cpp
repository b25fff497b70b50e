#include "pcs/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pcs {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Cutoff::Cutoff(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("cutoff n_max must be >= 1, got " + std::to_string(n_max));
}

std::size_t flat_index(int n1, int n2, const Cutoff& cutoff) {
  if (n1 < 0 || n2 < 0 || n1 > cutoff.n_max() || n2 > cutoff.n_max()) {
    throw std::out_of_range("Fock level (" + std::to_string(n1) + ", " + std::to_string(n2) +
                            ") outside cutoff n_max=" + std::to_string(cutoff.n_max()));
  }
  return static_cast<std::size_t>(n1) * cutoff.dim() + n2;
}

std::pair<int, int> pair_levels(std::size_t index, const Cutoff& cutoff) {
  if (index >= cutoff.pair_dim()) throw std::out_of_range("pair index outside basis");
  const auto d = static_cast<std::size_t>(cutoff.dim());
  return {static_cast<int>(index / d), static_cast<int>(index % d)};
}

void require_same_cutoff(const Cutoff& a, const Cutoff& b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": cutoff mismatch (n_max " + std::to_string(a.n_max()) +
                                " vs " + std::to_string(b.n_max()) + ")");
  }
}

TwoModePureState::TwoModePureState(Cutoff cutoff) : cutoff_(cutoff), amp_(cutoff.pair_dim()) {}

TwoModePureState::TwoModePureState(Cutoff cutoff, std::vector<Complex> amplitudes)
    : cutoff_(cutoff), amp_(std::move(amplitudes)) {
  if (amp_.size() != cutoff_.pair_dim()) throw std::invalid_argument("amplitude count does not match cutoff");
}

double TwoModePureState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

TwoModeDensityMatrix::TwoModeDensityMatrix(Cutoff cutoff) : cutoff_(cutoff), rho_(cutoff.flat_size()) {}

TwoModeDensityMatrix::TwoModeDensityMatrix(Cutoff cutoff, std::vector<Complex> entries)
    : cutoff_(cutoff), rho_(std::move(entries)) {
  if (rho_.size() != cutoff_.flat_size()) throw std::invalid_argument("density entry count does not match cutoff");
}

TwoModeDensityMatrix TwoModeDensityMatrix::adjoint() const {
  TwoModeDensityMatrix out(cutoff_);
  const std::size_t d = pair_dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out.rho_[c * d + r] = std::conj(rho_[r * d + c]);
  return out;
}

TwoModeDensityMatrix& TwoModeDensityMatrix::operator+=(const TwoModeDensityMatrix& other) {
  require_same_cutoff(cutoff_, other.cutoff_, "density addition");
  for (std::size_t i = 0; i < rho_.size(); ++i) rho_[i] += other.rho_[i];
  return *this;
}

TwoModeDensityMatrix& TwoModeDensityMatrix::operator*=(Complex s) {
  for (auto& v : rho_) v *= s;
  return *this;
}

TwoModeDensityMatrix operator+(TwoModeDensityMatrix a, const TwoModeDensityMatrix& b) {
  a += b;
  return a;
}

TwoModeDensityMatrix operator*(Complex s, TwoModeDensityMatrix a) {
  a *= s;
  return a;
}

SingleModeDensityMatrix::SingleModeDensityMatrix(Cutoff cutoff)
    : cutoff_(cutoff), rho_(static_cast<std::size_t>(cutoff.dim()) * cutoff.dim()) {}

SingleModeDensityMatrix SingleModeDensityMatrix::from_pure(std::span<const Complex> psi, const Cutoff& cutoff) {
  if (psi.size() != static_cast<std::size_t>(cutoff.dim())) {
    throw std::invalid_argument("single-mode amplitude count does not match cutoff");
  }
  SingleModeDensityMatrix out(cutoff);
  for (int n = 0; n < cutoff.dim(); ++n)
    for (int m = 0; m < cutoff.dim(); ++m) out(n, m) = psi[n] * std::conj(psi[m]);
  return out;
}

Complex trace(const TwoModeDensityMatrix& rho) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < rho.pair_dim(); ++i) s += rho.element(i, i);
  return s;
}

Complex trace(const SingleModeDensityMatrix& rho) {
  Complex s = 0.0;
  for (int n = 0; n < rho.dim(); ++n) s += rho(n, n);
  return s;
}

double hermiticity_defect(const TwoModeDensityMatrix& rho) {
  double worst = 0.0;
  const std::size_t d = rho.pair_dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c)
      worst = std::max(worst, std::abs(rho.element(r, c) - std::conj(rho.element(c, r))));
  return worst;
}

double hermiticity_defect(const SingleModeDensityMatrix& rho) {
  double worst = 0.0;
  for (int n = 0; n < rho.dim(); ++n)
    for (int m = n; m < rho.dim(); ++m) worst = std::max(worst, std::abs(rho(n, m) - std::conj(rho(m, n))));
  return worst;
}

double min_eigenvalue(const TwoModeDensityMatrix& rho, double hermiticity_tolerance) {
  const double defect = hermiticity_defect(rho);
  if (defect > hermiticity_tolerance) {
    throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const auto d = static_cast<Eigen::Index>(rho.pair_dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rho.element(r, c);
  // The solver reads one triangle only.
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double guard_band_population(const TwoModeDensityMatrix& rho, int width) {
  if (width < 1) throw std::invalid_argument("guard band width must be >= 1");
  const int n_max = rho.cutoff().n_max();
  const int edge = n_max - width + 1;
  double p = 0.0;
  for (int n1 = 0; n1 <= n_max; ++n1)
    for (int n2 = 0; n2 <= n_max; ++n2)
      if (n1 >= edge || n2 >= edge) p += rho(n1, n2, n1, n2).real();
  return p;
}

double leakage(const TwoModeDensityMatrix& rho) { return guard_band_population(rho, 1); }

SingleModeDensityMatrix partial_trace(const TwoModeDensityMatrix& rho, Mode keep) {
  const Cutoff& cutoff = rho.cutoff();
  const int d = cutoff.dim();
  SingleModeDensityMatrix out(cutoff);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      Complex s = 0.0;
      for (int k = 0; k < d; ++k) s += keep == Mode::signal ? rho(n, k, m, k) : rho(k, n, k, m);
      out(n, m) = s;
    }
  }
  return out;
}

}  // namespace pcs
