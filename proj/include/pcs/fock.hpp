#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pcs {

// Shortest decimal text that reads back to the same double.
std::string shortest(double v);

using Complex = std::complex<double>;

/// Highest retained Fock level, shared by the signal and idler modes.
class Cutoff {
 public:
  explicit Cutoff(int n_max);

  int n_max() const { return n_max_; }
  /// Levels per mode, n_max + 1.
  int dim() const { return n_max_ + 1; }
  /// Size of the two-mode basis, (n_max + 1)^2.
  std::size_t pair_dim() const { return static_cast<std::size_t>(dim()) * dim(); }
  /// Length of a flattened two-mode density matrix, (n_max + 1)^4.
  std::size_t flat_size() const { return pair_dim() * pair_dim(); }

  bool operator==(const Cutoff&) const = default;

 private:
  int n_max_;
};

enum class Mode { signal, idler };

/// Row-major pair index with the signal level outer: n1 * (n_max + 1) + n2.
std::size_t flat_index(int n1, int n2, const Cutoff& cutoff);
std::pair<int, int> pair_levels(std::size_t index, const Cutoff& cutoff);

/// Throws std::invalid_argument when the two cutoffs differ.
void require_same_cutoff(const Cutoff& a, const Cutoff& b, const char* what);

class TwoModePureState {
 public:
  explicit TwoModePureState(Cutoff cutoff);
  TwoModePureState(Cutoff cutoff, std::vector<Complex> amplitudes);

  const Cutoff& cutoff() const { return cutoff_; }
  Complex amp(int n1, int n2) const { return amp_[flat_index(n1, n2, cutoff_)]; }
  Complex& amp(int n1, int n2) { return amp_[flat_index(n1, n2, cutoff_)]; }
  std::span<const Complex> amplitudes() const { return amp_; }

  double norm_squared() const;

 private:
  Cutoff cutoff_;
  std::vector<Complex> amp_;
};

/// rho[n1,n2; m1,m2] stored as a (n_max+1)^2 square matrix, row = flat_index(n1, n2).
class TwoModeDensityMatrix {
 public:
  explicit TwoModeDensityMatrix(Cutoff cutoff);
  TwoModeDensityMatrix(Cutoff cutoff, std::vector<Complex> entries);

  const Cutoff& cutoff() const { return cutoff_; }
  std::size_t pair_dim() const { return cutoff_.pair_dim(); }

  Complex operator()(int n1, int n2, int m1, int m2) const {
    return rho_[flat_index(n1, n2, cutoff_) * pair_dim() + flat_index(m1, m2, cutoff_)];
  }
  Complex& operator()(int n1, int n2, int m1, int m2) {
    return rho_[flat_index(n1, n2, cutoff_) * pair_dim() + flat_index(m1, m2, cutoff_)];
  }
  Complex element(std::size_t row, std::size_t col) const { return rho_[row * pair_dim() + col]; }
  Complex& element(std::size_t row, std::size_t col) { return rho_[row * pair_dim() + col]; }

  std::span<const Complex> data() const { return rho_; }
  std::span<Complex> data() { return rho_; }

  TwoModeDensityMatrix adjoint() const;

  TwoModeDensityMatrix& operator+=(const TwoModeDensityMatrix& other);
  TwoModeDensityMatrix& operator*=(Complex s);

 private:
  Cutoff cutoff_;
  std::vector<Complex> rho_;
};

TwoModeDensityMatrix operator+(TwoModeDensityMatrix a, const TwoModeDensityMatrix& b);
TwoModeDensityMatrix operator*(Complex s, TwoModeDensityMatrix a);

class SingleModeDensityMatrix {
 public:
  explicit SingleModeDensityMatrix(Cutoff cutoff);

  const Cutoff& cutoff() const { return cutoff_; }
  int dim() const { return cutoff_.dim(); }

  Complex operator()(int n, int m) const { return rho_[static_cast<std::size_t>(n) * dim() + m]; }
  Complex& operator()(int n, int m) { return rho_[static_cast<std::size_t>(n) * dim() + m]; }

  std::span<const Complex> data() const { return rho_; }

  static SingleModeDensityMatrix from_pure(std::span<const Complex> psi, const Cutoff& cutoff);

 private:
  Cutoff cutoff_;
  std::vector<Complex> rho_;
};

Complex trace(const TwoModeDensityMatrix& rho);
Complex trace(const SingleModeDensityMatrix& rho);

/// max |rho - rho^dagger| over all entries.
double hermiticity_defect(const TwoModeDensityMatrix& rho);
double hermiticity_defect(const SingleModeDensityMatrix& rho);

/// Smallest eigenvalue of the (n_max+1)^2 Hermitian matrix.
/// Throws std::invalid_argument if the hermiticity defect exceeds `hermiticity_tolerance`.
double min_eigenvalue(const TwoModeDensityMatrix& rho, double hermiticity_tolerance = 1e-8);

/// Population in the top shell: states with n1 == n_max or n2 == n_max.
double leakage(const TwoModeDensityMatrix& rho);

/// Population with n1 or n2 in the top `width` levels; width == 1 reduces to leakage().
double guard_band_population(const TwoModeDensityMatrix& rho, int width);

SingleModeDensityMatrix partial_trace(const TwoModeDensityMatrix& rho, Mode keep);

}  // namespace pcs
