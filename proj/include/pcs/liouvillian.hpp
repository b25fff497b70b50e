#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pcs/fock.hpp"

namespace pcs {

/// Scaled parameters of the pump-eliminated oscillator. Time is tau = gamma t.
struct OscillatorParams {
  /// lambda = epsilon kappa / (gamma_3 gamma), pair-creation strength.
  double lambda = 0.0;
  /// g^2 = kappa^2 / (gamma_3 gamma), two-photon loss rate.
  double g2 = 1.0;

  static OscillatorParams from_ratio(double pump_ratio, double g2);
  double pump_ratio() const { return lambda / g2; }
};

/// Which rows and columns of the flattened density matrix the operator carries.
enum class Sector {
  full,
  /// Entries with (n1 - n2) == (m1 - m2). Every term of the generator conserves
  /// (n1 - n2) - (m1 - m2), so states that start here (e.g. the vacuum) never leave.
  pair_difference,
};

/// Sparse real generator d rho / d tau = L rho over a compressed set of flattened indices.
///
/// Flattened index of rho[n1,n2; m1,m2] is flat_index(n1,n2) * (n_max+1)^2 + flat_index(m1,m2).
/// Rows are stored in CSR form over the compressed coordinates listed by support().
class SuperOperator {
 public:
  struct Triple {
    std::size_t row;
    std::size_t col;
    double value;
  };

  const Cutoff& cutoff() const { return cutoff_; }
  Sector sector() const { return sector_; }
  std::size_t size() const { return support_.size(); }
  std::size_t nnz() const { return values_.size(); }

  /// Flattened density-matrix index of each compressed coordinate.
  std::span<const std::size_t> support() const { return support_; }

  /// y = L x in compressed coordinates.
  void apply_compressed(std::span<const Complex> x, std::span<Complex> y) const;

  /// Throws std::invalid_argument if rho has weight outside the operator's sector.
  std::vector<Complex> gather(const TwoModeDensityMatrix& rho) const;
  TwoModeDensityMatrix scatter(std::span<const Complex> x) const;

  /// Compressed positions of the diagonal entries rho[n1,n2; n1,n2].
  const std::vector<std::size_t>& diagonal_positions() const { return diagonal_positions_; }
  /// Compressed positions of diagonal entries in the top shell (n1 or n2 == n_max).
  const std::vector<std::size_t>& top_shell_positions() const { return top_shell_positions_; }

  /// Gershgorin bound on the spectral radius.
  double max_row_abs_sum() const;

  /// Entry at flattened (row, col); zero when not stored.
  double entry(std::size_t row, std::size_t col) const;
  std::vector<Triple> triples() const;

 private:
  friend SuperOperator build(const OscillatorParams& p, const Cutoff& cutoff, Sector sector);
  SuperOperator(Cutoff cutoff, Sector sector) : cutoff_(cutoff), sector_(sector) {}

  Cutoff cutoff_;
  Sector sector_;
  std::vector<std::size_t> support_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
  std::vector<std::size_t> diagonal_positions_;
  std::vector<std::size_t> top_shell_positions_;
};

/// Generator of
///   d rho/d tau = lambda [a1^dag a2^dag - a1 a2, rho]
///               + g^2 (2 a1 a2 rho a1^dag a2^dag - n1 n2 rho - rho n1 n2)
///               + sum_j (2 a_j rho a_j^dag - n_j rho - rho n_j)
/// assembled element by element in the number basis. g2 == 0 is accepted (loss-only limit).
SuperOperator build(const OscillatorParams& p, const Cutoff& cutoff, Sector sector = Sector::full);

/// d rho / d tau for the given state.
TwoModeDensityMatrix apply(const SuperOperator& L, const TwoModeDensityMatrix& rho);

/// One "row col value" line per stored entry, flattened indices, preceded by a '#' header.
void write_triples(std::ostream& os, const SuperOperator& L);

}  // namespace pcs
