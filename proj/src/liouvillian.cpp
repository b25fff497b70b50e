#include "pcs/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pcs {

OscillatorParams OscillatorParams::from_ratio(double pump_ratio, double g2) {
  if (!(g2 > 0.0)) throw std::invalid_argument("g^2 must be > 0 when lambda is given as a ratio");
  if (!(pump_ratio >= 0.0)) throw std::invalid_argument("lambda/g^2 must be >= 0");
  return {pump_ratio * g2, g2};
}

namespace {

struct Levels {
  int i1, i2, j1, j2;
};

class Assembler {
 public:
  Assembler(const Cutoff& cutoff, const std::vector<std::ptrdiff_t>& position)
      : cutoff_(cutoff), position_(position), d_(cutoff.pair_dim()) {}

  void begin_row() { row_.clear(); }

  // Adds `value` times rho[n1,n2; m1,m2] to the current row; out-of-basis sources are truncated away.
  // Coefficients are accumulated in extended precision and rounded once per stored entry.
  void add(int n1, int n2, int m1, int m2, long double value) {
    if (value == 0.0L) return;
    const int top = cutoff_.n_max();
    if (n1 < 0 || n2 < 0 || m1 < 0 || m2 < 0 || n1 > top || n2 > top || m1 > top || m2 > top) return;
    const std::size_t flat = (static_cast<std::size_t>(n1) * cutoff_.dim() + n2) * d_ +
                             static_cast<std::size_t>(m1) * cutoff_.dim() + m2;
    const std::ptrdiff_t col = position_[flat];
    if (col < 0) throw std::logic_error("generator couples outside its sector");
    row_.push_back({static_cast<std::size_t>(col), value});
  }

  template <class Sink>
  void end_row(Sink&& sink) {
    std::sort(row_.begin(), row_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row_.size();) {
      const std::size_t col = row_[k].first;
      long double v = 0.0L;
      for (; k < row_.size() && row_[k].first == col; ++k) v += row_[k].second;
      if (v != 0.0L) sink(col, static_cast<double>(v));
    }
  }

 private:
  const Cutoff& cutoff_;
  const std::vector<std::ptrdiff_t>& position_;
  std::size_t d_;
  std::vector<std::pair<std::size_t, long double>> row_;
};

bool in_sector(const Levels& l, Sector sector) {
  return sector == Sector::full || (l.i1 - l.i2) == (l.j1 - l.j2);
}

}  // namespace

SuperOperator build(const OscillatorParams& p, const Cutoff& cutoff, Sector sector) {
  if (!(p.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(p.g2 >= 0.0)) throw std::invalid_argument("g^2 must be >= 0");

  SuperOperator L(cutoff, sector);
  const int dim = cutoff.dim();
  const int top = cutoff.n_max();
  const std::size_t d = cutoff.pair_dim();

  std::vector<std::ptrdiff_t> position(cutoff.flat_size(), -1);
  std::vector<Levels> rows;
  for (int i1 = 0; i1 < dim; ++i1)
    for (int i2 = 0; i2 < dim; ++i2)
      for (int j1 = 0; j1 < dim; ++j1)
        for (int j2 = 0; j2 < dim; ++j2) {
          const Levels l{i1, i2, j1, j2};
          if (!in_sector(l, sector)) continue;
          const std::size_t flat = (static_cast<std::size_t>(i1) * dim + i2) * d + static_cast<std::size_t>(j1) * dim + j2;
          position[flat] = static_cast<std::ptrdiff_t>(rows.size());
          L.support_.push_back(flat);
          rows.push_back(l);
          if (i1 == j1 && i2 == j2) {
            L.diagonal_positions_.push_back(rows.size() - 1);
            if (i1 == top || i2 == top) L.top_shell_positions_.push_back(rows.size() - 1);
          }
        }

  using W = long double;
  const W lambda = p.lambda;
  const W g2 = p.g2;
  Assembler as(cutoff, position);
  L.row_ptr_.reserve(rows.size() + 1);
  L.row_ptr_.push_back(0);
  for (const auto& [i1, i2, j1, j2] : rows) {
    as.begin_row();
    // lambda [a1^dag a2^dag - a1 a2, rho]
    as.add(i1 - 1, i2 - 1, j1, j2, lambda * std::sqrt(W(i1) * i2));
    as.add(i1 + 1, i2 + 1, j1, j2, -lambda * std::sqrt(W(i1 + 1) * (i2 + 1)));
    as.add(i1, i2, j1 - 1, j2 - 1, lambda * std::sqrt(W(j1) * j2));
    as.add(i1, i2, j1 + 1, j2 + 1, -lambda * std::sqrt(W(j1 + 1) * (j2 + 1)));
    // two-photon loss
    as.add(i1 + 1, i2 + 1, j1 + 1, j2 + 1, 2 * g2 * std::sqrt(W(i1 + 1) * (i2 + 1) * (j1 + 1) * (j2 + 1)));
    as.add(i1, i2, j1, j2, -g2 * (W(i1) * i2 + W(j1) * j2));
    // single-photon loss, signal then idler
    as.add(i1 + 1, i2, j1 + 1, j2, 2 * std::sqrt(W(i1 + 1) * (j1 + 1)));
    as.add(i1, i2, j1, j2, -W(i1 + j1));
    as.add(i1, i2 + 1, j1, j2 + 1, 2 * std::sqrt(W(i2 + 1) * (j2 + 1)));
    as.add(i1, i2, j1, j2, -W(i2 + j2));
    as.end_row([&](std::size_t col, double v) {
      L.cols_.push_back(col);
      L.values_.push_back(v);
    });
    L.row_ptr_.push_back(L.values_.size());
  }
  return L;
}

void SuperOperator::apply_compressed(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != size() || y.size() != size()) throw std::invalid_argument("apply: vector length mismatch");
  const std::size_t rows = size();
  const std::size_t* rp = row_ptr_.data();
  const std::size_t* ci = cols_.data();
  const double* v = values_.data();
  const Complex* in = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      const Complex z = in[ci[k]];
      re += v[k] * z.real();
      im += v[k] * z.imag();
    }
    y[r] = Complex(re, im);
  }
}

std::vector<Complex> SuperOperator::gather(const TwoModeDensityMatrix& rho) const {
  require_same_cutoff(cutoff_, rho.cutoff(), "SuperOperator::gather");
  const auto data = rho.data();
  std::vector<Complex> x(support_.size());
  for (std::size_t k = 0; k < support_.size(); ++k) x[k] = data[support_[k]];
  if (sector_ != Sector::full) {
    double inside = 0.0;
    for (const auto& z : x) inside += std::abs(z);
    double total = 0.0;
    for (const auto& z : data) total += std::abs(z);
    if (total - inside > 1e-14 * std::max(1.0, total)) {
      throw std::invalid_argument("state has weight outside the operator's pair-difference sector");
    }
  }
  return x;
}

TwoModeDensityMatrix SuperOperator::scatter(std::span<const Complex> x) const {
  if (x.size() != support_.size()) throw std::invalid_argument("scatter: vector length mismatch");
  TwoModeDensityMatrix rho(cutoff_);
  auto data = rho.data();
  for (std::size_t k = 0; k < support_.size(); ++k) data[support_[k]] = x[k];
  return rho;
}

double SuperOperator::max_row_abs_sum() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < size(); ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(values_[k]);
    worst = std::max(worst, s);
  }
  return worst;
}

double SuperOperator::entry(std::size_t row, std::size_t col) const {
  const auto r = std::lower_bound(support_.begin(), support_.end(), row);
  const auto c = std::lower_bound(support_.begin(), support_.end(), col);
  if (r == support_.end() || *r != row || c == support_.end() || *c != col) return 0.0;
  const auto rr = static_cast<std::size_t>(r - support_.begin());
  const auto cc = static_cast<std::size_t>(c - support_.begin());
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[rr]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[rr + 1]);
  const auto it = std::lower_bound(first, last, cc);
  return (it != last && *it == cc) ? values_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
}

std::vector<SuperOperator::Triple> SuperOperator::triples() const {
  std::vector<Triple> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < size(); ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      out.push_back({support_[r], support_[cols_[k]], values_[k]});
  return out;
}

TwoModeDensityMatrix apply(const SuperOperator& L, const TwoModeDensityMatrix& rho) {
  require_same_cutoff(L.cutoff(), rho.cutoff(), "apply");
  const auto x = L.gather(rho);
  std::vector<Complex> y(x.size());
  L.apply_compressed(x, y);
  return L.scatter(y);
}

void write_triples(std::ostream& os, const SuperOperator& L) {
  os << "# n_max=" << L.cutoff().n_max() << " sector=" << (L.sector() == Sector::full ? "full" : "pair-difference")
     << " nnz=" << L.nnz() << "\n# row col value\n";
  for (const auto& t : L.triples()) os << t.row << ' ' << t.col << ' ' << shortest(t.value) << '\n';
}

}  // namespace pcs
