#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "pcs/liouvillian.hpp"
#include "pcs/states.hpp"

using namespace pcs;

namespace {

TwoModeDensityMatrix random_hermitian(const Cutoff& c, std::mt19937& rng, int below = -1) {
  std::normal_distribution<double> g;
  TwoModeDensityMatrix a(c);
  const int top = below < 0 ? c.n_max() : below;
  for (int n1 = 0; n1 <= top; ++n1)
    for (int n2 = 0; n2 <= top; ++n2)
      for (int m1 = 0; m1 <= top; ++m1)
        for (int m2 = 0; m2 <= top; ++m2) a(n1, n2, m1, m2) = Complex(g(rng), g(rng));
  return a + a.adjoint();
}

double max_abs_diff(const TwoModeDensityMatrix& a, const TwoModeDensityMatrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace

TEST_CASE("entries match the dense operator-algebra generator") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> lam(0.0, 500.0);
  std::uniform_real_distribution<double> g2(1e-3, 500.0);
  for (int n_max = 1; n_max <= 5; ++n_max) {
    for (int draw = 0; draw < 4; ++draw) {
      const OscillatorParams p{lam(rng), g2(rng)};
      const Cutoff c(n_max);
      const auto L = build(p, c);
      const auto D = oracle::dense_liouvillian(p.lambda, p.g2, n_max);
      REQUIRE(static_cast<std::size_t>(D.rows()) == c.flat_size());
      double worst = 0.0;
      for (Eigen::Index r = 0; r < D.rows(); ++r)
        for (Eigen::Index k = 0; k < D.cols(); ++k) worst = std::max(worst, std::abs(L.entry(r, k) - D(r, k)));
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("apply matches the dense generator on random Hermitian input") {
  std::mt19937 rng(5);
  for (int n_max = 1; n_max <= 5; ++n_max) {
    const OscillatorParams p{37.5, 12.25};
    const Cutoff c(n_max);
    const auto L = build(p, c);
    const Eigen::MatrixXcd D = oracle::dense_liouvillian(p.lambda, p.g2, n_max).cast<Complex>();
    for (int trial = 0; trial < 5; ++trial) {
      const auto rho = random_hermitian(c, rng);
      const Eigen::Map<const Eigen::VectorXcd> v(rho.data().data(), rho.data().size());
      const Eigen::VectorXcd expect = D * v;
      const auto got = apply(L, rho);
      double worst = 0.0;
      for (Eigen::Index k = 0; k < expect.size(); ++k) worst = std::max(worst, std::abs(got.data()[k] - expect[k]));
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("pump on the vacuum creates one pair coherence") {
  const Cutoff c(3);
  TwoModeDensityMatrix vac(c);
  vac(0, 0, 0, 0) = 1.0;
  const auto d = apply(build({2.5, 0.0}, c), vac);
  for (int n1 = 0; n1 <= 3; ++n1)
    for (int n2 = 0; n2 <= 3; ++n2)
      for (int m1 = 0; m1 <= 3; ++m1)
        for (int m2 = 0; m2 <= 3; ++m2) {
          Complex expect = 0.0;
          if ((n1 == 1 && n2 == 1 && m1 == 0 && m2 == 0) || (n1 == 0 && n2 == 0 && m1 == 1 && m2 == 1)) expect = 2.5;
          CHECK(d(n1, n2, m1, m2) == expect);
        }
}

TEST_CASE("loss rates out of |11><11|") {
  const Cutoff c(3);
  const double g2 = 7.0;
  TwoModeDensityMatrix rho(c);
  rho(1, 1, 1, 1) = 1.0;
  const auto d = apply(build({0.0, g2}, c), rho);
  CHECK(d(1, 1, 1, 1).real() == doctest::Approx(-2.0 * g2 - 2.0 - 2.0));
  CHECK(d(0, 0, 0, 0).real() == doctest::Approx(2.0 * g2));
  CHECK(d(0, 1, 0, 1).real() == doctest::Approx(2.0));
  CHECK(d(1, 0, 1, 0).real() == doctest::Approx(2.0));
  CHECK(std::abs(trace(d)) < 1e-14);
}

TEST_CASE("vacuum is dark without pump") {
  const Cutoff c(4);
  TwoModeDensityMatrix vac(c);
  vac(0, 0, 0, 0) = 1.0;
  const auto d = apply(build({0.0, 123.0}, c), vac);
  for (const auto& z : d.data()) CHECK(z == Complex(0.0));
}

TEST_CASE("trace, Hermiticity and linearity") {
  std::mt19937 rng(21);
  const Cutoff c(6);
  const auto L = build({15.0, 10.0}, c);
  for (int trial = 0; trial < 5; ++trial) {
    // Support below the top shell so no feed term is truncated.
    const auto rho = random_hermitian(c, rng, c.n_max() - 1);
    const auto d = apply(L, rho);
    double scale = 0.0;
    for (const auto& z : d.data()) scale = std::max(scale, std::abs(z));
    CHECK(std::abs(trace(d)) <= 1e-13 * scale);
    CHECK(hermiticity_defect(d) <= 1e-13 * scale);
  }

  TwoModeDensityMatrix a(c);
  std::normal_distribution<double> g;
  for (auto& z : a.data()) z = Complex(g(rng), g(rng));
  CHECK(max_abs_diff(apply(L, a.adjoint()), apply(L, a).adjoint()) < 1e-10);

  const auto r1 = random_hermitian(c, rng);
  const auto r2 = random_hermitian(c, rng);
  const Complex s1(0.3, -1.2), s2(2.0, 0.5);
  const auto lhs = apply(L, s1 * r1 + s2 * r2);
  const auto rhs = s1 * apply(L, r1) + s2 * apply(L, r2);
  double scale = 0.0;
  for (const auto& z : rhs.data()) scale = std::max(scale, std::abs(z));
  CHECK(max_abs_diff(lhs, rhs) <= 1e-13 * scale);
}

TEST_CASE("sparsity bound") {
  for (int n_max : {1, 5, 10, 20}) {
    const Cutoff c(n_max);
    const auto L = build({1.0, 1.0}, c);
    CHECK(L.nnz() <= 10 * c.flat_size());
  }
}

TEST_CASE("pair-difference sector agrees with the full operator") {
  const Cutoff c(5);
  const OscillatorParams p{4.0, 3.0};
  const auto full = build(p, c, Sector::full);
  const auto sector = build(p, c, Sector::pair_difference);
  CHECK(sector.size() < full.size());
  for (const auto& t : sector.triples()) CHECK(t.value == full.entry(t.row, t.col));

  const auto rho = pure_to_density(circle_state({1.1}, c));
  CHECK(max_abs_diff(apply(full, rho), apply(sector, rho)) < 1e-13);

  TwoModeDensityMatrix off(c);
  off(1, 0, 0, 0) = 1.0;
  CHECK_THROWS_AS(apply(sector, off), std::invalid_argument);
  CHECK_NOTHROW(apply(full, off));
}

TEST_CASE("pair-difference sector size at the default cutoff") {
  CHECK(build({1.0, 1.0}, Cutoff(20), Sector::pair_difference).size() == 6181);
}

TEST_CASE("parameter and cutoff errors") {
  CHECK_THROWS_AS(build({-1.0, 1.0}, Cutoff(2)), std::invalid_argument);
  CHECK_THROWS_AS(build({1.0, -1.0}, Cutoff(2)), std::invalid_argument);
  CHECK_THROWS_AS(OscillatorParams::from_ratio(1.5, 0.0), std::invalid_argument);
  CHECK(OscillatorParams::from_ratio(1.5, 300.0).lambda == doctest::Approx(450.0));
  const auto L = build({1.0, 1.0}, Cutoff(2));
  CHECK_THROWS_AS(apply(L, TwoModeDensityMatrix(Cutoff(3))), std::invalid_argument);
}

TEST_CASE("triple export") {
  const auto L = build({1.0, 2.0}, Cutoff(1));
  std::ostringstream os;
  write_triples(os, L);
  std::istringstream in(os.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::size_t r = 0, k = 0;
    double v = 0.0;
    fields >> r >> k >> v;
    CHECK(v == L.entry(r, k));
    ++rows;
  }
  CHECK(rows == L.nnz());
}
