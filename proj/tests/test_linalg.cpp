#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "unitarizer/random.hpp"

using namespace unitarizer;
using test::diag;
using test::gap;
using test::real_rows;

TEST_CASE("complex matrix construction") {
  CHECK_THROWS_KIND(ComplexMatrix(0), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(ComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(ComplexMatrix::from_rows({{1.0, 2.0}}), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(ComplexMatrix::from_rows({{Complex(NAN, 0.0)}}), ErrorKind::ParseError);
  CHECK_THROWS_KIND(ComplexMatrix::from_rows({{Complex(0.0, INFINITY)}}), ErrorKind::ParseError);

  const ComplexMatrix a = ComplexMatrix::from_rows({{Complex(1, 2), Complex(3, -1)}, {Complex(0, 1), Complex(2)}});
  CHECK(a.adjoint()(0, 1) == Complex(0, -1));
  CHECK(a.adjoint()(1, 0) == Complex(3, 1));
  CHECK(a.trace() == Complex(3, 2));
  CHECK(a.max_abs() == doctest::Approx(std::sqrt(10.0)));
  CHECK_THROWS_KIND(a * ComplexMatrix::identity(3), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(a + ComplexMatrix::identity(3), ErrorKind::DimensionMismatch);
}

TEST_CASE("normalized trace") {
  for (std::size_t n = 1; n <= 6; ++n) CHECK(NormalizedTrace(n)(ComplexMatrix::identity(n)) == Complex(1.0));
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const ComplexMatrix x = random_gaussian(n, rng);
    const ComplexMatrix y = random_gaussian(n, rng);
    const NormalizedTrace tau(n);
    const Complex xy = tau(x * y);
    const Complex yx = tau(y * x);
    CHECK(abs(xy - yx) <= 1e-13 * (1.0 + abs(xy)));
    CHECK(tau.inner(x, x) >= 0.0);
  }
  CHECK(NormalizedTrace(3).inner(ComplexMatrix(3), ComplexMatrix(3)) == 0.0);
}

TEST_CASE("l2 norm examples") {
  CHECK(l2_norm(ComplexMatrix(3)) == 0.0);
  for (std::size_t n = 1; n <= 5; ++n) CHECK(l2_norm(ComplexMatrix::identity(n)) == doctest::Approx(1.0));
  CHECK(l2_norm(diag({2.0, -2.0})) == doctest::Approx(2.0));
  CHECK_THROWS_KIND(l2_norm(ComplexMatrix(2), NormalizedTrace(3)), ErrorKind::DimensionMismatch);
}

TEST_CASE("operator norm examples") {
  CHECK(operator_norm(ComplexMatrix::identity(4)) == doctest::Approx(1.0));
  CHECK(operator_norm(diag({3.0, 1.0})) == doctest::Approx(3.0));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(operator_norm(real_rows({{1, 1}, {0, -1}})) == doctest::Approx(phi).epsilon(1e-14));
}

TEST_CASE("norm inequality l2 <= op <= sqrt(n) l2") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const ComplexMatrix x = random_gaussian(n, rng);
    const double l2 = l2_norm(x);
    const double op = operator_norm(x);
    CHECK(l2 <= op * (1 + 1e-14));
    CHECK(op <= std::sqrt(static_cast<double>(n)) * l2 * (1 + 1e-14));
  }
}

TEST_CASE("inverse and singular values") {
  const ComplexMatrix a = real_rows({{1, 1}, {0, -1}});
  CHECK(gap(inverse(a) * a, ComplexMatrix::identity(2)) < 1e-14);
  const auto s = singular_values(diag({3.0, 1.0, 2.0}));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(3.0));
  CHECK_THROWS_KIND(inverse(diag({1.0, 0.0})), ErrorKind::SingularTransform);
}

TEST_CASE("hermitian symmetrization") {
  ComplexMatrix a = real_rows({{2, 1}, {1, 2}});
  a(0, 1).re += 1e-13;
  const HermitianMatrix h = HermitianMatrix::from(a);
  CHECK(h.matrix()(0, 1) == h.matrix()(1, 0).conj());
  CHECK_THROWS_KIND(HermitianMatrix::from(real_rows({{1, 2}, {0, 1}})), ErrorKind::NotHermitian);
  ComplexMatrix complex_diag = ComplexMatrix::identity(2);
  complex_diag(0, 0).im = 0.5;
  CHECK_THROWS_KIND(HermitianMatrix::from(complex_diag), ErrorKind::NotHermitian);
}

TEST_CASE("spectral decomposition examples") {
  SUBCASE("diag(3, 1)") {
    const auto sd = spectral_decompose(HermitianMatrix::from(diag({3.0, 1.0})));
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(sd.eigenvalues[1] == doctest::Approx(3.0));
    // eigenvectors are the swapped standard basis up to phase
    CHECK(abs(sd.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(abs(sd.eigenvectors(0, 1)) == doctest::Approx(1.0));
    CHECK(abs(sd.eigenvectors(0, 0)) < 1e-15);
  }
  SUBCASE("identity") {
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto sd = spectral_decompose(HermitianMatrix::from(ComplexMatrix::identity(n)));
      for (double l : sd.eigenvalues) CHECK(l == doctest::Approx(1.0));
      CHECK(gap(sd.recompose(sd.eigenvalues), ComplexMatrix::identity(n)) < 1e-14);
    }
  }
  SUBCASE("[[2,1],[1,2]]") {
    const auto sd = spectral_decompose(HermitianMatrix::from(real_rows({{2, 1}, {1, 2}})));
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(sd.eigenvalues[1] == doctest::Approx(3.0));
    const double r = 1.0 / std::sqrt(2.0);
    // |<v_1, (1,-1)/sqrt2>| = 1 and |<v_2, (1,1)/sqrt2>| = 1
    const Complex p1 = r * sd.eigenvectors(0, 0).conj() - r * sd.eigenvectors(1, 0).conj();
    const Complex p2 = r * sd.eigenvectors(0, 1).conj() + r * sd.eigenvectors(1, 1).conj();
    CHECK(abs(p1) == doctest::Approx(1.0));
    CHECK(abs(p2) == doctest::Approx(1.0));
  }
}

TEST_CASE("spectral reconstruction and unitarity on random hermitian input") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const HermitianMatrix a = random_hermitian(n, rng);
    const auto sd = spectral_decompose(a);
    CHECK(std::is_sorted(sd.eigenvalues.begin(), sd.eigenvalues.end()));
    CHECK(gap(sd.recompose(sd.eigenvalues), a.matrix()) <= tolerances::spectral * l2_norm(a.matrix()));
    CHECK(gap(sd.eigenvectors.adjoint() * sd.eigenvectors, ComplexMatrix::identity(n)) <= tolerances::spectral);
    const auto values = eigenvalues(a);
    for (std::size_t k = 0; k < n; ++k) CHECK(values[k] == doctest::Approx(sd.eigenvalues[k]).epsilon(1e-12));
  }
}

TEST_CASE("matrix function examples") {
  CHECK(l2_norm(matrix_log(PositiveDefiniteMatrix::from(ComplexMatrix::identity(3))).matrix()) < 1e-15);
  CHECK(gap(matrix_sqrt(PositiveDefiniteMatrix::from(diag({4.0, 9.0}))).matrix(), diag({2.0, 3.0})) < 1e-14);
  const double e2 = std::exp(2.0);
  CHECK(gap(matrix_log(PositiveDefiniteMatrix::from(diag({e2, 1.0 / e2}))).matrix(), diag({2.0, -2.0})) < 1e-14);
  CHECK(gap(matrix_inv_sqrt(PositiveDefiniteMatrix::from(diag({4.0, 0.25}))).matrix(), diag({0.5, 2.0})) < 1e-14);
  CHECK(gap(matrix_power(PositiveDefiniteMatrix::from(diag({4.0, 8.0})), 1.0 / 3.0).matrix(),
            diag({std::cbrt(4.0), 2.0})) < 1e-14);
  CHECK(gap(matrix_exp(HermitianMatrix::from(diag({2.0, -2.0}))).matrix(), diag({e2, 1.0 / e2})) < 1e-13);
}

TEST_CASE("positive definite floor") {
  CHECK_THROWS_KIND(PositiveDefiniteMatrix::from(diag({1.0, 0.0})), ErrorKind::NotPositiveDefinite);
  CHECK_THROWS_KIND(PositiveDefiniteMatrix::from(diag({1.0, -1.0})), ErrorKind::NotPositiveDefinite);
  CHECK_THROWS_KIND(PositiveDefiniteMatrix::from(diag({1.0, 1e-13})), ErrorKind::NotPositiveDefinite);
  const auto ok = PositiveDefiniteMatrix::from(diag({1.0, 1e-11}));
  CHECK(ok.eig_min() == doctest::Approx(1e-11));
  CHECK(ok.eig_max() == doctest::Approx(1.0));
}

TEST_CASE("functional calculus consistency up to condition 1e6") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const double cond = std::pow(10.0, 6.0 * (trial % 7) / 6.0);
    const PositiveDefiniteMatrix a = random_spd(n, cond, rng).value();
    const double scale = l2_norm(a.matrix());
    const auto root = matrix_sqrt(a);
    CHECK(gap(root.matrix() * root.matrix(), a.matrix()) <= tolerances::func * scale);
    CHECK(gap(matrix_exp(matrix_log(a)).matrix(), a.matrix()) <= tolerances::func * scale);
    CHECK(gap(matrix_power(a, 1.0).matrix(), a.matrix()) <= tolerances::func * scale);
    CHECK(gap(matrix_inv_sqrt(a).matrix() * root.matrix(), ComplexMatrix::identity(n)) <= tolerances::func);
  }
}

TEST_CASE("random generators") {
  Rng rng(8);
  for (std::size_t n = 1; n <= 6; ++n) {
    const ComplexMatrix u = random_unitary(n, rng);
    CHECK(gap(u.adjoint() * u, ComplexMatrix::identity(n)) < 1e-13);
    const ComplexMatrix g = random_invertible(n, 10.0, rng);
    const auto s = singular_values(g);
    CHECK(s.front() >= 1.0 / std::sqrt(10.0) * (1 - 1e-12));
    CHECK(s.back() <= std::sqrt(10.0) * (1 + 1e-12));
    if (n >= 2) CHECK(s.back() / s.front() == doctest::Approx(10.0).epsilon(1e-10));
    const ComplexMatrix w = random_invertible(n, 1.0, rng);
    CHECK(gap(w.adjoint() * w, ComplexMatrix::identity(n)) < 1e-13);
  }
  Rng a(99), b(99);
  CHECK(random_gaussian(4, a) == random_gaussian(4, b));
  CHECK_THROWS_KIND(random_invertible(2, 0.5, rng), ErrorKind::ParameterOutOfRange);
}
