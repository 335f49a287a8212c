#pragma once

// Dense complex matrices, the normalized trace, and spectral calculus for
// Hermitian / positive definite matrices.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "unitarizer/errors.hpp"

namespace unitarizer {

namespace tolerances {
/// Allowed asymmetry of a "Hermitian" input, relative to its L2 norm.
inline constexpr double hermitian_rel = 1e-10;
/// Eigenvalues at or below pd_floor_rel * eig_max are treated as zero.
inline constexpr double pd_floor_rel = 1e-12;
inline constexpr double spectral = 1e-10;
inline constexpr double func = 1e-8;
inline constexpr double geo = 1e-7;
inline constexpr double cert = 1e-9;
inline constexpr double dedup = 1e-9;
inline constexpr double rep = 1e-9;
}  // namespace tolerances

struct Complex {
  double re = 0.0;
  double im = 0.0;

  constexpr Complex() = default;
  constexpr Complex(double r, double i = 0.0) : re(r), im(i) {}

  constexpr Complex conj() const { return {re, -im}; }
  constexpr double norm2() const { return re * re + im * im; }

  constexpr Complex& operator+=(Complex o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  constexpr Complex& operator-=(Complex o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend constexpr Complex operator+(Complex a, Complex b) { return {a.re + b.re, a.im + b.im}; }
  friend constexpr Complex operator-(Complex a, Complex b) { return {a.re - b.re, a.im - b.im}; }
  friend constexpr Complex operator-(Complex a) { return {-a.re, -a.im}; }
  friend constexpr Complex operator*(Complex a, Complex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend constexpr Complex operator*(double s, Complex a) { return {s * a.re, s * a.im}; }
  friend constexpr bool operator==(Complex a, Complex b) = default;
};

double abs(Complex z);

/// Square n x n complex matrix stored row-major as (re, im) pairs.
class ComplexMatrix {
 public:
  /// Zero matrix; n must be positive.
  explicit ComplexMatrix(std::size_t n);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  /// Rejects ragged or non-square input and non-finite scalars.
  static ComplexMatrix from_rows(const std::vector<std::vector<Complex>>& rows);

  std::size_t dim() const noexcept { return n_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest entry modulus.
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(double s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(double s, ComplexMatrix a);

/// tau(x) = Tr(x) / n, so that tau(I) = 1 in every dimension.
class NormalizedTrace {
 public:
  explicit NormalizedTrace(std::size_t n);

  std::size_t dim() const noexcept { return n_; }
  Complex operator()(const ComplexMatrix& x) const;
  /// Re tau(a* b), the real inner product inducing the L2 norm.
  double inner(const ComplexMatrix& a, const ComplexMatrix& b) const;

 private:
  std::size_t n_;
};

/// ||x||_2 = tau(x* x)^{1/2}.
double l2_norm(const ComplexMatrix& x, const NormalizedTrace& tau);
double l2_norm(const ComplexMatrix& x);

/// Largest singular value.
double operator_norm(const ComplexMatrix& x);
/// Singular values in ascending order.
std::vector<double> singular_values(const ComplexMatrix& x);
/// Throws SingularTransform when x is numerically singular.
ComplexMatrix inverse(const ComplexMatrix& x);

class HermitianMatrix {
 public:
  /// Symmetrizes to (a + a*)/2; throws NotHermitian when the asymmetry
  /// exceeds tolerances::hermitian_rel * ||a||_2 (or a is non-finite).
  static HermitianMatrix from(const ComplexMatrix& a);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, columns match eigenvalues

  /// V diag(values) V*.
  ComplexMatrix recompose(std::span<const double> values) const;
};

SpectralDecomposition spectral_decompose(const HermitianMatrix& a);
/// Eigenvalues only; cheaper than the full decomposition.
std::vector<double> eigenvalues(const HermitianMatrix& a);

/// Positive definite matrix with its spectral decomposition cached.
class PositiveDefiniteMatrix {
 public:
  /// Throws NotPositiveDefinite when eig_min <= pd_floor_rel * eig_max.
  static PositiveDefiniteMatrix from(const HermitianMatrix& a);
  static PositiveDefiniteMatrix from(const ComplexMatrix& a);
  /// V diag(values) V* without a second eigensolve.
  static PositiveDefiniteMatrix from_spectrum(std::vector<double> values, ComplexMatrix vectors);

  const ComplexMatrix& matrix() const noexcept { return h_.matrix(); }
  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const SpectralDecomposition& spectrum() const noexcept { return *spectrum_; }
  std::size_t dim() const noexcept { return h_.dim(); }
  double eig_min() const noexcept { return spectrum_->eigenvalues.front(); }
  double eig_max() const noexcept { return spectrum_->eigenvalues.back(); }

 private:
  PositiveDefiniteMatrix(HermitianMatrix h, std::shared_ptr<const SpectralDecomposition> s)
      : h_(std::move(h)), spectrum_(std::move(s)) {}

  HermitianMatrix h_;
  std::shared_ptr<const SpectralDecomposition> spectrum_;
};

struct MatrixFunction {
  enum class Kind { log, sqrt, inv_sqrt, power };
  Kind kind = Kind::log;
  double exponent = 1.0;

  static constexpr MatrixFunction log() { return {Kind::log, 0.0}; }
  static constexpr MatrixFunction sqrt() { return {Kind::sqrt, 0.5}; }
  static constexpr MatrixFunction inv_sqrt() { return {Kind::inv_sqrt, -0.5}; }
  static constexpr MatrixFunction power(double t) { return {Kind::power, t}; }
};

/// V f(Lambda) V* for a positive definite argument.
HermitianMatrix matrix_function(const PositiveDefiniteMatrix& a, MatrixFunction f);

HermitianMatrix matrix_log(const PositiveDefiniteMatrix& a);
PositiveDefiniteMatrix matrix_sqrt(const PositiveDefiniteMatrix& a);
PositiveDefiniteMatrix matrix_inv_sqrt(const PositiveDefiniteMatrix& a);
PositiveDefiniteMatrix matrix_power(const PositiveDefiniteMatrix& a, double t);
/// Inverse of matrix_log.
PositiveDefiniteMatrix matrix_exp(const HermitianMatrix& a);

}  // namespace unitarizer
