#pragma once

// Affine-invariant (CAT(0)) geometry on positive definite matrices:
//   d(a, b) = || log(a^{-1/2} b a^{-1/2}) ||_2
// with the normalized trace norm.

#include <cstddef>
#include <vector>

#include "unitarizer/linalg.hpp"

namespace unitarizer {

class SpdPoint {
 public:
  explicit SpdPoint(PositiveDefiniteMatrix value) : value_(std::move(value)) {}
  static SpdPoint from(const ComplexMatrix& m) { return SpdPoint(PositiveDefiniteMatrix::from(m)); }
  static SpdPoint identity(std::size_t n) { return from(ComplexMatrix::identity(n)); }

  const PositiveDefiniteMatrix& value() const noexcept { return value_; }
  const ComplexMatrix& matrix() const noexcept { return value_.matrix(); }
  std::size_t dim() const noexcept { return value_.dim(); }
  NormalizedTrace trace() const { return NormalizedTrace(dim()); }

 private:
  PositiveDefiniteMatrix value_;
};

/// GL_c = { x : 1/c <= x <= c }.
struct GLcBall {
  double c;
  std::size_t dim;

  /// Throws ParameterOutOfRange unless c > 1.
  static GLcBall make(double c, std::size_t dim);
};

/// Tangent space at a base point x in whitened coordinates: a tangent vector
/// is the Hermitian matrix v with exp_x(v) = x^{1/2} exp(v) x^{1/2}, and its
/// length is ||v||_2, so that |log_x(p)| = d(x, p).
class TangentFrame {
 public:
  explicit TangentFrame(const SpdPoint& base);

  const SpdPoint& base() const noexcept { return base_; }
  std::size_t dim() const noexcept { return base_.dim(); }

  /// x^{-1/2} p x^{-1/2}
  HermitianMatrix whiten(const SpdPoint& p) const;
  /// Eigenvalues of the whitened point, ascending.
  std::vector<double> relative_spectrum(const SpdPoint& p) const;
  double distance_to(const SpdPoint& p) const;
  HermitianMatrix log(const SpdPoint& p) const;
  SpdPoint exp(const HermitianMatrix& v) const;
  double inner(const HermitianMatrix& u, const HermitianMatrix& v) const;

 private:
  SpdPoint base_;
  ComplexMatrix sqrt_;
  ComplexMatrix inv_sqrt_;
};

/// Length of a whitened log spectrum: sqrt(mean(log(lambda)^2)).
double log_spectrum_norm(const std::vector<double>& relative_eigenvalues);

double distance(const SpdPoint& a, const SpdPoint& b);

/// gamma(t) = a^{1/2} (a^{-1/2} b a^{-1/2})^t a^{1/2}, t in [0, 1].
SpdPoint geodesic(const SpdPoint& a, const SpdPoint& b, double t);
SpdPoint midpoint(const SpdPoint& a, const SpdPoint& b);

/// a -> g* a g. Throws SingularTransform if g is numerically singular.
SpdPoint congruence(const ComplexMatrix& g, const SpdPoint& a);

/// eig_min >= 1/(c (1 + slack)) and eig_max <= c (1 + slack).
bool in_ball(const SpdPoint& a, const GLcBall& ball, double slack);

}  // namespace unitarizer
