#include "unitarizer/spd_geometry.hpp"

#include <cmath>
#include <string>

namespace unitarizer {

namespace {

void require_same_dim(const SpdPoint& a, const SpdPoint& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "points of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

}  // namespace

GLcBall GLcBall::make(double c, std::size_t dim) {
  if (!(c > 1.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::ParameterOutOfRange, "GL_c requires c > 1, got " + std::to_string(c));
  }
  if (dim == 0) throw Error(ErrorKind::DimensionMismatch, "GL_c dimension must be positive");
  return {c, dim};
}

TangentFrame::TangentFrame(const SpdPoint& base)
    : base_(base),
      sqrt_(matrix_sqrt(base.value()).matrix()),
      inv_sqrt_(matrix_inv_sqrt(base.value()).matrix()) {}

HermitianMatrix TangentFrame::whiten(const SpdPoint& p) const {
  if (p.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "whiten");
  return HermitianMatrix::from(inv_sqrt_ * p.matrix() * inv_sqrt_);
}

std::vector<double> TangentFrame::relative_spectrum(const SpdPoint& p) const {
  return eigenvalues(whiten(p));
}

double log_spectrum_norm(const std::vector<double>& relative_eigenvalues) {
  double s = 0.0;
  for (double lambda : relative_eigenvalues) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "relative spectrum not positive");
    const double l = std::log(lambda);
    s += l * l;
  }
  return std::sqrt(s / static_cast<double>(relative_eigenvalues.size()));
}

double TangentFrame::distance_to(const SpdPoint& p) const {
  return log_spectrum_norm(relative_spectrum(p));
}

HermitianMatrix TangentFrame::log(const SpdPoint& p) const {
  return matrix_log(PositiveDefiniteMatrix::from(whiten(p)));
}

SpdPoint TangentFrame::exp(const HermitianMatrix& v) const {
  if (v.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "exp");
  const PositiveDefiniteMatrix e = matrix_exp(v);
  return SpdPoint::from(sqrt_ * e.matrix() * sqrt_);
}

double TangentFrame::inner(const HermitianMatrix& u, const HermitianMatrix& v) const {
  return NormalizedTrace(dim()).inner(u.matrix(), v.matrix());
}

double distance(const SpdPoint& a, const SpdPoint& b) {
  require_same_dim(a, b);
  return TangentFrame(a).distance_to(b);
}

SpdPoint geodesic(const SpdPoint& a, const SpdPoint& b, double t) {
  require_same_dim(a, b);
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "geodesic parameter " + std::to_string(t));
  }
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const TangentFrame frame(a);
  const PositiveDefiniteMatrix w = PositiveDefiniteMatrix::from(frame.whiten(b));
  const ComplexMatrix root = matrix_sqrt(a.value()).matrix();
  return SpdPoint::from(root * matrix_power(w, t).matrix() * root);
}

SpdPoint midpoint(const SpdPoint& a, const SpdPoint& b) { return geodesic(a, b, 0.5); }

SpdPoint congruence(const ComplexMatrix& g, const SpdPoint& a) {
  if (g.dim() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "congruence");
  const auto s = singular_values(g);
  if (!(s.front() > tolerances::pd_floor_rel * s.back())) {
    throw Error(ErrorKind::SingularTransform, "congruence by a numerically singular matrix");
  }
  return SpdPoint::from(g.adjoint() * a.matrix() * g);
}

bool in_ball(const SpdPoint& a, const GLcBall& ball, double slack) {
  if (a.dim() != ball.dim) return false;
  const double widened = ball.c * (1.0 + slack);
  return a.value().eig_min() >= 1.0 / widened && a.value().eig_max() <= widened;
}

}  // namespace unitarizer
