#pragma once

// Certified circumcenters (centers of minimal enclosing balls) of finite
// point sets in the positive definite cone.
//
// Certificates: for a candidate x with r(x) = max_i d(x, p_i) and any lower
// bound L <= r(B), the true circumcenter s satisfies
//   d(x, s)^2 <= 2 (r(x)^2 - L^2),
// a consequence of the semi-parallelogram inequality. Two lower bounds are
// available: half the diameter of B, and the dual bound obtained at x from
// the 2-strong geodesic convexity of d(., p)^2,
//   r(B)^2 >= sum_i w_i d(x, p_i)^2 - |sum_i w_i log_x(p_i)|^2   (w in simplex),
// maximized over w by a small simplex QP. The dual bound is tight at the
// true circumcenter.

#include <cstddef>
#include <functional>
#include <vector>

#include "unitarizer/spd_geometry.hpp"

namespace unitarizer {

class PointSet {
 public:
  /// Throws EmptySet, DimensionMismatch, or ParameterOutOfRange if some
  /// point lies outside the ball (slack 1e-9).
  static PointSet make(std::vector<SpdPoint> points, GLcBall ball);
  /// Wraps the points in the smallest GL_c ball containing them.
  static PointSet enclosing(std::vector<SpdPoint> points);

  const std::vector<SpdPoint>& points() const noexcept { return points_; }
  const SpdPoint& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return ball_.dim; }
  const GLcBall& ball() const noexcept { return ball_; }
  /// Largest pairwise distance (computed once at construction).
  double diameter() const noexcept { return diameter_; }

 private:
  PointSet(std::vector<SpdPoint> points, GLcBall ball, double diameter)
      : points_(std::move(points)), ball_(ball), diameter_(diameter) {}

  std::vector<SpdPoint> points_;
  GLcBall ball_;
  double diameter_;
};

struct RadiusAt {
  double radius;
  std::size_t farthest_index;
};

/// max_i d(theta, p_i) with the smallest index among (numerical) ties.
RadiusAt radius_at(const SpdPoint& theta, const PointSet& set);

/// diameter / 2.
double radius_lower_bound(const PointSet& set);

struct Certificate {
  double error_bound;   // sqrt(2 max(0, radius_gap))
  double radius_gap;    // radius_at^2 - lower_bound^2
  double radius_at;
  double lower_bound;
};

Certificate certify(const SpdPoint& candidate, const PointSet& set);

enum class CircumcenterScheme {
  /// Geodesic farthest-point descent x <- gamma(x, farthest, 1/(k+2)) only.
  farthest_point,
  /// Farthest-point warm start followed by tangent-space enclosing-ball
  /// steps with an adaptive curvature bound.
  refined,
};

struct TraceRow {
  std::size_t iteration;
  double radius_at_iterate;
  double error_bound;
};

struct SolveOptions {
  double epsilon = 1e-7;
  std::size_t max_iter = 100000;
  std::size_t warm_start_iterations = 8;
  CircumcenterScheme scheme = CircumcenterScheme::refined;
  bool record_trace = false;
};

struct CircumcenterResult {
  SpdPoint center;
  double radius_at_center;
  double radius_lower_bound;
  double center_error_bound;
  std::size_t iterations;
  bool converged;
  std::vector<TraceRow> trace;
};

/// Throws NumericalEscape if the center leaves GL_c of the set (slack 1e-6).
CircumcenterResult solve_circumcenter(const PointSet& set, const SolveOptions& options = {});
CircumcenterResult solve_circumcenter(const PointSet& set, double epsilon, std::size_t max_iter);

}  // namespace unitarizer
