#pragma once

// Randomized property checks of the geometry on positive definite matrices.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace unitarizer {

/// Each property passes on a sample when its normalized violation is <= the
/// tolerance:
///   semi_parallelogram  d(z,m)^2 - (d(z,x)^2 + d(z,y)^2)/2 + d(x,y)^2/4,
///                       m the midpoint of x and y, over max(1, d(z,x)^2 + d(z,y)^2)
///   congruence          |d(g*ag, g*bg) - d(a,b)| / max(1, d(a,b))
///   triangle            (d(a,c) - d(a,b) - d(b,c)) / max(1, d(a,c))
///   geodesic_speed      |d(gamma(s), gamma(t)) - |s - t| d(a,b)| / max(1, d(a,b))
struct PropertyTolerances {
  double semi_parallelogram = 1e-8;
  double congruence = 1e-8;
  double triangle = 1e-8;
  double geodesic_speed = 1e-7;

  static PropertyTolerances uniform(double tol) { return {tol, tol, tol, tol}; }
};

struct SelftestOptions {
  /// 0 cycles through dimensions 1..8.
  std::size_t dim = 0;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  /// Points have condition number log-uniform in [1, max_cond]; congruence
  /// transforms have condition number at most 10.
  double max_cond = 1e3;
  PropertyTolerances tolerances;
};

struct PropertyOutcome {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  double max_violation = 0.0;
};

/// One random triple per trial, every property evaluated on it.
std::vector<PropertyOutcome> run_geometry_selftest(const SelftestOptions& options);

}  // namespace unitarizer
