#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace unitarizer::detail {

struct SimplexQpResult {
  std::vector<double> weights;
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes 1/2 w'Qw + c'w over the probability simplex {w >= 0, sum w = 1}
/// with a primal active-set method. Q is symmetric positive semidefinite,
/// given row-major (m x m). Singular reduced Hessians are handled by
/// following descent rays to the next blocking bound.
SimplexQpResult minimize_on_simplex(std::span<const double> q, std::span<const double> c);

}  // namespace unitarizer::detail
