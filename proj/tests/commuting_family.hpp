#pragma once

// Random commuting families u diag(exp(l_i)) u* and their exact circumcenter
// from the Euclidean oracle applied to the log-eigenvalue vectors.

#include <cmath>
#include <random>
#include <vector>

#include "oracles/euclidean_meb.hpp"
#include "unitarizer/circumcenter.hpp"
#include "unitarizer/random.hpp"

namespace test {

struct CommutingFamily {
  std::vector<std::vector<double>> logs;  // one log-eigenvalue vector per point
  unitarizer::ComplexMatrix frame;       // common eigenvectors
  std::vector<unitarizer::SpdPoint> points;
};

inline unitarizer::SpdPoint in_frame(const unitarizer::ComplexMatrix& u, const std::vector<double>& logs) {
  std::vector<double> values;
  for (double l : logs) values.push_back(std::exp(l));
  return unitarizer::SpdPoint(unitarizer::PositiveDefiniteMatrix::from_spectrum(values, u));
}

/// m points of dimension n with log-eigenvalues uniform in [-half_log, half_log].
/// With rotate = false the points are diagonal.
inline CommutingFamily random_commuting_family(std::size_t n, std::size_t m, double half_log, bool rotate,
                                               unitarizer::Rng& rng) {
  CommutingFamily f{{}, rotate ? unitarizer::random_unitary(n, rng) : unitarizer::ComplexMatrix::identity(n), {}};
  std::uniform_real_distribution<double> u(-half_log, half_log);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> l(n);
    for (double& v : l) v = u(rng);
    f.points.push_back(in_frame(f.frame, l));
    f.logs.push_back(std::move(l));
  }
  return f;
}

/// The exact circumcenter and circumradius (normalized metric).
inline std::pair<unitarizer::SpdPoint, double> exact_circumcenter(const CommutingFamily& f) {
  const oracle::EuclideanBall ball = oracle::minimal_enclosing_ball(f.logs);
  std::vector<double> c(ball.center.begin(), ball.center.end());
  const double n = static_cast<double>(c.size());
  return {in_frame(f.frame, c), static_cast<double>(ball.radius) / std::sqrt(n)};
}

}  // namespace test
