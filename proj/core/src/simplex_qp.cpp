#include "unitarizer/detail/simplex_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "unitarizer/errors.hpp"

namespace unitarizer::detail {

namespace {

// Orthonormal basis (f x f-1) of the hyperplane orthogonal to the all-ones vector.
Eigen::MatrixXd sum_zero_basis(Eigen::Index f) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(f);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(f, f);
  return full.rightCols(f - 1);
}

}  // namespace

SimplexQpResult minimize_on_simplex(std::span<const double> q, std::span<const double> c) {
  const auto m = static_cast<Eigen::Index>(c.size());
  if (m == 0 || q.size() != c.size() * c.size()) {
    throw Error(ErrorKind::DimensionMismatch, "simplex QP shape");
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Q(
      q.data(), m, m);
  const Eigen::Map<const Eigen::VectorXd> cvec(c.data(), m);

  double scale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) scale = std::max({scale, std::abs(Q(i, i)), std::abs(cvec(i))});
  if (scale == 0.0) scale = 1.0;
  const double eig_tol = 1e-12 * scale;
  const double kkt_tol = 1e-14 * scale;

  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < m; ++i) {
    if (0.5 * Q(i, i) + cvec(i) < 0.5 * Q(start, start) + cvec(start)) start = i;
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  w(start) = 1.0;
  std::vector<bool> free(static_cast<std::size_t>(m), false);
  free[static_cast<std::size_t>(start)] = true;

  SimplexQpResult result;
  const std::size_t max_iterations = 50 * static_cast<std::size_t>(m) + 100;
  for (; result.iterations < max_iterations; ++result.iterations) {
    const Eigen::VectorXd g = Q * w + cvec;

    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m; ++i)
      if (free[static_cast<std::size_t>(i)]) idx.push_back(i);
    const auto f = static_cast<Eigen::Index>(idx.size());

    Eigen::VectorXd p_free = Eigen::VectorXd::Zero(f);
    bool ray = false;
    if (f > 1) {
      Eigen::MatrixXd qf(f, f);
      Eigen::VectorXd gf(f);
      for (Eigen::Index a = 0; a < f; ++a) {
        gf(a) = g(idx[a]);
        for (Eigen::Index b = 0; b < f; ++b) qf(a, b) = Q(idx[a], idx[b]);
      }
      const Eigen::MatrixXd z = sum_zero_basis(f);
      const Eigen::MatrixXd h = z.transpose() * qf * z;
      const Eigen::VectorXd r = z.transpose() * gf;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      const Eigen::VectorXd& lam = es.eigenvalues();
      const Eigen::MatrixXd& u = es.eigenvectors();
      const Eigen::VectorXd rho = u.transpose() * r;

      Eigen::VectorXd dz_null = Eigen::VectorXd::Zero(f - 1);
      Eigen::VectorXd dz_newton = Eigen::VectorXd::Zero(f - 1);
      for (Eigen::Index j = 0; j < f - 1; ++j) {
        if (lam(j) <= eig_tol) {
          dz_null -= rho(j) * u.col(j);
        } else {
          dz_newton -= (rho(j) / lam(j)) * u.col(j);
        }
      }
      // Zero curvature with a nonzero slope: the objective decreases linearly
      // along this direction until a weight hits zero.
      if (dz_null.norm() > kkt_tol) {
        ray = true;
        p_free = z * dz_null;
      } else {
        p_free = z * dz_newton;
      }
    }

    if (!ray && p_free.lpNorm<Eigen::Infinity>() <= 1e-14) {
      double nu = 0.0;
      for (Eigen::Index a = 0; a < f; ++a) nu += g(idx[a]);
      nu /= static_cast<double>(f);
      Eigen::Index entering = -1;
      double most_negative = -kkt_tol;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (free[static_cast<std::size_t>(i)]) continue;
        const double multiplier = g(i) - nu;
        if (multiplier < most_negative) {
          most_negative = multiplier;
          entering = i;
        }
      }
      if (entering < 0) break;
      free[static_cast<std::size_t>(entering)] = true;
      continue;
    }

    double alpha = ray ? std::numeric_limits<double>::infinity() : 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index a = 0; a < f; ++a) {
      if (p_free(a) < 0.0) {
        const double limit = -w(idx[a]) / p_free(a);
        if (limit < alpha) {
          alpha = limit;
          blocking = a;
        }
      }
    }
    if (!std::isfinite(alpha)) break;
    for (Eigen::Index a = 0; a < f; ++a) w(idx[a]) += alpha * p_free(a);
    if (blocking >= 0) {
      w(idx[blocking]) = 0.0;
      free[static_cast<std::size_t>(idx[blocking])] = false;
    }
    for (Eigen::Index i = 0; i < m; ++i) w(i) = std::max(0.0, w(i));
    w /= w.sum();
  }

  result.weights.assign(w.data(), w.data() + m);
  result.value = 0.5 * w.dot(Q * w) + cvec.dot(w);
  return result;
}

}  // namespace unitarizer::detail
