#include "unitarizer/random.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "eigen_bridge.hpp"

namespace unitarizer {

ComplexMatrix random_gaussian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(n);
  for (Complex& z : m.entries()) {
    z.re = normal(rng);
    z.im = normal(rng);
  }
  return m;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  const Eigen::MatrixXcd g = detail::to_eigen(random_gaussian(n, rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const std::complex<double> d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return detail::from_eigen(q);
}

HermitianMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_gaussian(n, rng);
  ComplexMatrix h = g + g.adjoint();
  h *= 0.5;
  return HermitianMatrix::from(h);
}

ComplexMatrix rescale_singular_values(const ComplexMatrix& g, double cond) {
  if (!(cond >= 1.0) || !std::isfinite(cond)) {
    throw Error(ErrorKind::ParameterOutOfRange, "condition bound must be >= 1");
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(g), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  const auto n = s.size();
  // singular values are sorted descending
  const double top = std::log(s(0));
  const double bottom = std::log(s(n - 1));
  const double half = 0.5 * std::log(cond);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (n == 1 || top == bottom) {
      s(i) = 1.0;
    } else {
      const double u = (std::log(s(i)) - bottom) / (top - bottom);  // in [0, 1]
      s(i) = std::exp(-half + 2.0 * half * u);
    }
  }
  const Eigen::MatrixXcd out = svd.matrixU() * s.cast<std::complex<double>>().asDiagonal() *
                               svd.matrixV().adjoint();
  return detail::from_eigen(out);
}

ComplexMatrix random_invertible(std::size_t n, double cond, Rng& rng) {
  return rescale_singular_values(random_gaussian(n, rng), cond);
}

SpdPoint random_spd(std::size_t n, double cond, Rng& rng) {
  if (!(cond >= 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "condition bound must be >= 1");
  const ComplexMatrix u = random_unitary(n, rng);
  const double half = 0.5 * std::log(cond);
  std::uniform_real_distribution<double> uniform(-half, half);
  std::vector<double> lambda(n);
  for (double& l : lambda) l = std::exp(uniform(rng));
  return SpdPoint(PositiveDefiniteMatrix::from_spectrum(std::move(lambda), u));
}

}  // namespace unitarizer
