#pragma once

#include <Eigen/Dense>

#include "unitarizer/linalg.hpp"

namespace unitarizer::detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex z = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      out(i, j) = {z.re, z.im};
    }
  }
  return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = {m(i, j).real(), m(i, j).imag()};
    }
  }
  return out;
}

}  // namespace unitarizer::detail
