#include "unitarizer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "eigen_bridge.hpp"

namespace unitarizer {

double abs(Complex z) { return std::hypot(z.re, z.im); }

// ComplexMatrix -------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "matrix dimension must be positive");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<Complex>>& rows) {
  ComplexMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const Complex z = rows[i][j];
      if (!std::isfinite(z.re) || !std::isfinite(z.im)) {
        throw Error(ErrorKind::ParseError, "non-finite entry at (" + std::to_string(i) + ", " +
                                               std::to_string(j) + ")");
      }
      m(i, j) = z;
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j).conj();
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](Complex z) { return std::isfinite(z.re) && std::isfinite(z.im); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (Complex& z : data_) z = s * z;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik.re == 0.0 && aik.im == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

// Trace and norms -------------------------------------------------------------

NormalizedTrace::NormalizedTrace(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "trace dimension must be positive");
}

Complex NormalizedTrace::operator()(const ComplexMatrix& x) const {
  if (x.dim() != n_) throw Error(ErrorKind::DimensionMismatch, "trace dimension");
  const Complex t = x.trace();
  return {t.re / static_cast<double>(n_), t.im / static_cast<double>(n_)};
}

double NormalizedTrace::inner(const ComplexMatrix& a, const ComplexMatrix& b) const {
  if (a.dim() != n_ || b.dim() != n_) throw Error(ErrorKind::DimensionMismatch, "inner product");
  // Re Tr(a* b) = sum_ij Re(conj(a_ij) b_ij)
  double s = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += ea[k].re * eb[k].re + ea[k].im * eb[k].im;
  return s / static_cast<double>(n_);
}

double l2_norm(const ComplexMatrix& x, const NormalizedTrace& tau) {
  if (x.dim() != tau.dim()) throw Error(ErrorKind::DimensionMismatch, "l2_norm");
  double s = 0.0;
  for (const Complex& z : x.entries()) s += z.norm2();
  return std::sqrt(s / static_cast<double>(x.dim()));
}

double l2_norm(const ComplexMatrix& x) { return l2_norm(x, NormalizedTrace(x.dim())); }

std::vector<double> singular_values(const ComplexMatrix& x) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(x));
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end());
  if (!std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorKind::NonConvergence, "singular value decomposition produced non-finite values");
  }
  return out;
}

double operator_norm(const ComplexMatrix& x) { return singular_values(x).back(); }

ComplexMatrix inverse(const ComplexMatrix& x) {
  const Eigen::MatrixXcd m = detail::to_eigen(x);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(s.size() - 1) > tolerances::pd_floor_rel * s(0))) {
    throw Error(ErrorKind::SingularTransform, "matrix is numerically singular");
  }
  const Eigen::MatrixXcd inv =
      svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  return detail::from_eigen(inv);
}

// Hermitian and spectral calculus ---------------------------------------------

HermitianMatrix HermitianMatrix::from(const ComplexMatrix& a) {
  if (!a.all_finite()) throw Error(ErrorKind::NotHermitian, "non-finite entries");
  const std::size_t n = a.dim();
  double asym = 0.0;
  ComplexMatrix sym(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex aij = a(i, j);
      const Complex aji = a(j, i).conj();
      asym = std::max(asym, abs(aij - aji));
      sym(i, j) = 0.5 * (aij + aji);
    }
  }
  const double allowed = tolerances::hermitian_rel * l2_norm(a);
  if (asym > allowed) {
    throw Error(ErrorKind::NotHermitian,
                "asymmetry " + std::to_string(asym) + " exceeds " + std::to_string(allowed));
  }
  return HermitianMatrix(std::move(sym));
}

ComplexMatrix SpectralDecomposition::recompose(std::span<const double> values) const {
  const std::size_t n = eigenvectors.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex s;
      for (std::size_t k = 0; k < n; ++k) {
        s += values[k] * (eigenvectors(i, k) * eigenvectors(j, k).conj());
      }
      out(i, j) = s;
      out(j, i) = s.conj();
    }
    out(i, i).im = 0.0;
  }
  return out;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_hermitian(const HermitianMatrix& a,
                                                                bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      detail::to_eigen(a.matrix()), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergence, "Hermitian eigensolver did not converge");
  }
  return es;
}

}  // namespace

SpectralDecomposition spectral_decompose(const HermitianMatrix& a) {
  const auto es = solve_hermitian(a, true);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {std::vector<double>(ev.data(), ev.data() + ev.size()),
          detail::from_eigen(es.eigenvectors())};
}

std::vector<double> eigenvalues(const HermitianMatrix& a) {
  const auto es = solve_hermitian(a, false);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

PositiveDefiniteMatrix PositiveDefiniteMatrix::from(const HermitianMatrix& a) {
  auto s = std::make_shared<SpectralDecomposition>(spectral_decompose(a));
  const double lo = s->eigenvalues.front();
  const double hi = s->eigenvalues.back();
  if (!(hi > 0.0) || !(lo > tolerances::pd_floor_rel * hi)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "eigenvalue range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return {a, std::move(s)};
}

PositiveDefiniteMatrix PositiveDefiniteMatrix::from(const ComplexMatrix& a) {
  return from(HermitianMatrix::from(a));
}

PositiveDefiniteMatrix PositiveDefiniteMatrix::from_spectrum(std::vector<double> values,
                                                             ComplexMatrix vectors) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const bool sorted = std::is_sorted(order.begin(), order.end());

  auto s = std::make_shared<SpectralDecomposition>(
      SpectralDecomposition{std::move(values), std::move(vectors)});
  if (!sorted) {
    const std::size_t n = order.size();
    SpectralDecomposition p{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
      p.eigenvalues[k] = s->eigenvalues[order[k]];
      for (std::size_t i = 0; i < n; ++i) p.eigenvectors(i, k) = s->eigenvectors(i, order[k]);
    }
    *s = std::move(p);
  }
  const double lo = s->eigenvalues.front();
  const double hi = s->eigenvalues.back();
  if (!std::isfinite(hi) || !(hi > 0.0) || !(lo > tolerances::pd_floor_rel * hi)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "eigenvalue range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  HermitianMatrix h = HermitianMatrix::from(s->recompose(s->eigenvalues));
  return {std::move(h), std::move(s)};
}

namespace {

double apply_scalar(MatrixFunction f, double lambda) {
  switch (f.kind) {
    case MatrixFunction::Kind::log: return std::log(lambda);
    case MatrixFunction::Kind::sqrt: return std::sqrt(lambda);
    case MatrixFunction::Kind::inv_sqrt: return 1.0 / std::sqrt(lambda);
    case MatrixFunction::Kind::power: return std::pow(lambda, f.exponent);
  }
  return lambda;
}

std::vector<double> mapped_spectrum(const PositiveDefiniteMatrix& a, MatrixFunction f) {
  std::vector<double> out;
  out.reserve(a.dim());
  for (double lambda : a.spectrum().eigenvalues) out.push_back(apply_scalar(f, lambda));
  return out;
}

}  // namespace

HermitianMatrix matrix_function(const PositiveDefiniteMatrix& a, MatrixFunction f) {
  const auto values = mapped_spectrum(a, f);
  return HermitianMatrix::from(a.spectrum().recompose(values));
}

HermitianMatrix matrix_log(const PositiveDefiniteMatrix& a) {
  return matrix_function(a, MatrixFunction::log());
}

PositiveDefiniteMatrix matrix_sqrt(const PositiveDefiniteMatrix& a) {
  return PositiveDefiniteMatrix::from_spectrum(mapped_spectrum(a, MatrixFunction::sqrt()),
                                               a.spectrum().eigenvectors);
}

PositiveDefiniteMatrix matrix_inv_sqrt(const PositiveDefiniteMatrix& a) {
  return PositiveDefiniteMatrix::from_spectrum(mapped_spectrum(a, MatrixFunction::inv_sqrt()),
                                               a.spectrum().eigenvectors);
}

PositiveDefiniteMatrix matrix_power(const PositiveDefiniteMatrix& a, double t) {
  return PositiveDefiniteMatrix::from_spectrum(mapped_spectrum(a, MatrixFunction::power(t)),
                                               a.spectrum().eigenvectors);
}

PositiveDefiniteMatrix matrix_exp(const HermitianMatrix& a) {
  SpectralDecomposition s = spectral_decompose(a);
  for (double& v : s.eigenvalues) v = std::exp(v);
  return PositiveDefiniteMatrix::from_spectrum(std::move(s.eigenvalues), std::move(s.eigenvectors));
}

}  // namespace unitarizer
