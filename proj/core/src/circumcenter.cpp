#include "unitarizer/circumcenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <complex>

#include <Eigen/Dense>

#include "unitarizer/detail/simplex_qp.hpp"

namespace unitarizer {

namespace {

constexpr double kMembershipSlack = 1e-9;
constexpr double kEscapeSlack = 1e-6;
constexpr double kTieRelative = 8.0 * std::numeric_limits<double>::epsilon();

std::size_t farthest_with_ties(const std::vector<double>& values) {
  const double top = *std::max_element(values.begin(), values.end());
  const double cut = top - kTieRelative * std::max(1.0, top);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= cut) return i;
  return 0;
}

void require_compatible(const SpdPoint& x, const PointSet& set) {
  if (x.dim() != set.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "candidate of dimension " + std::to_string(x.dim()) +
                                                  " for a set of dimension " + std::to_string(set.dim()));
  }
}

enum class Precision { standard, extended };

template <typename Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using LdMat = CMat<long double>;

template <typename Real>
CMat<Real> to_eigen_as(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  CMat<Real> out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex z = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      out(i, j) = {static_cast<Real>(z.re), static_cast<Real>(z.im)};
    }
  return out;
}

ComplexMatrix from_long(const LdMat& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto z = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out(i, j) = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
    }
  return out;
}

LdMat round_to_double(const LdMat& m) { return m.cast<std::complex<double>>().cast<std::complex<long double>>(); }

template <typename Real>
CMat<Real> spectral_map(const Eigen::SelfAdjointEigenSolver<CMat<Real>>& es, const RVec<Real>& values) {
  return es.eigenvectors() * values.template cast<std::complex<Real>>().asDiagonal() * es.eigenvectors().adjoint();
}

// Everything the solver needs at an iterate: whitened logs of every point,
// squared distances, and their Gram matrix. The iterate itself is held in long
// double; in standard precision it is kept representable in double. Squared
// distances are long double so that certificate gaps near the optimum are not
// swamped by roundoff when the state was evaluated in extended precision.
struct TangentState {
  LdMat base;
  LdMat root;  // base^{1/2}
  std::size_t n = 0;
  std::vector<ComplexMatrix> logs;
  std::vector<long double> sq;
  std::vector<double> gram;
  long double max_sq = 0.0L;
  std::size_t farthest = 0;
};

template <typename Real>
TangentState evaluate_as(const LdMat& x, const PointSet& set) {
  using Mat = CMat<Real>;
  using Solver = Eigen::SelfAdjointEigenSolver<Mat>;
  TangentState s;
  s.base = x;
  s.n = set.dim();
  const std::size_t m = set.size();
  const auto ni = static_cast<Eigen::Index>(s.n);

  const Solver base(x.template cast<std::complex<Real>>());
  if (base.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "eigensolver failed");
  RVec<Real> root = base.eigenvalues();
  RVec<Real> inv_root = root;
  for (Eigen::Index k = 0; k < ni; ++k) {
    if (!(root(k) > 0)) throw Error(ErrorKind::NotPositiveDefinite, "iterate not positive definite");
    root(k) = std::sqrt(root(k));
    inv_root(k) = Real(1) / root(k);
  }
  s.root = spectral_map<Real>(base, root).template cast<std::complex<long double>>();
  const Mat whitener = spectral_map<Real>(base, inv_root);

  s.logs.reserve(m);
  s.sq.reserve(m);
  for (const SpdPoint& p : set.points()) {
    Mat w = whitener * to_eigen_as<Real>(p.matrix()) * whitener;
    w = (w + w.adjoint()).eval() * Real(0.5);
    const Solver es(w);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "eigensolver failed");
    RVec<Real> l = es.eigenvalues();
    Real acc = 0;
    for (Eigen::Index k = 0; k < ni; ++k) {
      if (!(l(k) > 0)) throw Error(ErrorKind::NotPositiveDefinite, "relative spectrum not positive");
      l(k) = std::log(l(k));
      acc += l(k) * l(k);
    }
    s.sq.push_back(static_cast<long double>(acc) / static_cast<long double>(s.n));
    s.logs.push_back(from_long(spectral_map<Real>(es, l).template cast<std::complex<long double>>()));
  }
  const NormalizedTrace tau(s.n);
  s.gram.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    s.gram[i * m + i] = static_cast<double>(s.sq[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double g = tau.inner(s.logs[i], s.logs[j]);
      s.gram[i * m + j] = g;
      s.gram[j * m + i] = g;
    }
  }
  s.farthest = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (s.sq[i] > s.sq[s.farthest]) s.farthest = i;
  s.max_sq = s.sq[s.farthest];
  return s;
}

TangentState evaluate(const LdMat& x, const PointSet& set, Precision precision) {
  return precision == Precision::extended ? evaluate_as<long double>(x, set) : evaluate_as<double>(x, set);
}

// x^{1/2} exp(step) x^{1/2}, rounded to double in standard precision.
LdMat advance(const TangentState& s, const ComplexMatrix& step, Precision precision) {
  LdMat v = to_eigen_as<long double>(step);
  v = (v + v.adjoint()).eval() * 0.5L;
  const Eigen::SelfAdjointEigenSolver<LdMat> es(v);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "eigensolver failed");
  RVec<long double> e = es.eigenvalues();
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = std::exp(e(k));
  LdMat x = s.root * spectral_map<long double>(es, e) * s.root;
  x = (x + x.adjoint()).eval() * 0.5L;
  return precision == Precision::standard ? round_to_double(x) : x;
}

// d(x, y) evaluated in long double.
long double extended_distance(const LdMat& x, const LdMat& y) {
  const Eigen::SelfAdjointEigenSolver<LdMat> base(x);
  RVec<long double> inv_root = base.eigenvalues();
  for (Eigen::Index k = 0; k < inv_root.size(); ++k) inv_root(k) = 1.0L / std::sqrt(inv_root(k));
  const LdMat w = spectral_map<long double>(base, inv_root);
  LdMat z = w * y * w;
  z = (z + z.adjoint()).eval() * 0.5L;
  const RVec<long double> l = Eigen::SelfAdjointEigenSolver<LdMat>(z, Eigen::EigenvaluesOnly).eigenvalues();
  long double acc = 0.0L;
  for (Eigen::Index k = 0; k < l.size(); ++k) acc += std::log(l(k)) * std::log(l(k));
  return std::sqrt(acc / static_cast<long double>(l.size()));
}

struct DualSolution {
  std::vector<double> weights;
  double model_value;  // min over steps of the quadratic model of max_i d^2
};

// max_w  sum_i w_i sq_i - |sum_i w_i v_i|^2 / beta  over the simplex.
DualSolution solve_dual(const TangentState& s, double beta) {
  const std::size_t m = s.sq.size();
  std::vector<double> q(m * m);
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = 2.0 * s.gram[k] / beta;
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = -static_cast<double>(s.sq[i]);
  auto qp = detail::minimize_on_simplex(q, c);
  return {std::move(qp.weights), -qp.value};
}

ComplexMatrix combine(const TangentState& s, const std::vector<double>& w, double scale) {
  ComplexMatrix out(s.n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    ComplexMatrix term = s.logs[i];
    term *= w[i] * scale;
    out += term;
  }
  return out;
}

Certificate certificate_from(const TangentState& s, const std::vector<double>& w, double diameter) {
  const long double r2 = s.max_sq;
  const ComplexMatrix mean = combine(s, w, 1.0);
  const double mean_sq = NormalizedTrace(s.n).inner(mean, mean);
  // r^2 - (sum w sq - |mean|^2) written without cancellation.
  long double tangent_gap = mean_sq;
  for (std::size_t i = 0; i < w.size(); ++i) tangent_gap += static_cast<long double>(w[i]) * (r2 - s.sq[i]);
  const long double half = 0.5L * static_cast<long double>(diameter);
  const long double pairwise_gap = r2 - half * half;
  const long double gap = std::max(0.0L, std::min(tangent_gap, pairwise_gap));
  return {static_cast<double>(std::sqrt(2.0L * gap)), static_cast<double>(gap),
          static_cast<double>(std::sqrt(r2)), static_cast<double>(std::sqrt(std::max(0.0L, r2 - gap)))};
}

Certificate certify_state(const TangentState& s, double diameter, std::vector<double>* weights) {
  DualSolution dual = solve_dual(s, 1.0);
  Certificate cert = certificate_from(s, dual.weights, diameter);
  if (weights != nullptr) *weights = std::move(dual.weights);
  return cert;
}

}  // namespace

// PointSet ---------------------------------------------------------------------

namespace {

double compute_diameter(const std::vector<SpdPoint>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i + 1 == points.size()) break;
    const TangentFrame frame(points[i]);
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, frame.distance_to(points[j]));
  }
  return best;
}

}  // namespace

PointSet PointSet::make(std::vector<SpdPoint> points, GLcBall ball) {
  if (points.empty()) throw Error(ErrorKind::EmptySet, "point set is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != ball.dim) {
      throw Error(ErrorKind::DimensionMismatch, "point " + std::to_string(i) + " has dimension " +
                                                    std::to_string(points[i].dim()));
    }
    if (!in_ball(points[i], ball, kMembershipSlack)) {
      throw Error(ErrorKind::ParameterOutOfRange,
                  "point " + std::to_string(i) + " lies outside GL_c with c = " + std::to_string(ball.c));
    }
  }
  const double diameter = compute_diameter(points);
  return PointSet(std::move(points), ball, diameter);
}

PointSet PointSet::enclosing(std::vector<SpdPoint> points) {
  if (points.empty()) throw Error(ErrorKind::EmptySet, "point set is empty");
  double c = 1.0 + 1e-9;
  for (const SpdPoint& p : points) {
    c = std::max({c, p.value().eig_max(), 1.0 / p.value().eig_min()});
  }
  const std::size_t n = points.front().dim();
  return make(std::move(points), GLcBall::make(c, n));
}

// Operations -----------------------------------------------------------------

RadiusAt radius_at(const SpdPoint& theta, const PointSet& set) {
  require_compatible(theta, set);
  const TangentFrame frame(theta);
  std::vector<double> d;
  d.reserve(set.size());
  for (const SpdPoint& p : set.points()) d.push_back(frame.distance_to(p));
  const std::size_t k = farthest_with_ties(d);
  return {d[k], k};
}

double radius_lower_bound(const PointSet& set) { return 0.5 * set.diameter(); }

Certificate certify(const SpdPoint& candidate, const PointSet& set) {
  require_compatible(candidate, set);
  const TangentState s = evaluate(to_eigen_as<long double>(candidate.matrix()), set, Precision::extended);
  return certify_state(s, set.diameter(), nullptr);
}

CircumcenterResult solve_circumcenter(const PointSet& set, double epsilon, std::size_t max_iter) {
  SolveOptions options;
  options.epsilon = epsilon;
  options.max_iter = max_iter;
  return solve_circumcenter(set, options);
}

CircumcenterResult solve_circumcenter(const PointSet& set, const SolveOptions& options) {
  if (!(options.epsilon > 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "epsilon must be positive");
  }
  if (options.max_iter == 0) throw Error(ErrorKind::ParameterOutOfRange, "max_iter must be >= 1");
  const double eps = options.epsilon;

  if (set.size() == 1) {
    CircumcenterResult r{set[0], 0.0, 0.0, 0.0, 0, true, {}};
    if (options.record_trace) r.trace.push_back({0, 0.0, 0.0});
    return r;
  }

  std::vector<TraceRow> trace;
  std::size_t iteration = 0;

  // Best iterate so far, by certificate and then by radius.
  struct Best {
    std::optional<LdMat> x;
    Certificate cert{};
  } best;
  auto consider = [&](const LdMat& x, const Certificate& cert) {
    if (!best.x || cert.error_bound < best.cert.error_bound ||
        (cert.error_bound == best.cert.error_bound && cert.radius_at < best.cert.radius_at)) {
      best.x = x;
      best.cert = cert;
    }
  };

  // Farthest-point descent along geodesics, starting from the first point.
  const bool pure = options.scheme == CircumcenterScheme::farthest_point;
  const std::size_t warm = pure ? options.max_iter : std::min(options.warm_start_iterations, options.max_iter);
  SpdPoint x = set[0];
  bool converged = false;
  for (std::size_t k = 0; k < warm; ++k, ++iteration) {
    if (pure) {
      const TangentState s = evaluate(to_eigen_as<long double>(x.matrix()), set, Precision::standard);
      const Certificate cert = certify_state(s, set.diameter(), nullptr);
      consider(s.base, cert);
      if (options.record_trace) trace.push_back({iteration, cert.radius_at, cert.error_bound});
      if (cert.error_bound <= eps) {
        converged = true;
        break;
      }
      x = geodesic(x, set[s.farthest], 1.0 / static_cast<double>(k + 2));
    } else {
      // Tracing only observes; the refined warm start never stops early.
      if (options.record_trace) {
        const Certificate cert = certify(x, set);
        trace.push_back({iteration, cert.radius_at, cert.error_bound});
      }
      const RadiusAt r = radius_at(x, set);
      x = geodesic(x, set[r.farthest_index], 1.0 / static_cast<double>(k + 2));
    }
  }

  if (!pure && !converged) {
    // Majorize-minimize in the tangent space at x: the model
    //   max_i  d_i^2 - 2<v_i, delta> + beta |delta|^2
    // is minimized exactly through its simplex dual, and beta grows until the
    // step decreases max_i d^2 by a fixed fraction of the predicted amount.
    // Once standard precision stops making progress the iterate and all
    // distances switch to long double, which lowers the certificate floor.
    Precision precision = Precision::standard;
    TangentState s = evaluate(to_eigen_as<long double>(x.matrix()), set, precision);
    double beta = 1.0;
    std::size_t stalled = 0;
    auto escalate = [&]() {
      if (precision == Precision::extended) return false;
      precision = Precision::extended;
      s = evaluate(s.base, set, precision);
      beta = 1.0;
      stalled = 0;
      return true;
    };
    while (iteration < options.max_iter) {
      std::vector<double> unit_weights;
      const Certificate cert = certify_state(s, set.diameter(), &unit_weights);
      consider(s.base, cert);
      if (options.record_trace) trace.push_back({iteration, cert.radius_at, cert.error_bound});
      ++iteration;
      if (cert.error_bound <= eps) {
        converged = true;
        break;
      }

      DualSolution dual = beta == 1.0 ? DualSolution{unit_weights, 0.0} : solve_dual(s, beta);
      const ComplexMatrix step = combine(s, dual.weights, 1.0 / beta);
      const double step_sq = NormalizedTrace(s.n).inner(step, step);
      // Predicted decrease of max d^2 under the model, cancellation free:
      // F - max_i(sq_i - 2<v_i, step> + beta |step|^2) at the dual optimum.
      long double predicted = beta * step_sq;
      for (std::size_t i = 0; i < dual.weights.size(); ++i) {
        predicted += static_cast<long double>(dual.weights[i]) * (s.max_sq - s.sq[i]);
      }
      const long double floor = precision == Precision::standard ? 1e-15L : 1e-18L;
      if (!(predicted > floor * s.max_sq)) {
        if (escalate()) continue;
        break;
      }

      std::optional<TangentState> next;
      try {
        next.emplace(evaluate(advance(s, step, precision), set, precision));
      } catch (const Error&) {
        next.reset();
      }
      if (next && next->max_sq <= s.max_sq - 0.25L * predicted) {
        s = std::move(*next);
        beta = std::max(1.0, 0.5 * beta);
        stalled = 0;
      } else {
        // A rejected step whose predicted gain is already at roundoff level
        // means the current precision is exhausted.
        const long double noise = precision == Precision::standard ? 1e-12L : 1e-17L;
        if (predicted < noise * s.max_sq || ++stalled > 12) {
          if (escalate()) continue;
          break;
        }
        beta *= 2.0;
      }
    }
    if (!converged && iteration >= options.max_iter) {
      // Account for the final iterate as well.
      consider(s.base, certify_state(s, set.diameter(), nullptr));
    }
  }

  if (!best.x) {
    // Only reachable when max_iter ends the refined scheme inside its warm start.
    best.x = to_eigen_as<long double>(x.matrix());
    best.cert = certify(x, set);
  }
  // The returned center is the best iterate rounded to double; the rounding
  // distance is added to both the radius and the error bound.
  const SpdPoint center = SpdPoint::from(from_long(*best.x));
  const LdMat rounded = to_eigen_as<long double>(center.matrix());
  const double slip =
      rounded == *best.x ? 0.0 : static_cast<double>(extended_distance(*best.x, rounded)) * (1.0 + 1e-6);
  if (!in_ball(center, set.ball(), kEscapeSlack)) {
    throw Error(ErrorKind::NumericalEscape, "circumcenter iterate left GL_c");
  }
  const double error_bound = best.cert.error_bound + slip;
  return {center,
          best.cert.radius_at + slip,
          best.cert.lower_bound,
          error_bound,
          iteration,
          error_bound <= eps,
          std::move(trace)};
}

}  // namespace unitarizer
