#include "unitarizer/representation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "unitarizer/random.hpp"

namespace unitarizer {

namespace {

std::vector<std::vector<std::size_t>> essential_by_target(const FiniteMeasuredGroupoid& g) {
  std::vector<std::vector<std::size_t>> out(g.unit_count());
  for (std::size_t a = 0; a < g.arrow_count(); ++a)
    if (g.essential(a)) out[g.target(a)].push_back(a);
  return out;
}

ComplexMatrix permutation_matrix(const std::vector<std::size_t>& perm) {
  ComplexMatrix p(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p(perm[i], i) = 1.0;
  return p;
}

int permutation_sign(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace

// Representation ---------------------------------------------------------------------

Representation Representation::make(std::shared_ptr<const FiniteMeasuredGroupoid> groupoid,
                                     std::vector<ComplexMatrix> matrices) {
  if (!groupoid) throw Error(ErrorKind::InvalidRepresentation, "no groupoid");
  if (matrices.size() != groupoid->arrow_count()) {
    throw Error(ErrorKind::MissingArrow, std::to_string(matrices.size()) + " matrices for " +
                                             std::to_string(groupoid->arrow_count()) + " arrows");
  }
  const std::size_t n = matrices.front().dim();
  double bound = 0.0;
  for (std::size_t a = 0; a < matrices.size(); ++a) {
    if (matrices[a].dim() != n) {
      throw Error(ErrorKind::DimensionMismatch, "arrow " + groupoid->arrows()[a].id + " has dimension " +
                                                    std::to_string(matrices[a].dim()) + ", expected " +
                                                    std::to_string(n));
    }
    if (groupoid->essential(a)) bound = std::max(bound, operator_norm(matrices[a]));
  }
  return Representation(std::move(groupoid), n, std::move(matrices), bound);
}

Representation Representation::from_named(std::shared_ptr<const FiniteMeasuredGroupoid> groupoid, std::size_t dim,
                                          const std::map<std::string, ComplexMatrix>& matrices) {
  if (!groupoid) throw Error(ErrorKind::InvalidRepresentation, "no groupoid");
  for (const auto& [id, m] : matrices) {
    if (!groupoid->find_arrow(id)) throw Error(ErrorKind::InvalidRepresentation, "unknown arrow " + id);
  }
  std::vector<ComplexMatrix> ordered;
  ordered.reserve(groupoid->arrow_count());
  for (const Arrow& a : groupoid->arrows()) {
    const auto it = matrices.find(a.id);
    if (it == matrices.end()) throw Error(ErrorKind::MissingArrow, "no matrix for arrow " + a.id);
    if (it->second.dim() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "arrow " + a.id + " has dimension " +
                                                    std::to_string(it->second.dim()) + ", expected " +
                                                    std::to_string(dim));
    }
    ordered.push_back(it->second);
  }
  return make(std::move(groupoid), std::move(ordered));
}

double uniform_bound(const Representation& rho) { return rho.uniform_bound_C(); }

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::composition: return "composition";
    case ViolationKind::unit: return "unit";
    case ViolationKind::inverse: return "inverse";
  }
  return "composition";
}

std::vector<Violation> check_representation(const Representation& rho, double tol) {
  const FiniteMeasuredGroupoid& g = rho.groupoid();
  const ComplexMatrix eye = ComplexMatrix::identity(rho.dim());
  std::vector<Violation> out;
  for (std::size_t x = 0; x < g.unit_count(); ++x) {
    if (!g.positive(x)) continue;
    const std::size_t e = g.unit_arrow(x);
    const double r = l2_norm(rho(e) - eye);
    if (!(r <= tol)) out.push_back({ViolationKind::unit, e, e, r});
  }
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    if (!g.essential(a)) continue;
    const double r = l2_norm(rho(g.inverse(a)) * rho(a) - eye);
    if (!(r <= tol)) out.push_back({ViolationKind::inverse, a, g.inverse(a), r});
  }
  const auto by_target = essential_by_target(g);
  for (std::size_t h = 0; h < g.arrow_count(); ++h) {
    if (!g.essential(h)) continue;
    for (std::size_t a : by_target[g.source(h)]) {
      const double r = l2_norm(rho(g.compose(h, a)) - rho(h) * rho(a));
      if (!(r <= tol)) out.push_back({ViolationKind::composition, h, a, r});
    }
  }
  return out;
}

double default_check_tolerance(const Representation& rho) {
  const double c = rho.uniform_bound_C();
  return tolerances::rep * (1.0 + c * c);
}

// Gram sets ----------------------------------------------------------------------------

PointSet gram_set(const Representation& rho, std::size_t unit) {
  const FiniteMeasuredGroupoid& g = rho.groupoid();
  if (unit >= g.unit_count()) throw Error(ErrorKind::UnknownUnit, "unit index " + std::to_string(unit));
  if (!g.positive(unit)) {
    throw Error(ErrorKind::ParameterOutOfRange, "unit " + g.units()[unit] + " has weight zero");
  }
  std::vector<SpdPoint> points;
  std::vector<double> norms;
  double need = 1.0;
  for (std::size_t a : fibers(g, unit).source) {
    if (!g.essential(a)) continue;
    SpdPoint p = SpdPoint::from(rho(a).adjoint() * rho(a));
    const double norm = l2_norm(p.matrix());
    bool duplicate = false;
    for (std::size_t i = 0; i < points.size() && !duplicate; ++i) {
      duplicate = l2_norm(points[i].matrix() - p.matrix()) <= tolerances::dedup * std::max(norm, norms[i]);
    }
    if (duplicate) continue;
    need = std::max({need, p.value().eig_max(), 1.0 / p.value().eig_min()});
    points.push_back(std::move(p));
    norms.push_back(norm);
  }
  const double c2 = rho.uniform_bound_C() * rho.uniform_bound_C();
  const double c = std::max({c2, need, 1.0 + 1e-9});
  return PointSet::make(std::move(points), GLcBall::make(c, rho.dim()));
}

// Unitarization ------------------------------------------------------------------------

UnitarizationResult unitarize(const Representation& rho, double eps, const UnitarizeOptions& options) {
  if (!(eps > 0.0)) throw Error(ErrorKind::ParameterOutOfRange, "eps must be positive");
  const double bound = rho.uniform_bound_C();
  if (!std::isfinite(bound) || !(bound > 0.0)) {
    throw Error(ErrorKind::NotUniformlyBounded, "representation has no finite uniform bound");
  }
  const FiniteMeasuredGroupoid& g = rho.groupoid();
  const std::size_t nu = g.unit_count();
  const std::size_t n = rho.dim();

  SolveOptions solve;
  solve.epsilon = eps;
  solve.max_iter = options.max_iter;
  solve.record_trace = options.record_trace;

  std::vector<std::optional<CircumcenterResult>> results(nu);
  std::vector<std::exception_ptr> failures(nu);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t x = next++; x < nu; x = next++) {
      if (!g.positive(x)) continue;
      try {
        results[x] = solve_circumcenter(gram_set(rho, x), solve);
      } catch (...) {
        failures[x] = std::current_exception();
      }
    }
  };
  std::size_t jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.jobs;
  jobs = std::min(jobs, nu);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  const PositiveDefiniteMatrix eye = PositiveDefiniteMatrix::from(ComplexMatrix::identity(n));
  SimilarityWitness witness;
  UnitarizationReport report;
  std::vector<ComplexMatrix> psi_inv;
  for (std::size_t x = 0; x < nu; ++x) {
    if (!results[x]) {
      witness.sigma.push_back(eye);
      witness.psi.push_back(eye);
      psi_inv.push_back(eye.matrix());
    } else {
      const PositiveDefiniteMatrix& s = results[x]->center.value();
      witness.sigma.push_back(s);
      witness.psi.push_back(matrix_sqrt(s));
      psi_inv.push_back(matrix_inv_sqrt(s).matrix());
      report.max_certificate_bound = std::max(report.max_certificate_bound, results[x]->center_error_bound);
      if (!results[x]->converged) {
        report.all_converged = false;
        report.unconverged_units.push_back(x);
      }
    }
  }
  witness.certificates = std::move(results);

  std::vector<ComplexMatrix> u;
  u.reserve(g.arrow_count());
  const ComplexMatrix id = ComplexMatrix::identity(n);
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    const std::size_t s = g.source(a);
    const std::size_t t = g.target(a);
    u.push_back(witness.psi[t].matrix() * rho(a) * psi_inv[s]);
    if (!g.essential(a)) continue;
    ArrowResidual r{a, 0.0, 0.0};
    r.unitarity = l2_norm(u.back().adjoint() * u.back() - id);
    r.equivariance = l2_norm(rho(a).adjoint() * witness.sigma[t].matrix() * rho(a) - witness.sigma[s].matrix());
    report.max_unitarity_residual = std::max(report.max_unitarity_residual, r.unitarity);
    report.max_equivariance_residual = std::max(report.max_equivariance_residual, r.equivariance);
    report.per_arrow.push_back(r);
  }
  report.threshold = 10.0 * (eps + tolerances::func) * bound * bound;
  return {std::move(witness), Representation::make(rho.groupoid_ptr(), std::move(u)), std::move(report)};
}

void ensure_converged(const UnitarizationResult& result) {
  if (result.report.unconverged_units.empty()) return;
  const std::size_t x = result.report.unconverged_units.front();
  const auto& cert = result.witness.certificates[x];
  std::ostringstream msg;
  msg.precision(17);
  msg << "unit " << result.unitary.groupoid().units()[x] << " ended with certificate bound "
      << (cert ? cert->center_error_bound : 0.0) << " after " << (cert ? cert->iterations : 0) << " iterations";
  throw Error(ErrorKind::SolverFailure, msg.str());
}

SimilarityCheck verify_similarity(const Representation& rho1, const Representation& rho2,
                                  const std::vector<ComplexMatrix>& h, double tol) {
  const FiniteMeasuredGroupoid& g = rho1.groupoid();
  const FiniteMeasuredGroupoid& g2 = rho2.groupoid();
  if (rho1.dim() != rho2.dim()) throw Error(ErrorKind::DimensionMismatch, "representations differ in dimension");
  if (g.unit_count() != g2.unit_count() || g.arrow_count() != g2.arrow_count()) {
    throw Error(ErrorKind::DimensionMismatch, "representations live on different groupoids");
  }
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    const Arrow& p = g.arrows()[a];
    const Arrow& q = g2.arrows()[a];
    if (p.id != q.id || p.source != q.source || p.target != q.target) {
      throw Error(ErrorKind::DimensionMismatch, "arrow " + p.id + " does not match " + q.id);
    }
  }
  if (h.size() != g.unit_count()) {
    throw Error(ErrorKind::DimensionMismatch, "similarity has " + std::to_string(h.size()) + " matrices for " +
                                                  std::to_string(g.unit_count()) + " units");
  }
  std::vector<ComplexMatrix> h_inv;
  for (std::size_t x = 0; x < h.size(); ++x) {
    if (h[x].dim() != rho1.dim()) throw Error(ErrorKind::DimensionMismatch, "similarity matrix has wrong dimension");
    h_inv.push_back(g.positive(x) ? inverse(h[x]) : h[x]);
  }
  SimilarityCheck out{true, 0.0, {}};
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    if (!g.essential(a)) continue;
    const double r = l2_norm(rho2(a) - h[g.target(a)] * rho1(a) * h_inv[g.source(a)]);
    out.per_arrow.emplace_back(a, r);
    out.max_residual = std::max(out.max_residual, r);
    if (!(r <= tol)) out.similar = false;
  }
  return out;
}

// Instance generation ------------------------------------------------------------------

void validate_base_rep(const GroupTable& group, const std::vector<ComplexMatrix>& base) {
  if (base.size() != group.order()) {
    throw Error(ErrorKind::InvalidBaseRep, std::to_string(base.size()) + " matrices for a group of order " +
                                               std::to_string(group.order()));
  }
  const std::size_t n = base.front().dim();
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  for (std::size_t a = 0; a < base.size(); ++a) {
    if (base[a].dim() != n) throw Error(ErrorKind::InvalidBaseRep, "mixed dimensions");
    if (!base[a].all_finite()) throw Error(ErrorKind::InvalidBaseRep, "non-finite entry");
    if (!(l2_norm(base[a].adjoint() * base[a] - eye) <= tolerances::rep)) {
      throw Error(ErrorKind::InvalidBaseRep, "u0(" + group.elements[a] + ") is not unitary");
    }
  }
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = 0; b < base.size(); ++b)
      if (!(l2_norm(base[group.mult[a][b]] - base[a] * base[b]) <= tolerances::rep)) {
        throw Error(ErrorKind::InvalidBaseRep,
                    "u0 is not multiplicative at (" + group.elements[a] + ", " + group.elements[b] + ")");
      }
}

Representation generate_instance(const ActionGroupoidSpec& spec, const std::vector<ComplexMatrix>& base,
                                 double cond_bound, std::uint64_t seed) {
  if (!(cond_bound >= 1.0) || !std::isfinite(cond_bound)) {
    throw Error(ErrorKind::ParameterOutOfRange, "cond_bound must be >= 1");
  }
  auto groupoid = std::make_shared<const FiniteMeasuredGroupoid>(build_action_groupoid(spec));
  validate_base_rep(spec.group, base);
  const std::size_t n = base.front().dim();
  const std::size_t nx = spec.units.size();

  Rng rng(seed);
  std::vector<ComplexMatrix> h;
  std::vector<ComplexMatrix> h_inv;
  for (std::size_t x = 0; x < nx; ++x) {
    h.push_back(random_invertible(n, cond_bound, rng));
    h_inv.push_back(inverse(h.back()));
  }
  std::vector<ComplexMatrix> rho;
  rho.reserve(spec.group.order() * nx);
  for (std::size_t a = 0; a < spec.group.order(); ++a)
    for (std::size_t x = 0; x < nx; ++x) rho.push_back(h[spec.action[a][x]] * base[a] * h_inv[x]);
  return Representation::make(std::move(groupoid), std::move(rho));
}

namespace base_reps {

std::vector<ComplexMatrix> trivial(const GroupTable& group, std::size_t dim) {
  return std::vector<ComplexMatrix>(group.order(), ComplexMatrix::identity(dim));
}

std::vector<ComplexMatrix> regular(const GroupTable& group) {
  std::vector<ComplexMatrix> out;
  for (std::size_t a = 0; a < group.order(); ++a) out.push_back(permutation_matrix(group.mult[a]));
  return out;
}

std::vector<ComplexMatrix> regular_sign(const GroupTable& group) {
  std::vector<ComplexMatrix> out;
  for (std::size_t a = 0; a < group.order(); ++a) {
    const double s = permutation_sign(group.mult[a]);
    out.push_back(ComplexMatrix::diagonal(std::span<const double>(&s, 1)));
  }
  return out;
}

std::vector<ComplexMatrix> cyclic_characters(std::size_t n, std::size_t dim) {
  std::vector<ComplexMatrix> out;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<Complex> diag(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((a * (j + 1)) % n) / static_cast<double>(n);
      diag[j] = {std::cos(angle), std::sin(angle)};
    }
    out.push_back(ComplexMatrix::diagonal(std::span<const Complex>(diag)));
  }
  return out;
}

std::vector<ComplexMatrix> permutation(const GroupTable& symmetric_group) {
  std::vector<ComplexMatrix> out;
  for (std::size_t a = 0; a < symmetric_group.order(); ++a) {
    out.push_back(permutation_matrix(GroupTable::permutation_of(symmetric_group, a)));
  }
  return out;
}

std::vector<ComplexMatrix> direct_sum(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "direct sum of unequal families");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::size_t p = a[k].dim();
    const std::size_t q = b[k].dim();
    ComplexMatrix m(p + q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) m(i, j) = a[k](i, j);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) m(p + i, p + j) = b[k](i, j);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ComplexMatrix> conjugate(const std::vector<ComplexMatrix>& base, const ComplexMatrix& w) {
  std::vector<ComplexMatrix> out;
  const ComplexMatrix w_adj = w.adjoint();
  for (const ComplexMatrix& m : base) out.push_back(w_adj * m * w);
  return out;
}

std::vector<ComplexMatrix> default_for(const GroupTable& group, std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::ParameterOutOfRange, "dimension must be positive");
  std::vector<ComplexMatrix> core = dim >= group.order() ? regular(group) : regular_sign(group);
  const std::size_t rest = dim - core.front().dim();
  return rest == 0 ? core : direct_sum(core, trivial(group, rest));
}

}  // namespace base_reps

}  // namespace unitarizer
