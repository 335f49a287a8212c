#pragma once

// Representations of finite measured groupoids by invertible matrices, and
// their unitarization through circumcenters of Gram sets:
//   B_x = { rho(g)* rho(g) : s(g) = x },  sigma(x) = circumcenter(B_x),
//   psi(x) = sigma(x)^{1/2},  u(g) = psi(t(g)) rho(g) psi(s(g))^{-1}.
// Units of weight zero are ignored throughout; only arrows between
// positive-weight units ("essential" arrows) are checked or solved for.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unitarizer/circumcenter.hpp"
#include "unitarizer/groupoid.hpp"
#include "unitarizer/linalg.hpp"

namespace unitarizer {

class Representation {
 public:
  /// matrices[a] = rho(arrow a). Throws MissingArrow when the count does not
  /// match the groupoid and DimensionMismatch on mixed dimensions.
  static Representation make(std::shared_ptr<const FiniteMeasuredGroupoid> groupoid,
                             std::vector<ComplexMatrix> matrices);
  /// Same, keyed by arrow id. Unknown ids throw InvalidRepresentation.
  static Representation from_named(std::shared_ptr<const FiniteMeasuredGroupoid> groupoid, std::size_t dim,
                                   const std::map<std::string, ComplexMatrix>& matrices);

  const FiniteMeasuredGroupoid& groupoid() const noexcept { return *groupoid_; }
  const std::shared_ptr<const FiniteMeasuredGroupoid>& groupoid_ptr() const noexcept { return groupoid_; }
  std::size_t dim() const noexcept { return dim_; }
  const ComplexMatrix& operator()(std::size_t arrow) const { return matrices_[arrow]; }
  const std::vector<ComplexMatrix>& matrices() const noexcept { return matrices_; }
  /// Largest operator norm over essential arrows.
  double uniform_bound_C() const noexcept { return bound_; }

 private:
  Representation(std::shared_ptr<const FiniteMeasuredGroupoid> g, std::size_t dim, std::vector<ComplexMatrix> m,
                 double bound)
      : groupoid_(std::move(g)), dim_(dim), matrices_(std::move(m)), bound_(bound) {}

  std::shared_ptr<const FiniteMeasuredGroupoid> groupoid_;
  std::size_t dim_;
  std::vector<ComplexMatrix> matrices_;
  double bound_;
};

double uniform_bound(const Representation& rho);

enum class ViolationKind { composition, unit, inverse };
std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::size_t outer;  // h for composition, g for inverse, the unit arrow for unit
  std::size_t inner;  // g for composition, g^{-1} for inverse, the unit arrow for unit
  double residual;
};

/// Every identity violated by more than tol (absolute, L2 norm):
///   composition  ||rho(hg) - rho(h) rho(g)||_2
///   unit         ||rho(1_x) - I||_2
///   inverse      ||rho(g^{-1}) rho(g) - I||_2
/// over essential arrows, in arrow order.
std::vector<Violation> check_representation(const Representation& rho, double tol);
/// tolerances::rep scaled by (1 + C^2), the tolerance used when loading input.
double default_check_tolerance(const Representation& rho);

/// The Gram set at a positive-weight unit, duplicates removed (relative
/// tolerances::dedup), in a GL_c ball with c = C^2 (widened only as far as
/// roundoff requires). Throws UnknownUnit, or ParameterOutOfRange at a null unit.
PointSet gram_set(const Representation& rho, std::size_t unit);

struct SimilarityWitness {
  std::vector<PositiveDefiniteMatrix> psi;    // per unit; I at null units
  std::vector<PositiveDefiniteMatrix> sigma;  // psi^2
  std::vector<std::optional<CircumcenterResult>> certificates;  // empty at null units
};

struct ArrowResidual {
  std::size_t arrow;
  double unitarity;     // ||u(g)* u(g) - I||_2
  double equivariance;  // ||rho(g)* sigma(t(g)) rho(g) - sigma(s(g))||_2
};

struct UnitarizationReport {
  double max_unitarity_residual = 0.0;
  double max_equivariance_residual = 0.0;
  double max_certificate_bound = 0.0;
  /// 10 (eps + tolerances::func) C^2.
  double threshold = 0.0;
  bool all_converged = true;
  std::vector<std::size_t> unconverged_units;
  std::vector<ArrowResidual> per_arrow;  // essential arrows only

  bool passed() const noexcept { return all_converged && max_unitarity_residual <= threshold; }
};

struct UnitarizeOptions {
  std::size_t max_iter = 100000;
  /// Concurrent per-unit solves; 0 picks the hardware concurrency.
  std::size_t jobs = 1;
  bool record_trace = false;
};

struct UnitarizationResult {
  SimilarityWitness witness;
  Representation unitary;
  UnitarizationReport report;
};

/// Runs the full pipeline. A unit whose solve ends above eps is reported in
/// report.unconverged_units rather than thrown; see ensure_converged.
/// Throws NotUniformlyBounded if rho has no finite bound.
UnitarizationResult unitarize(const Representation& rho, double eps, const UnitarizeOptions& options = {});
/// Throws SolverFailure naming the first unconverged unit.
void ensure_converged(const UnitarizationResult& result);

struct SimilarityCheck {
  bool similar;
  double max_residual;
  std::vector<std::pair<std::size_t, double>> per_arrow;  // essential arrows
};

/// max over essential arrows of ||rho2(g) - h(t(g)) rho1(g) h(s(g))^{-1}||_2 <= tol.
/// Throws DimensionMismatch unless both representations and h share the
/// groupoid shape and dimension.
SimilarityCheck verify_similarity(const Representation& rho1, const Representation& rho2,
                                  const std::vector<ComplexMatrix>& h, double tol);

/// base[a] = u0(group element a); must be a unitary homomorphism within
/// tolerances::rep, else InvalidBaseRep.
void validate_base_rep(const GroupTable& group, const std::vector<ComplexMatrix>& base);

/// rho(g, x) = h(g.x) u0(g) h(x)^{-1} with h(x) drawn per unit (in unit order)
/// with singular values in [1/sqrt(cond_bound), sqrt(cond_bound)].
/// cond_bound = 1 gives unitary h.
Representation generate_instance(const ActionGroupoidSpec& spec, const std::vector<ComplexMatrix>& base,
                                 double cond_bound, std::uint64_t seed);

namespace base_reps {
std::vector<ComplexMatrix> trivial(const GroupTable& group, std::size_t dim);
/// Left-regular permutation representation, dimension |group|.
std::vector<ComplexMatrix> regular(const GroupTable& group);
/// The sign of left multiplication, a one-dimensional character.
std::vector<ComplexMatrix> regular_sign(const GroupTable& group);
/// diag(w^(a k_1), ..., w^(a k_dim)) for element a of cyclic(n), w = exp(2 pi i / n), k_j = j + 1.
std::vector<ComplexMatrix> cyclic_characters(std::size_t n, std::size_t dim);
/// Permutation matrices of symmetric(k), dimension k.
std::vector<ComplexMatrix> permutation(const GroupTable& symmetric_group);
std::vector<ComplexMatrix> direct_sum(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b);
/// w* u0 w for a fixed unitary w.
std::vector<ComplexMatrix> conjugate(const std::vector<ComplexMatrix>& base, const ComplexMatrix& w);
/// The regular representation padded with trivial blocks when dim >= |group|,
/// otherwise regular_sign padded with trivial blocks.
std::vector<ComplexMatrix> default_for(const GroupTable& group, std::size_t dim);
}  // namespace base_reps

}  // namespace unitarizer
