#pragma once

// Finite models of t-discrete measured groupoids.
//
// Arrows are indexed 0..|A|-1; composition hg means "g then h" and is defined
// exactly when source(h) == target(g). Unit weights are doubles with exact-zero
// null sets, so "full measure" means the complement has weight zero.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unitarizer/errors.hpp"

namespace unitarizer {

/// Finite group given by its multiplication table: mult[a][b] = a * b.
struct GroupTable {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> mult;
  std::size_t identity = 0;
  std::vector<std::size_t> inverses;

  std::size_t order() const noexcept { return elements.size(); }
  std::size_t multiply(std::size_t a, std::size_t b) const { return mult[a][b]; }
  /// Throws InvalidAction if the table is not a group.
  void validate() const;

  static GroupTable cyclic(std::size_t n);
  /// Permutations of {0..k-1} with (a * b)(i) = a(b(i)); elements are
  /// labelled by their one-line notation, identity first.
  static GroupTable symmetric(std::size_t k);
  /// The image permutation of element a of symmetric(k).
  static std::vector<std::size_t> permutation_of(const GroupTable& symmetric_group, std::size_t a);
};

struct ActionGroupoidSpec {
  GroupTable group;
  std::vector<std::string> units;
  std::vector<double> mu;
  /// action[g][x] = g . x
  std::vector<std::vector<std::size_t>> action;

  /// The group acting on itself by left multiplication, uniform measure.
  static ActionGroupoidSpec regular(const GroupTable& group);
  /// Throws InvalidAction unless e.x = x and (gh).x = g.(h.x).
  void validate() const;
};

struct Arrow {
  std::string id;
  std::size_t source;
  std::size_t target;
};

struct CompositionEntry {
  std::size_t outer;  // h
  std::size_t inner;  // g
  std::size_t result; // hg
};

class FiniteMeasuredGroupoid {
 public:
  /// Validates every groupoid axiom exhaustively; throws InvalidGroupoid with
  /// the failing arrows named in the message.
  static FiniteMeasuredGroupoid from_tables(std::vector<std::string> units, std::vector<double> mu,
                                            std::vector<Arrow> arrows, std::vector<std::size_t> inverse,
                                            std::span<const CompositionEntry> composition);

  std::size_t unit_count() const noexcept { return units_.size(); }
  std::size_t arrow_count() const noexcept { return arrows_.size(); }
  const std::vector<std::string>& units() const noexcept { return units_; }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }

  std::size_t source(std::size_t g) const { return arrows_[g].source; }
  std::size_t target(std::size_t g) const { return arrows_[g].target; }
  std::size_t inverse(std::size_t g) const { return inverse_[g]; }
  std::size_t unit_arrow(std::size_t x) const { return unit_arrows_[x]; }
  bool composable(std::size_t h, std::size_t g) const { return source(h) == target(g); }
  /// hg; throws InvalidGroupoid if not composable.
  std::size_t compose(std::size_t h, std::size_t g) const;

  bool positive(std::size_t unit) const { return mu_[unit] > 0.0; }
  /// Both endpoints have positive weight.
  bool essential(std::size_t g) const { return positive(source(g)) && positive(target(g)); }

  std::optional<std::size_t> find_unit(const std::string& id) const;
  std::optional<std::size_t> find_arrow(const std::string& id) const;
  /// Throws UnknownUnit.
  std::size_t unit_index(const std::string& id) const;

  /// The composition table as (h, g, hg) triples, h-major.
  std::vector<CompositionEntry> composition_entries() const;

 private:
  FiniteMeasuredGroupoid() = default;
  void validate_and_index();

  std::vector<std::string> units_;
  std::vector<double> mu_;
  std::vector<Arrow> arrows_;
  std::vector<std::size_t> inverse_;
  std::vector<std::int32_t> compose_;  // arrow_count^2, -1 where undefined
  std::vector<std::size_t> unit_arrows_;
};

/// nu(g) = mu(target(g)).
std::vector<double> arrow_measure(const FiniteMeasuredGroupoid& g);
/// nu(E) = sum_x |G^x cap E| mu(x), evaluated through the target fibers.
double measure_of(const FiniteMeasuredGroupoid& g, std::span<const std::size_t> arrows);

FiniteMeasuredGroupoid build_action_groupoid(const ActionGroupoidSpec& spec);
/// Arrow index of (element, unit) in build_action_groupoid output.
inline std::size_t action_arrow(const ActionGroupoidSpec& spec, std::size_t element, std::size_t unit) {
  return element * spec.units.size() + unit;
}

enum class InvarianceVerdict { invariant, quasi_invariant, neither };
std::string to_string(InvarianceVerdict v);

InvarianceVerdict check_invariance(const FiniteMeasuredGroupoid& g);
/// Units of positive weight all lie in one orbit.
bool check_ergodic(const FiniteMeasuredGroupoid& g);

/// Restriction to the given unit subset (any order; duplicates ignored) with
/// mu renormalized. Throws EmptyRestriction / ZeroMassRestriction.
FiniteMeasuredGroupoid restrict_groupoid(const FiniteMeasuredGroupoid& g, std::span<const std::size_t> units);
/// Restriction to the units of positive weight.
FiniteMeasuredGroupoid restrict_to_support(const FiniteMeasuredGroupoid& g);

struct Fibers {
  std::vector<std::size_t> source;  // G_x = s^{-1}(x)
  std::vector<std::size_t> target;  // G^x = t^{-1}(x)
};
/// Throws UnknownUnit.
Fibers fibers(const FiniteMeasuredGroupoid& g, std::size_t unit);

}  // namespace unitarizer
