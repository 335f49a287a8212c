#include "unitarizer/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace unitarizer {

namespace {

std::string triple(const std::string& a, const std::string& b, const std::string& c) {
  return "(" + a + ", " + b + ", " + c + ")";
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidGroupoid, what); }

}  // namespace

// Groups and actions -----------------------------------------------------------

void GroupTable::validate() const {
  const std::size_t n = order();
  if (n == 0) throw Error(ErrorKind::InvalidAction, "group has no elements");
  if (mult.size() != n || inverses.size() != n || identity >= n) {
    throw Error(ErrorKind::InvalidAction, "group table shape does not match element list");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (mult[a].size() != n) throw Error(ErrorKind::InvalidAction, "ragged multiplication table");
    for (std::size_t b = 0; b < n; ++b)
      if (mult[a][b] >= n) throw Error(ErrorKind::InvalidAction, "multiplication table leaves the group");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (mult[identity][a] != a || mult[a][identity] != a) {
      throw Error(ErrorKind::InvalidAction, "identity fails for " + elements[a]);
    }
    if (inverses[a] >= n || mult[a][inverses[a]] != identity || mult[inverses[a]][a] != identity) {
      throw Error(ErrorKind::InvalidAction, "inverse fails for " + elements[a]);
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (mult[mult[a][b]][c] != mult[a][mult[b][c]]) {
          throw Error(ErrorKind::InvalidAction,
                      "associativity fails for " + triple(elements[a], elements[b], elements[c]));
        }
}

GroupTable GroupTable::cyclic(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidAction, "cyclic group of order 0");
  GroupTable g;
  g.identity = 0;
  for (std::size_t a = 0; a < n; ++a) {
    g.elements.push_back(std::to_string(a));
    g.inverses.push_back((n - a) % n);
    std::vector<std::size_t> row(n);
    for (std::size_t b = 0; b < n; ++b) row[b] = (a + b) % n;
    g.mult.push_back(std::move(row));
  }
  return g;
}

GroupTable GroupTable::symmetric(std::size_t k) {
  if (k == 0 || k > 8) throw Error(ErrorKind::InvalidAction, "symmetric group degree must be in 1..8");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = i;

  GroupTable g;
  g.identity = 0;
  for (const auto& perm : perms) {
    std::string label;
    for (std::size_t v : perm) label += std::to_string(v);
    g.elements.push_back(label);
  }
  const std::size_t n = perms.size();
  g.mult.assign(n, std::vector<std::size_t>(n));
  g.inverses.resize(n);
  std::vector<std::size_t> composed(k);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < k; ++i) composed[i] = perms[a][perms[b][i]];
      g.mult[a][b] = index.at(composed);
      if (g.mult[a][b] == g.identity) g.inverses[a] = b;
    }
  }
  return g;
}

std::vector<std::size_t> GroupTable::permutation_of(const GroupTable& symmetric_group, std::size_t a) {
  std::vector<std::size_t> perm;
  for (char ch : symmetric_group.elements.at(a)) perm.push_back(static_cast<std::size_t>(ch - '0'));
  return perm;
}

ActionGroupoidSpec ActionGroupoidSpec::regular(const GroupTable& group) {
  ActionGroupoidSpec spec;
  spec.group = group;
  const std::size_t n = group.order();
  for (std::size_t x = 0; x < n; ++x) spec.units.push_back("x" + std::to_string(x));
  spec.mu.assign(n, 1.0 / static_cast<double>(n));
  spec.action = group.mult;
  return spec;
}

void ActionGroupoidSpec::validate() const {
  group.validate();
  const std::size_t nx = units.size();
  if (nx == 0) throw Error(ErrorKind::InvalidAction, "action on an empty space");
  if (mu.size() != nx) throw Error(ErrorKind::InvalidAction, "mu has the wrong length");
  if (action.size() != group.order()) throw Error(ErrorKind::InvalidAction, "action table has the wrong shape");
  for (const auto& row : action) {
    if (row.size() != nx) throw Error(ErrorKind::InvalidAction, "ragged action table");
    for (std::size_t y : row)
      if (y >= nx) throw Error(ErrorKind::InvalidAction, "action table leaves the space");
  }
  for (std::size_t x = 0; x < nx; ++x) {
    if (action[group.identity][x] != x) {
      throw Error(ErrorKind::InvalidAction, "identity moves unit " + units[x]);
    }
    for (std::size_t a = 0; a < group.order(); ++a)
      for (std::size_t b = 0; b < group.order(); ++b)
        if (action[group.mult[a][b]][x] != action[a][action[b][x]]) {
          throw Error(ErrorKind::InvalidAction, "compatibility fails for " +
                                                    triple(group.elements[a], group.elements[b], units[x]));
        }
  }
}

// FiniteMeasuredGroupoid ---------------------------------------------------------

FiniteMeasuredGroupoid FiniteMeasuredGroupoid::from_tables(std::vector<std::string> units,
                                                           std::vector<double> mu,
                                                           std::vector<Arrow> arrows,
                                                           std::vector<std::size_t> inverse,
                                                           std::span<const CompositionEntry> composition) {
  FiniteMeasuredGroupoid g;
  g.units_ = std::move(units);
  g.mu_ = std::move(mu);
  g.arrows_ = std::move(arrows);
  g.inverse_ = std::move(inverse);
  const std::size_t na = g.arrows_.size();
  if (g.inverse_.size() != na) invalid("inverse table has " + std::to_string(g.inverse_.size()) + " entries");
  g.compose_.assign(na * na, -1);
  for (const CompositionEntry& e : composition) {
    if (e.outer >= na || e.inner >= na || e.result >= na) invalid("composition entry refers to an unknown arrow");
    auto& slot = g.compose_[e.outer * na + e.inner];
    if (slot >= 0 && static_cast<std::size_t>(slot) != e.result) {
      invalid("composition defined twice for " + g.arrows_[e.outer].id + " . " + g.arrows_[e.inner].id);
    }
    slot = static_cast<std::int32_t>(e.result);
  }
  g.validate_and_index();
  return g;
}

void FiniteMeasuredGroupoid::validate_and_index() {
  const std::size_t nu = units_.size();
  const std::size_t na = arrows_.size();
  if (nu == 0) invalid("groupoid has no units");
  if (mu_.size() != nu) invalid("mu has " + std::to_string(mu_.size()) + " entries for " + std::to_string(nu) + " units");
  double total = 0.0;
  for (double w : mu_) {
    if (!std::isfinite(w) || w < 0.0) invalid("unit weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) invalid("unit weights sum to " + std::to_string(total));
  {
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t x = 0; x < nu; ++x)
      if (!seen.emplace(units_[x], x).second) invalid("duplicate unit id " + units_[x]);
    seen.clear();
    for (std::size_t a = 0; a < na; ++a) {
      if (!seen.emplace(arrows_[a].id, a).second) invalid("duplicate arrow id " + arrows_[a].id);
      if (arrows_[a].source >= nu || arrows_[a].target >= nu) invalid("arrow " + arrows_[a].id + " has an unknown endpoint");
    }
  }
  const auto& A = arrows_;

  // Composition is defined exactly on composable pairs, with the right endpoints.
  for (std::size_t h = 0; h < na; ++h) {
    for (std::size_t g = 0; g < na; ++g) {
      const std::int32_t hg = compose_[h * na + g];
      if (composable(h, g)) {
        if (hg < 0) invalid("composition missing for composable pair (" + A[h].id + ", " + A[g].id + ")");
        const auto r = static_cast<std::size_t>(hg);
        if (A[r].source != A[g].source || A[r].target != A[h].target) {
          invalid("composition has wrong endpoints for " + triple(A[h].id, A[g].id, A[r].id));
        }
      } else if (hg >= 0) {
        invalid("composition defined for non-composable pair (" + A[h].id + ", " + A[g].id + ")");
      }
    }
  }

  // Unit arrows: the idempotent loop at each unit, acting as a two-sided identity.
  unit_arrows_.assign(nu, na);
  for (std::size_t e = 0; e < na; ++e) {
    if (A[e].source == A[e].target && compose_[e * na + e] == static_cast<std::int32_t>(e)) {
      if (unit_arrows_[A[e].source] != na) invalid("two idempotent arrows at unit " + units_[A[e].source]);
      unit_arrows_[A[e].source] = e;
    }
  }
  for (std::size_t x = 0; x < nu; ++x)
    if (unit_arrows_[x] == na) invalid("no unit arrow at unit " + units_[x]);
  for (std::size_t g = 0; g < na; ++g) {
    if (compose(unit_arrow(A[g].target), g) != g || compose(g, unit_arrow(A[g].source)) != g) {
      invalid("unit law fails for arrow " + A[g].id);
    }
  }

  // Inverses.
  for (std::size_t g = 0; g < na; ++g) {
    const std::size_t gi = inverse_[g];
    if (gi >= na) invalid("inverse of " + A[g].id + " is unknown");
    if (inverse_[gi] != g) invalid("inverse is not an involution at " + A[g].id);
    if (A[gi].source != A[g].target || A[gi].target != A[g].source) invalid("inverse has wrong endpoints at " + A[g].id);
    if (compose(gi, g) != unit_arrow(A[g].source) || compose(g, gi) != unit_arrow(A[g].target)) {
      invalid("inverse law fails for " + triple(A[g].id, A[gi].id, A[g].id));
    }
  }

  // Associativity on every composable triple (k, h, g).
  std::vector<std::vector<std::size_t>> by_source(nu);
  for (std::size_t a = 0; a < na; ++a) by_source[A[a].source].push_back(a);
  for (std::size_t g = 0; g < na; ++g) {
    for (std::size_t h : by_source[A[g].target]) {
      const std::size_t hg = compose(h, g);
      for (std::size_t k : by_source[A[h].target]) {
        if (compose(compose(k, h), g) != compose(k, hg)) {
          invalid("associativity fails for " + triple(A[k].id, A[h].id, A[g].id));
        }
      }
    }
  }
}

std::size_t FiniteMeasuredGroupoid::compose(std::size_t h, std::size_t g) const {
  const std::int32_t r = compose_[h * arrows_.size() + g];
  if (r < 0) invalid("arrows " + arrows_[h].id + " and " + arrows_[g].id + " are not composable");
  return static_cast<std::size_t>(r);
}

std::optional<std::size_t> FiniteMeasuredGroupoid::find_unit(const std::string& id) const {
  const auto it = std::find(units_.begin(), units_.end(), id);
  if (it == units_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - units_.begin());
}

std::optional<std::size_t> FiniteMeasuredGroupoid::find_arrow(const std::string& id) const {
  for (std::size_t a = 0; a < arrows_.size(); ++a)
    if (arrows_[a].id == id) return a;
  return std::nullopt;
}

std::size_t FiniteMeasuredGroupoid::unit_index(const std::string& id) const {
  const auto x = find_unit(id);
  if (!x) throw Error(ErrorKind::UnknownUnit, "unknown unit " + id);
  return *x;
}

std::vector<CompositionEntry> FiniteMeasuredGroupoid::composition_entries() const {
  std::vector<CompositionEntry> out;
  const std::size_t na = arrows_.size();
  for (std::size_t h = 0; h < na; ++h)
    for (std::size_t g = 0; g < na; ++g)
      if (compose_[h * na + g] >= 0) out.push_back({h, g, static_cast<std::size_t>(compose_[h * na + g])});
  return out;
}

// Measures -------------------------------------------------------------------------

std::vector<double> arrow_measure(const FiniteMeasuredGroupoid& g) {
  std::vector<double> nu(g.arrow_count());
  for (std::size_t a = 0; a < nu.size(); ++a) nu[a] = g.mu()[g.target(a)];
  return nu;
}

double measure_of(const FiniteMeasuredGroupoid& g, std::span<const std::size_t> arrows) {
  std::vector<bool> in(g.arrow_count(), false);
  for (std::size_t a : arrows) in.at(a) = true;
  double total = 0.0;
  for (std::size_t x = 0; x < g.unit_count(); ++x) {
    std::size_t count = 0;
    for (std::size_t a : fibers(g, x).target) count += in[a] ? 1 : 0;
    total += static_cast<double>(count) * g.mu()[x];
  }
  return total;
}

FiniteMeasuredGroupoid build_action_groupoid(const ActionGroupoidSpec& spec) {
  spec.validate();
  const GroupTable& G = spec.group;
  const std::size_t nx = spec.units.size();
  std::vector<Arrow> arrows;
  std::vector<std::size_t> inverse;
  arrows.reserve(G.order() * nx);
  for (std::size_t a = 0; a < G.order(); ++a) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t y = spec.action[a][x];
      arrows.push_back({G.elements[a] + "@" + spec.units[x], x, y});
      inverse.push_back(action_arrow(spec, G.inverses[a], y));
    }
  }
  // (d, a.x) . (a, x) = (da, x)
  std::vector<CompositionEntry> composition;
  composition.reserve(G.order() * G.order() * nx);
  for (std::size_t a = 0; a < G.order(); ++a)
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t d = 0; d < G.order(); ++d)
        composition.push_back({action_arrow(spec, d, spec.action[a][x]), action_arrow(spec, a, x),
                               action_arrow(spec, G.mult[d][a], x)});
  return FiniteMeasuredGroupoid::from_tables(spec.units, spec.mu, std::move(arrows), std::move(inverse),
                                             composition);
}

std::string to_string(InvarianceVerdict v) {
  switch (v) {
    case InvarianceVerdict::invariant: return "invariant";
    case InvarianceVerdict::quasi_invariant: return "quasi_invariant";
    case InvarianceVerdict::neither: return "neither";
  }
  return "neither";
}

InvarianceVerdict check_invariance(const FiniteMeasuredGroupoid& g) {
  const auto nu = arrow_measure(g);
  bool invariant = true;
  for (std::size_t a = 0; a < nu.size(); ++a) {
    const double fwd = nu[a];
    const double back = nu[g.inverse(a)];
    if ((fwd > 0.0) != (back > 0.0)) return InvarianceVerdict::neither;
    if (std::abs(fwd - back) > 1e-12 * std::max(fwd, back)) invariant = false;
  }
  return invariant ? InvarianceVerdict::invariant : InvarianceVerdict::quasi_invariant;
}

bool check_ergodic(const FiniteMeasuredGroupoid& g) {
  std::size_t first = g.unit_count();
  for (std::size_t x = 0; x < g.unit_count(); ++x) {
    if (g.positive(x)) {
      first = x;
      break;
    }
  }
  if (first == g.unit_count()) return false;
  std::vector<bool> orbit(g.unit_count(), false);
  for (std::size_t a : fibers(g, first).source) orbit[g.target(a)] = true;
  for (std::size_t x = 0; x < g.unit_count(); ++x)
    if (g.positive(x) && !orbit[x]) return false;
  return true;
}

FiniteMeasuredGroupoid restrict_groupoid(const FiniteMeasuredGroupoid& g, std::span<const std::size_t> units) {
  if (units.empty()) throw Error(ErrorKind::EmptyRestriction, "restriction to an empty unit set");
  std::vector<bool> keep(g.unit_count(), false);
  for (std::size_t x : units) {
    if (x >= g.unit_count()) throw Error(ErrorKind::UnknownUnit, "unit index " + std::to_string(x));
    keep[x] = true;
  }
  double mass = 0.0;
  for (std::size_t x = 0; x < g.unit_count(); ++x)
    if (keep[x]) mass += g.mu()[x];
  if (!(mass > 0.0)) throw Error(ErrorKind::ZeroMassRestriction, "restriction to a null unit set");

  std::vector<std::size_t> unit_map(g.unit_count(), g.unit_count());
  std::vector<std::string> new_units;
  std::vector<double> new_mu;
  for (std::size_t x = 0; x < g.unit_count(); ++x) {
    if (!keep[x]) continue;
    unit_map[x] = new_units.size();
    new_units.push_back(g.units()[x]);
    new_mu.push_back(g.mu()[x] / mass);
  }
  std::vector<std::size_t> arrow_map(g.arrow_count(), g.arrow_count());
  std::vector<Arrow> arrows;
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    if (!keep[g.source(a)] || !keep[g.target(a)]) continue;
    arrow_map[a] = arrows.size();
    arrows.push_back({g.arrows()[a].id, unit_map[g.source(a)], unit_map[g.target(a)]});
  }
  std::vector<std::size_t> inverse(arrows.size());
  for (std::size_t a = 0; a < g.arrow_count(); ++a)
    if (arrow_map[a] < g.arrow_count()) inverse[arrow_map[a]] = arrow_map[g.inverse(a)];
  std::vector<CompositionEntry> composition;
  for (const CompositionEntry& e : g.composition_entries()) {
    if (arrow_map[e.outer] < g.arrow_count() && arrow_map[e.inner] < g.arrow_count()) {
      composition.push_back({arrow_map[e.outer], arrow_map[e.inner], arrow_map[e.result]});
    }
  }
  return FiniteMeasuredGroupoid::from_tables(std::move(new_units), std::move(new_mu), std::move(arrows),
                                             std::move(inverse), composition);
}

FiniteMeasuredGroupoid restrict_to_support(const FiniteMeasuredGroupoid& g) {
  std::vector<std::size_t> support;
  for (std::size_t x = 0; x < g.unit_count(); ++x)
    if (g.positive(x)) support.push_back(x);
  return restrict_groupoid(g, support);
}

Fibers fibers(const FiniteMeasuredGroupoid& g, std::size_t unit) {
  if (unit >= g.unit_count()) throw Error(ErrorKind::UnknownUnit, "unit index " + std::to_string(unit));
  Fibers f;
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    if (g.source(a) == unit) f.source.push_back(a);
    if (g.target(a) == unit) f.target.push_back(a);
  }
  return f;
}

}  // namespace unitarizer
