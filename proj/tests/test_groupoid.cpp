#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "support.hpp"
#include "unitarizer/groupoid.hpp"

using namespace unitarizer;

namespace {

ActionGroupoidSpec swap_spec(double mu0, double mu1) {
  ActionGroupoidSpec s;
  s.group = GroupTable::cyclic(2);
  s.units = {"x0", "x1"};
  s.mu = {mu0, mu1};
  s.action = {{0, 1}, {1, 0}};
  return s;
}

ActionGroupoidSpec trivial_spec(std::vector<double> mu) {
  ActionGroupoidSpec s;
  s.group = GroupTable::cyclic(1);
  for (std::size_t x = 0; x < mu.size(); ++x) s.units.push_back("x" + std::to_string(x));
  s.mu = std::move(mu);
  s.action = {{}};
  for (std::size_t x = 0; x < s.units.size(); ++x) s.action[0].push_back(x);
  return s;
}

// Z/n acting on n points by rotation, with the given weights.
ActionGroupoidSpec rotation_spec(std::size_t n, std::vector<double> mu) {
  ActionGroupoidSpec s;
  s.group = GroupTable::cyclic(n);
  for (std::size_t x = 0; x < n; ++x) s.units.push_back("x" + std::to_string(x));
  s.mu = std::move(mu);
  for (std::size_t a = 0; a < n; ++a) {
    s.action.emplace_back();
    for (std::size_t x = 0; x < n; ++x) s.action[a].push_back((a + x) % n);
  }
  return s;
}

std::string error_message(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Exhaustive axiom audit independent of the constructor's own checks.
void audit_axioms(const FiniteMeasuredGroupoid& g) {
  const std::size_t na = g.arrow_count();
  for (std::size_t x = 0; x < g.unit_count(); ++x) {
    const std::size_t e = g.unit_arrow(x);
    CHECK(g.source(e) == x);
    CHECK(g.target(e) == x);
  }
  for (std::size_t a = 0; a < na; ++a) {
    CHECK(g.compose(g.unit_arrow(g.target(a)), a) == a);
    CHECK(g.compose(a, g.unit_arrow(g.source(a))) == a);
    const std::size_t ai = g.inverse(a);
    CHECK(g.inverse(ai) == a);
    CHECK(g.source(ai) == g.target(a));
    CHECK(g.compose(ai, a) == g.unit_arrow(g.source(a)));
    CHECK(g.compose(a, ai) == g.unit_arrow(g.target(a)));
    for (std::size_t b = 0; b < na; ++b) {
      if (!g.composable(b, a)) continue;
      for (std::size_t c = 0; c < na; ++c)
        if (g.composable(c, b)) CHECK(g.compose(g.compose(c, b), a) == g.compose(c, g.compose(b, a)));
    }
  }
}

}  // namespace

TEST_CASE("group tables") {
  const GroupTable z5 = GroupTable::cyclic(5);
  CHECK_NOTHROW(z5.validate());
  CHECK(z5.multiply(3, 4) == 2);
  CHECK(z5.inverses[2] == 3);

  const GroupTable s3 = GroupTable::symmetric(3);
  CHECK(s3.order() == 6);
  CHECK(s3.elements.front() == "012");
  CHECK_NOTHROW(s3.validate());
  CHECK(GroupTable::symmetric(4).order() == 24);
  // (a * b)(i) = a(b(i))
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      const auto pa = GroupTable::permutation_of(s3, a);
      const auto pb = GroupTable::permutation_of(s3, b);
      const auto pab = GroupTable::permutation_of(s3, s3.multiply(a, b));
      for (std::size_t i = 0; i < 3; ++i) CHECK(pab[i] == pa[pb[i]]);
    }

  GroupTable broken = GroupTable::cyclic(3);
  broken.mult[1][1] = 1;
  CHECK_THROWS_KIND(broken.validate(), ErrorKind::InvalidAction);
  CHECK_THROWS_KIND(GroupTable::cyclic(0), ErrorKind::InvalidAction);
}

TEST_CASE("action specs are validated") {
  ActionGroupoidSpec bad = swap_spec(0.5, 0.5);
  bad.action[0] = {1, 0};  // identity moves points
  CHECK_THROWS_KIND(build_action_groupoid(bad), ErrorKind::InvalidAction);

  // Z/3 cannot act by a transposition
  ActionGroupoidSpec z3 = rotation_spec(3, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  z3.action[1] = {1, 0, 2};
  z3.action[2] = {1, 0, 2};
  CHECK_THROWS_KIND(build_action_groupoid(z3), ErrorKind::InvalidAction);

  ActionGroupoidSpec out_of_range = swap_spec(0.5, 0.5);
  out_of_range.action[1] = {2, 0};
  CHECK_THROWS_KIND(build_action_groupoid(out_of_range), ErrorKind::InvalidAction);
}

TEST_CASE("action groupoid examples") {
  SUBCASE("Z/2 swap") {
    const FiniteMeasuredGroupoid g = build_action_groupoid(swap_spec(0.5, 0.5));
    CHECK(g.arrow_count() == 4);
    for (std::size_t x = 0; x < 2; ++x) CHECK(fibers(g, x).target.size() == 2);
    const std::size_t s0 = *g.find_arrow("1@x0");
    CHECK(g.source(s0) == 0);
    CHECK(g.target(s0) == 1);
    CHECK(g.inverse(s0) == *g.find_arrow("1@x1"));
    CHECK(g.compose(*g.find_arrow("1@x1"), s0) == g.unit_arrow(0));
  }
  SUBCASE("trivial group gives only unit arrows") {
    const FiniteMeasuredGroupoid g = build_action_groupoid(trivial_spec({0.25, 0.25, 0.5}));
    CHECK(g.arrow_count() == 3);
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(g.source(a) == g.target(a));
      CHECK(g.unit_arrow(g.source(a)) == a);
    }
  }
  SUBCASE("Z/3 rotation composes by addition") {
    const ActionGroupoidSpec spec = rotation_spec(3, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const FiniteMeasuredGroupoid g = build_action_groupoid(spec);
    for (std::size_t x = 0; x < 3; ++x) {
      const std::size_t first = action_arrow(spec, 1, x);
      const std::size_t second = action_arrow(spec, 1, (x + 1) % 3);
      CHECK(g.compose(second, first) == action_arrow(spec, 2, x));
    }
  }
  SUBCASE("composition requires matching endpoints") {
    const FiniteMeasuredGroupoid g = build_action_groupoid(swap_spec(0.5, 0.5));
    CHECK_THROWS_KIND(g.compose(g.unit_arrow(0), g.unit_arrow(1)), ErrorKind::InvalidGroupoid);
  }
}

TEST_CASE("axioms hold on every constructed groupoid") {
  std::vector<ActionGroupoidSpec> specs = {swap_spec(0.5, 0.5), swap_spec(0.0, 1.0), trivial_spec({1.0, 0.0}),
                                           rotation_spec(5, std::vector<double>(5, 0.2))};
  specs.push_back(ActionGroupoidSpec::regular(GroupTable::symmetric(3)));
  // S3 acting on {0,1,2} by permutation
  ActionGroupoidSpec perm;
  perm.group = GroupTable::symmetric(3);
  perm.units = {"p0", "p1", "p2"};
  perm.mu = {0.5, 0.25, 0.25};
  for (std::size_t a = 0; a < 6; ++a) perm.action.push_back(GroupTable::permutation_of(perm.group, a));
  specs.push_back(perm);
  for (const auto& spec : specs) {
    const FiniteMeasuredGroupoid g = build_action_groupoid(spec);
    audit_axioms(g);
    for (std::size_t x = 0; x < g.unit_count(); ++x) {
      const Fibers f = fibers(g, x);
      CHECK(f.source.size() == spec.group.order());
      CHECK(f.target.size() == spec.group.order());
    }
    // the explicit round trip is the same groupoid
    const auto entries = g.composition_entries();
    const FiniteMeasuredGroupoid copy = FiniteMeasuredGroupoid::from_tables(
        g.units(), g.mu(), g.arrows(), [&] {
          std::vector<std::size_t> inv;
          for (std::size_t a = 0; a < g.arrow_count(); ++a) inv.push_back(g.inverse(a));
          return inv;
        }(), entries);
    CHECK(copy.composition_entries().size() == entries.size());
  }
}

TEST_CASE("explicit tables reject broken axioms") {
  const FiniteMeasuredGroupoid good = build_action_groupoid(swap_spec(0.5, 0.5));
  std::vector<std::size_t> inverse;
  for (std::size_t a = 0; a < good.arrow_count(); ++a) inverse.push_back(good.inverse(a));
  const auto entries = good.composition_entries();

  SUBCASE("weights") {
    CHECK_THROWS_KIND(FiniteMeasuredGroupoid::from_tables(good.units(), {0.5, 0.6}, good.arrows(), inverse, entries),
                      ErrorKind::InvalidGroupoid);
    CHECK_THROWS_KIND(FiniteMeasuredGroupoid::from_tables(good.units(), {1.5, -0.5}, good.arrows(), inverse, entries),
                      ErrorKind::InvalidGroupoid);
  }
  SUBCASE("inverse not an involution") {
    auto inv = inverse;
    std::swap(inv[0], inv[1]);
    CHECK_THROWS_KIND(FiniteMeasuredGroupoid::from_tables(good.units(), good.mu(), good.arrows(), inv, entries),
                      ErrorKind::InvalidGroupoid);
  }
  SUBCASE("missing composition") {
    std::vector<CompositionEntry> partial(entries.begin(), entries.end() - 1);
    const std::string msg = error_message(
        [&] { FiniteMeasuredGroupoid::from_tables(good.units(), good.mu(), good.arrows(), inverse, partial); });
    CHECK(msg.find("composition missing") != std::string::npos);
  }
  SUBCASE("non-associative loop names the failing triple") {
    // A five-element loop with two-sided inverses that is not associative.
    const std::size_t table[5][5] = {
        {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
    std::vector<Arrow> arrows;
    std::vector<CompositionEntry> comp;
    for (std::size_t a = 0; a < 5; ++a) {
      arrows.push_back({"l" + std::to_string(a), 0, 0});
      for (std::size_t b = 0; b < 5; ++b) comp.push_back({a, b, table[a][b]});
    }
    const std::string msg =
        error_message([&] { FiniteMeasuredGroupoid::from_tables({"x"}, {1.0}, arrows, {0, 1, 2, 3, 4}, comp); });
    CHECK(msg.find("associativity fails") != std::string::npos);
    CHECK(msg.find("l1") != std::string::npos);
  }
  SUBCASE("duplicate ids") {
    auto arrows = good.arrows();
    arrows[1].id = arrows[0].id;
    CHECK_THROWS_KIND(FiniteMeasuredGroupoid::from_tables(good.units(), good.mu(), arrows, inverse, entries),
                      ErrorKind::InvalidGroupoid);
  }
}

TEST_CASE("invariance verdicts on the Z/2 swap") {
  CHECK(check_invariance(build_action_groupoid(swap_spec(0.5, 0.5))) == InvarianceVerdict::invariant);
  CHECK(check_invariance(build_action_groupoid(swap_spec(1.0 / 3, 2.0 / 3))) == InvarianceVerdict::quasi_invariant);
  CHECK(check_invariance(build_action_groupoid(swap_spec(0.0, 1.0))) == InvarianceVerdict::neither);
  CHECK(to_string(InvarianceVerdict::quasi_invariant) == "quasi_invariant");
  // uniform weights with any action
  CHECK(check_invariance(build_action_groupoid(ActionGroupoidSpec::regular(GroupTable::symmetric(4)))) ==
        InvarianceVerdict::invariant);
  // non-transitive actions may carry non-uniform invariant weights
  CHECK(check_invariance(build_action_groupoid(trivial_spec({0.1, 0.9}))) == InvarianceVerdict::invariant);
}

TEST_CASE("inverse preserves nu exactly when invariant") {
  for (const auto& spec : {swap_spec(0.5, 0.5), swap_spec(0.2, 0.8), swap_spec(0.0, 1.0),
                           rotation_spec(4, {0.25, 0.25, 0.25, 0.25}), rotation_spec(4, {0.1, 0.2, 0.3, 0.4})}) {
    const FiniteMeasuredGroupoid g = build_action_groupoid(spec);
    const auto nu = arrow_measure(g);
    bool preserved = true;
    for (std::size_t a = 0; a < g.arrow_count(); ++a) preserved = preserved && nu[a] == nu[g.inverse(a)];
    CHECK(preserved == (check_invariance(g) == InvarianceVerdict::invariant));
  }
}

TEST_CASE("ergodicity examples") {
  CHECK(check_ergodic(build_action_groupoid(swap_spec(0.5, 0.5))));
  CHECK_FALSE(check_ergodic(build_action_groupoid(trivial_spec({0.5, 0.5}))));
  CHECK(check_ergodic(build_action_groupoid(trivial_spec({1.0, 0.0}))));
  CHECK(check_ergodic(build_action_groupoid(ActionGroupoidSpec::regular(GroupTable::symmetric(3)))));

  // Z/2 acting on four points with two orbits, one of them null
  ActionGroupoidSpec two_orbits;
  two_orbits.group = GroupTable::cyclic(2);
  two_orbits.units = {"a", "b", "c", "d"};
  two_orbits.action = {{0, 1, 2, 3}, {1, 0, 3, 2}};
  two_orbits.mu = {0.5, 0.5, 0.0, 0.0};
  CHECK(check_ergodic(build_action_groupoid(two_orbits)));
  two_orbits.mu = {0.25, 0.25, 0.5, 0.0};
  CHECK_FALSE(check_ergodic(build_action_groupoid(two_orbits)));
}

TEST_CASE("nu identity on random arrow subsets") {
  const ActionGroupoidSpec spec = rotation_spec(6, {0.05, 0.1, 0.15, 0.2, 0.2, 0.3});
  const FiniteMeasuredGroupoid g = build_action_groupoid(spec);
  const auto nu = arrow_measure(g);
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> subset;
    for (std::size_t a = 0; a < g.arrow_count(); ++a)
      if (coin(rng)) subset.push_back(a);
    double direct = 0.0;
    for (std::size_t a : subset) direct += nu[a];
    double by_fiber = 0.0;
    for (std::size_t x = 0; x < g.unit_count(); ++x) {
      const auto t = fibers(g, x).target;
      const auto hits = std::count_if(t.begin(), t.end(), [&](std::size_t a) {
        return std::find(subset.begin(), subset.end(), a) != subset.end();
      });
      by_fiber += static_cast<double>(hits) * g.mu()[x];
    }
    // summation order differs, so allow a few ulps per term
    const double roundoff = 4.0 * g.arrow_count() * std::numeric_limits<double>::epsilon() * (1.0 + by_fiber);
    CHECK(std::abs(direct - by_fiber) <= roundoff);
    CHECK(std::abs(measure_of(g, subset) - by_fiber) <= roundoff);
  }
  for (std::size_t a = 0; a < g.arrow_count(); ++a) CHECK(nu[a] == g.mu()[g.target(a)]);
}

TEST_CASE("restriction examples") {
  const FiniteMeasuredGroupoid swap = build_action_groupoid(swap_spec(0.5, 0.5));
  SUBCASE("all units") {
    const std::vector<std::size_t> all = {0, 1};
    const FiniteMeasuredGroupoid r = restrict_groupoid(swap, all);
    CHECK(r.arrow_count() == swap.arrow_count());
    CHECK(r.mu() == swap.mu());
    CHECK(r.composition_entries().size() == swap.composition_entries().size());
  }
  SUBCASE("one unit keeps only its unit arrow") {
    const std::vector<std::size_t> one = {1};
    const FiniteMeasuredGroupoid r = restrict_groupoid(swap, one);
    CHECK(r.unit_count() == 1);
    CHECK(r.arrow_count() == 1);
    CHECK(r.arrows()[0].id == "0@x1");
    CHECK(r.mu()[0] == 1.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_KIND(restrict_groupoid(swap, std::vector<std::size_t>{}), ErrorKind::EmptyRestriction);
    const FiniteMeasuredGroupoid skewed = build_action_groupoid(trivial_spec({1.0, 0.0}));
    CHECK_THROWS_KIND(restrict_groupoid(skewed, std::vector<std::size_t>{1}), ErrorKind::ZeroMassRestriction);
  }
  SUBCASE("support restriction preserves the ergodicity verdict") {
    for (const auto& mu : std::vector<std::vector<double>>{{1.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.2, 0.3, 0.5}}) {
      const FiniteMeasuredGroupoid g = build_action_groupoid(trivial_spec(mu));
      CHECK(check_ergodic(restrict_to_support(g)) == check_ergodic(g));
    }
    ActionGroupoidSpec two_orbits;
    two_orbits.group = GroupTable::cyclic(2);
    two_orbits.units = {"a", "b", "c", "d"};
    two_orbits.action = {{0, 1, 2, 3}, {1, 0, 3, 2}};
    two_orbits.mu = {0.5, 0.5, 0.0, 0.0};
    const FiniteMeasuredGroupoid g = build_action_groupoid(two_orbits);
    const FiniteMeasuredGroupoid s = restrict_to_support(g);
    CHECK(s.unit_count() == 2);
    CHECK(check_ergodic(s) == check_ergodic(g));
    audit_axioms(s);
  }
}

TEST_CASE("fibers") {
  const FiniteMeasuredGroupoid swap = build_action_groupoid(swap_spec(0.5, 0.5));
  const Fibers f = fibers(swap, 1);
  REQUIRE(f.source.size() == 2);
  CHECK(swap.arrows()[f.source[0]].id == "0@x1");
  CHECK(swap.arrows()[f.source[1]].id == "1@x1");
  for (std::size_t x = 0; x < 2; ++x) {
    const Fibers fx = fibers(swap, x);
    const std::size_t e = swap.unit_arrow(x);
    CHECK(std::find(fx.source.begin(), fx.source.end(), e) != fx.source.end());
    CHECK(std::find(fx.target.begin(), fx.target.end(), e) != fx.target.end());
    CHECK(std::is_sorted(fx.source.begin(), fx.source.end()));
  }
  CHECK_THROWS_KIND(fibers(swap, 2), ErrorKind::UnknownUnit);
  CHECK_THROWS_KIND(swap.unit_index("nowhere"), ErrorKind::UnknownUnit);
  CHECK(swap.unit_index("x1") == 1);
}
