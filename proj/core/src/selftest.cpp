#include "unitarizer/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "unitarizer/random.hpp"
#include "unitarizer/spd_geometry.hpp"

namespace unitarizer {

std::vector<PropertyOutcome> run_geometry_selftest(const SelftestOptions& options) {
  if (options.trials == 0) throw Error(ErrorKind::ParameterOutOfRange, "trials must be at least 1");
  if (!(options.max_cond >= 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "max_cond must be >= 1");
  std::vector<PropertyOutcome> out{{"semi_parallelogram"}, {"congruence"}, {"triangle"}, {"geodesic_speed"}};
  const double limits[] = {options.tolerances.semi_parallelogram, options.tolerances.congruence,
                           options.tolerances.triangle, options.tolerances.geodesic_speed};
  auto record = [&](std::size_t k, double violation) {
    // NaN counts as a failure
    if (violation <= limits[k]) {
      ++out[k].passed;
    } else {
      ++out[k].failed;
    }
    out[k].max_violation = std::max(out[k].max_violation, std::isnan(violation) ? INFINITY : violation);
  };

  Rng rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_cond = std::log(options.max_cond);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const std::size_t n = options.dim == 0 ? 1 + trial % 8 : options.dim;
    auto draw = [&] { return random_spd(n, std::exp(log_cond * unit(rng)), rng); };
    const SpdPoint a = draw();
    const SpdPoint b = draw();
    const SpdPoint c = draw();
    const double ab = distance(a, b);
    const double bc = distance(b, c);
    const double ac = distance(a, c);

    const SpdPoint m = midpoint(a, b);
    const double ca2 = ac * ac;
    const double cb2 = bc * bc;
    const double cm = distance(c, m);
    record(0, (cm * cm - 0.5 * (ca2 + cb2) + 0.25 * ab * ab) / std::max(1.0, ca2 + cb2));

    const ComplexMatrix g = random_invertible(n, 1.0 + 9.0 * unit(rng), rng);
    record(1, std::abs(distance(congruence(g, a), congruence(g, b)) - ab) / std::max(1.0, ab));

    record(2, (ac - ab - bc) / std::max(1.0, ac));

    const double s = unit(rng);
    const double t = unit(rng);
    const double along = distance(geodesic(a, b, s), geodesic(a, b, t));
    record(3, std::abs(along - std::abs(s - t) * ab) / std::max(1.0, ab));
  }
  return out;
}

}  // namespace unitarizer
