#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "unitarizer/errors.hpp"
#include "unitarizer/linalg.hpp"
#include "unitarizer/spd_geometry.hpp"

namespace test {

using namespace unitarizer;

template <class F>
bool throws_kind(F&& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  } catch (...) {
    return false;
  }
  return false;
}

#define CHECK_THROWS_KIND(expr, kind) CHECK(::test::throws_kind([&] { (void)(expr); }, kind))

inline ComplexMatrix diag(std::initializer_list<double> values) {
  const std::vector<double> v(values);
  return ComplexMatrix::diagonal(v);
}

inline ComplexMatrix real_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<Complex>> out;
  for (const auto& r : rows) {
    std::vector<Complex> row;
    for (double v : r) row.emplace_back(v);
    out.push_back(std::move(row));
  }
  return ComplexMatrix::from_rows(out);
}

inline SpdPoint spd_diag(std::initializer_list<double> values) { return SpdPoint::from(diag(values)); }

/// ||a - b||_2
inline double gap(const ComplexMatrix& a, const ComplexMatrix& b) { return l2_norm(a - b); }

}  // namespace test
