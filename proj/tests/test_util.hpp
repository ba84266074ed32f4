#ifndef NIKISHIN_TESTS_TEST_UTIL_HPP_
#define NIKISHIN_TESTS_TEST_UTIL_HPP_

#include <gtest/gtest.h>

#include <string>

#include "nikishin/complex.hpp"
#include "nikishin/real.hpp"

namespace nikishin::testing {

using R = mp::Real;
using C = Complex<R>;

inline ::testing::AssertionResult near(const R& a, const R& b, const R& tol) {
  using std::abs;
  R d = abs(a - b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.str(20) << " vs " << b.str(20) << " differ by " << d.str(6)
                                       << " > " << tol.str(6);
}

inline ::testing::AssertionResult near(const C& a, const C& b, const R& tol) {
  R d = abs(a - b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "complex values differ by " << d.str(6) << " > " << tol.str(6);
}

inline R tol_exp10(int e) { return pow(R(10), static_cast<long>(e)); }

}  // namespace nikishin::testing

#endif  // NIKISHIN_TESTS_TEST_UTIL_HPP_
