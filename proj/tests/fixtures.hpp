#ifndef NIKISHIN_TESTS_FIXTURES_HPP_
#define NIKISHIN_TESTS_FIXTURES_HPP_

#include <vector>

#include "nikishin/nikishin_system.hpp"
#include "test_util.hpp"

namespace nikishin::testing {

inline AtomicMeasure<R> atoms(std::vector<R> x, std::vector<R> w, int sign, R a, R b) {
  return AtomicMeasure<R>(std::move(x), std::move(w), sign, Interval<R>(std::move(a), std::move(b)));
}

inline MeasureSpec<R> legendre_spec(R a, R b, int nodes, R scale = R(1)) {
  MeasureSpec<R> s;
  s.kind = MeasureKind::kLegendreDensity;
  s.interval = Interval<R>(std::move(a), std::move(b));
  s.node_count = nodes;
  s.density_scale = std::move(scale);
  return s;
}

// m = 1, two symmetric atoms: s^(z) = z / (z^2 - 1).
inline NikishinSystem<R> fixture_f1() {
  return NikishinSystem<R>({atoms({R(-1), R(1)}, {R(0.5), R(0.5)}, 1, R(-1), R(1))});
}

// Legendre-discretized generators on [-1,0], [1,3], [4,6] (first m of them).
inline NikishinSystem<R> legendre_chain(int m, int nodes, R scale = R(1)) {
  std::vector<MeasureSpec<R>> spec;
  const double ends[3][2] = {{-1, 0}, {1, 3}, {4, 6}};
  for (int j = 0; j < m; ++j) spec.push_back(legendre_spec(R(ends[j][0]), R(ends[j][1]), nodes, scale));
  return build_system(spec);
}

// The m = 2 fixture with 32-node generators on [-1,0] and [1,3].
inline NikishinSystem<R> fixture_f2() { return legendre_chain(2, 32); }

}  // namespace nikishin::testing

#endif  // NIKISHIN_TESTS_FIXTURES_HPP_
