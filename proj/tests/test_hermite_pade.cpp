#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "nikishin/hermite_pade.hpp"

namespace nikishin::testing {
namespace {

using Poly = Polynomial<R>;

R half_tol() { return half_precision_tol<R>(); }

// Unit mass at 0: s^(z) = 1/z, moments (1, 0, 0, ...).
NikishinSystem<R> unit_mass() { return NikishinSystem<R>({atoms({R(0)}, {R(1)}, 1, R(-1), R(1))}); }

RationalFn<R> simple_pole(const R& p) { return RationalFn<R>(Poly{R(1)}, Poly{-p, R(1)}); }

TEST(MultiIndex, Validation) {
  EXPECT_THROW(MultiIndex({0, 0}), Error);
  EXPECT_THROW(MultiIndex({2, -1}), Error);
  EXPECT_THROW(MultiIndex(std::vector<int>{}), Error);
  MultiIndex n{3, 1, 2};
  EXPECT_EQ(n.total(), 6);
  EXPECT_EQ(n.max(), 3);
  EXPECT_EQ(n.spread(), 2);
  EXPECT_EQ(n[1], 3);
  EXPECT_EQ(n.str(), "(3,1,2)");
}

TEST(AssembleType1, Examples) {
  LaurentTail<R> t;
  t.coeffs = {R(1), R(0), R(1), R(0), R(1)};
  auto A = assemble_type1_system<R>({t}, MultiIndex{2}, 0);
  ASSERT_EQ(A.rows(), 1u);
  ASSERT_EQ(A.cols(), 2u);
  EXPECT_EQ(A(0, 0), R(1));
  EXPECT_EQ(A(0, 1), R(0));

  auto B = assemble_type1_system<R>({t}, MultiIndex{1}, 0);
  EXPECT_EQ(B.rows(), 0u);
  EXPECT_EQ(B.cols(), 1u);

  auto E = assemble_type1_system<R>({t}, MultiIndex{3}, 2);
  EXPECT_EQ(E.rows(), 0u);
}

TEST(AssembleType1, Rejections) {
  LaurentTail<R> t;
  t.coeffs = {R(1), R(2)};
  EXPECT_THROW(assemble_type1_system<R>({t}, MultiIndex{3}, 0), Error);
  EXPECT_THROW(assemble_type1_system<R>({t, t}, MultiIndex{1}, 0), Error);
  EXPECT_THROW(assemble_type1_system<R>({t}, MultiIndex{1}, -1), Error);
}

TEST(AssembleType1, OneMoreColumnThanRows) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(0, 5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> n = {d(rng), d(rng), d(rng)};
    if (n[0] + n[1] + n[2] == 0) n[0] = 1;
    MultiIndex mi(n);
    LaurentTail<R> t;
    t.coeffs.assign(40, R(1));
    auto A = assemble_type1_system<R>({t, t, t}, mi, 0);
    EXPECT_EQ(A.cols(), A.rows() + 1) << mi.str();
    EXPECT_EQ(static_cast<int>(A.cols()), mi.total());
  }
}

TEST(AssembleType1, EntriesAreShiftedTailValues) {
  LaurentTail<R> t1, t2;
  for (int i = 0; i < 12; ++i) {
    t1.coeffs.push_back(R(i + 1));
    t2.coeffs.push_back(R(100 + i));
  }
  MultiIndex n{2, 3};
  auto A = assemble_type1_system<R>({t1, t2}, n, 1);
  ASSERT_EQ(A.rows(), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(A(t, l), t1[l + t]);
    for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(A(t, 2 + l), t2[l + t]);
  }
}

TEST(SolveType1, TwoAtomExample) {
  auto sys = fixture_f1();
  auto v = solve_type1(sys, MultiIndex{2});
  ASSERT_EQ(v.a.size(), 2u);
  EXPECT_TRUE(near(v.a[1].coeff(1), R(1), tol_exp10(-60)));
  EXPECT_TRUE(near(v.a[1].coeff(0), R(0), tol_exp10(-60)));
  ASSERT_LE(v.a[0].degree(), 0);
  EXPECT_TRUE(near(v.a[0].coeff(0), R(-1), tol_exp10(-60)));
  EXPECT_GE(v.residual_order, 2);
  EXPECT_FALSE(v.info.nullity_flag);
  // z s^ - 1 = 1/(z^2 - 1)
  EXPECT_TRUE(near(remainder_eval<R>(sys, nullptr, v, 0, C(R(2))), C(R(1) / R(3)), tol_exp10(-60)));
  EXPECT_TRUE(near(remainder_eval<R>(sys, nullptr, v, 1, C(R(2), R(1))), C(R(2), R(1)), tol_exp10(-60)));
}

TEST(SolveType1, NoConditions) {
  auto v = solve_type1(fixture_f1(), MultiIndex{1});
  EXPECT_EQ(v.a[1].degree(), 0);
  EXPECT_TRUE(near(v.a[1].coeff(0), R(1), tol_exp10(-70)));
  EXPECT_TRUE(v.a[0].is_zero() || abs(v.a[0].coeff(0)) < tol_exp10(-70));
}

TEST(SolveType1, Normalization) {
  auto sys = fixture_f2();
  for (auto n : {MultiIndex{3, 2}, MultiIndex{2, 2}, MultiIndex{4, 0}, MultiIndex{1, 3}}) {
    auto v = solve_type1(sys, n);
    R big(0);
    for (std::size_t j = 1; j <= 2; ++j) {
      EXPECT_LE(v.a[j].degree(), n[j] - 1);
      big = std::max(big, v.a[j].max_abs_coeff());
    }
    EXPECT_TRUE(near(big, R(1), tol_exp10(-70))) << n.str();
    const auto& last = v.a[2].is_zero() ? v.a[1] : v.a[2];
    EXPECT_GT(last.leading(), R(0));
    EXPECT_LE(v.a[0].degree(), std::max(n.max() - 2, 0));
  }
}

TEST(SolveType1, AchievedOrder) {
  auto sys = fixture_f2();
  for (auto [n, M] : std::vector<std::pair<MultiIndex, int>>{
           {MultiIndex{3, 3}, 0}, {MultiIndex{4, 3}, 0}, {MultiIndex{5, 5}, 0}, {MultiIndex{4, 4}, 2}, {MultiIndex{3, 5}, 1}}) {
    auto v = solve_type1(sys, n, M);
    EXPECT_GE(v.residual_order, n.total() - M) << n.str() << " M=" << M;
    // Independent check: direct expansion of a_0 + sum a_j s^_{1,j}.
    const std::size_t order = static_cast<std::size_t>(n.total() - 1 - M);
    for (std::size_t k = 0; k < order; ++k) {
      R e(0), scale(0);
      for (std::size_t j = 1; j <= 2; ++j) {
        auto c = moments(sys.s(1, j), 40);
        for (int l = 0; l <= v.a[j].degree(); ++l) {
          R term = v.a[j].coeff(l) * c[static_cast<std::size_t>(l) + k];
          e += term;
          scale += abs(term);
        }
      }
      EXPECT_LE(abs(e), half_tol() * scale) << n.str() << " coefficient " << k;
    }
  }
}

TEST(SolveType1, OrthogonalityOfFirstLevelRemainder) {
  auto sys = fixture_f2();
  for (int k = 1; k <= 6; ++k) {
    auto v = solve_type1(sys, MultiIndex{k, k});
    auto res = check_orthogonality(sys, v, 0);
    EXPECT_LE(res.residual, half_tol() * res.scale) << "k=" << k;
  }
  auto v = solve_type1(fixture_f1(), MultiIndex{2});
  auto res = check_orthogonality(fixture_f1(), v, 0);
  EXPECT_LE(res.residual, tol_exp10(-70));
  auto w = solve_type1(sys, MultiIndex{2, 2}, 3);
  EXPECT_EQ(check_orthogonality(sys, w, 3).residual, R(0));
}

TEST(SolveType1, IntegralRepresentation) {
  auto sys = fixture_f2();
  auto v = solve_type1(sys, MultiIndex{3, 3});
  const auto& s1 = sys.generator(1);
  for (const C& z : {C(R(2), R(1)), C(R(-3)), C(R(0.5), R(-2))}) {
    C lhs = remainder_eval<R>(sys, nullptr, v, 0, z);
    C rhs(R(0));
    auto comps = v.components();
    for (std::size_t i = 0; i < s1.size(); ++i) {
      R a1 = first_level_remainder(sys, comps, s1.nodes()[i]);
      rhs += C(a1 * s1.weights()[i] * R(s1.sign())) / (z - C(s1.nodes()[i]));
    }
    EXPECT_TRUE(near(lhs, rhs, tol_exp10(-50)));
  }
}

TEST(SolveType1, ScalingFirstGeneratorKeepsComponents) {
  auto base = fixture_f2();
  const R lambda(7);
  NikishinSystem<R> scaled({base.generator(1).scaled(lambda), base.generator(2)});
  MultiIndex n{3, 2};
  auto v = solve_type1(base, n);
  auto u = solve_type1(scaled, n);
  for (std::size_t j = 1; j <= 2; ++j) {
    for (int l = 0; l < n[j]; ++l) EXPECT_TRUE(near(v.a[j].coeff(l), u.a[j].coeff(l), tol_exp10(-50)));
  }
  for (int l = 0; l <= v.a[0].degree(); ++l) EXPECT_TRUE(near(lambda * v.a[0].coeff(l), u.a[0].coeff(l), tol_exp10(-50)));
}

TEST(SolveType1, AtomicExactness) {
  NikishinSystem<R> sys({atoms({R(-0.5), R(0.25), R(0.75)}, {R(1), R(2), R(0.5)}, 1, R(-1), R(1))});
  auto v = solve_type1(sys, MultiIndex{4});
  auto q = Poly::from_roots(std::vector<R>{R(-0.5), R(0.25), R(0.75)});
  R c0 = (remainder_eval<R>(sys, nullptr, v, 0, C(R(3))) * q(C(R(3)))).re;
  for (const C& z : {C(R(2), R(1)), C(R(-4)), C(R(0), R(5))}) {
    EXPECT_TRUE(near(remainder_eval<R>(sys, nullptr, v, 0, z) * q(z), C(c0), tol_exp10(-50)));
  }
}

TEST(SolveType1, EscalatesPrecisionWhenOrderFails) {
  mp::PrecisionScope scope(64);
  auto sys = fixture_f2();
  auto v = solve_type1(sys, MultiIndex{10, 10});
  EXPECT_GT(v.info.precision_used, 64);
  EXPECT_GE(v.residual_order, 20);
}

TEST(SolveType1, DoubleInstantiation) {
  AtomicMeasure<double> mu({-1.0, 1.0}, {0.5, 0.5}, 1, Interval<double>(-1.0, 1.0));
  NikishinSystem<double> sys({mu});
  auto v = solve_type1(sys, MultiIndex{2});
  EXPECT_NEAR(v.a[1].coeff(1), 1.0, 1e-12);
  EXPECT_NEAR(v.a[0].coeff(0), -1.0, 1e-12);
}

TEST(Perturbation, Validation) {
  auto sys = fixture_f2();
  EXPECT_THROW(RationalPerturbation<R>(sys, {simple_pole(R(5))}), Error);
  EXPECT_THROW(RationalPerturbation<R>(sys, {simple_pole(R(5)), simple_pole(R(5))}), Error);
  EXPECT_THROW(RationalPerturbation<R>(sys, {simple_pole(R(-0.5)), RationalFn<R>()}), Error);
  EXPECT_THROW(RationalPerturbation<R>(sys, {RationalFn<R>(), simple_pole(R(2))}), Error);
  // Poles on Delta_2 are fine when m = 2 only if Delta_2 is Delta_m; here it is.
  RationalPerturbation<R> ok(sys, {simple_pole(R(5)), simple_pole(R(-5))});
  EXPECT_EQ(ok.D(), 2);
  EXPECT_EQ(ok.poles().size(), 2u);
}

TEST(Perturbation, ClustersRepeatedPoles) {
  auto sys = fixture_f2();
  RationalFn<R> double_pole(Poly{R(1)}, Poly{R(25), R(-10), R(1)});
  RationalPerturbation<R> p(sys, {double_pole, RationalFn<R>()});
  EXPECT_EQ(p.D(), 2);
  ASSERT_EQ(p.poles().size(), 1u);
  EXPECT_EQ(p.poles()[0].multiplicity, 2);
  EXPECT_TRUE(near(p.poles()[0].zeta, C(R(5)), tol_exp10(-30)));
}

TEST(SolveType1Perturbed, ZeroPerturbationMatchesPlain) {
  auto sys = fixture_f2();
  MultiIndex n{3, 3};
  auto plain = solve_type1(sys, n);
  auto pert = solve_type1_perturbed(sys, RationalPerturbation<R>::none(2), n);
  for (std::size_t j = 0; j <= 2; ++j) EXPECT_EQ(plain.a[j], pert.a[j]);
}

TEST(SolveType1Perturbed, UnitMassWithPoleAtThree) {
  auto sys = unit_mass();
  RationalPerturbation<R> p(sys, {simple_pole(R(3))});
  auto v = solve_type1_perturbed(sys, p, MultiIndex{2});
  ASSERT_EQ(v.a[1].degree(), 1);
  EXPECT_TRUE(near(v.a[1].coeff(0) / v.a[1].coeff(1), R(-1.5), tol_exp10(-60)));

  auto rep = perturbed_reduce(p, v, sys);
  Poly expected = Poly{R(-3), R(1)} * v.a[0] + v.a[1];
  ASSERT_EQ(rep.p0.degree(), expected.degree());
  for (int i = 0; i <= expected.degree(); ++i) EXPECT_TRUE(near(rep.p0.coeff(i), expected.coeff(i), tol_exp10(-60)));
  EXPECT_LE(rep.max_violation, half_tol() * std::max(rep.scale, R(1)));
  EXPECT_EQ(rep.required_order, 1);
}

TEST(SolveType1Perturbed, ZeroPerturbationReducesToIdentity) {
  auto sys = fixture_f2();
  auto none = RationalPerturbation<R>::none(2);
  auto v = solve_type1_perturbed(sys, none, MultiIndex{2, 2});
  auto rep = perturbed_reduce(none, v, sys);
  EXPECT_EQ(rep.p0, v.a[0]);
  EXPECT_LE(rep.max_violation, half_tol() * rep.scale);
}

TEST(SolveType1Perturbed, ReductionOnTwoGeneratorFixture) {
  auto sys = fixture_f2();
  RationalPerturbation<R> p(sys, {simple_pole(R(5)), simple_pole(R(-5))});
  for (int k = 2; k <= 6; ++k) {
    MultiIndex n{k, k};
    auto v = solve_type1_perturbed(sys, p, n);
    EXPECT_GE(v.residual_order, n.total());
    auto rep = perturbed_reduce(p, v, sys);
    EXPECT_LE(rep.max_violation, half_tol() * rep.scale) << n.str();
    auto orth = check_orthogonality(sys, rep.Ta, n.total() - p.D());
    EXPECT_LE(orth.residual, half_tol() * orth.scale) << n.str();
  }
}

TEST(SolveType1Perturbed, RemainderIncludesRationalTerm) {
  auto sys = unit_mass();
  RationalPerturbation<R> p(sys, {simple_pole(R(3))});
  auto v = solve_type1_perturbed(sys, p, MultiIndex{2});
  C z(R(1), R(2));
  C direct = v.a[0](z) + v.a[1](z) * (C(R(1)) / z + C(R(1)) / (z - C(R(3))));
  EXPECT_TRUE(near(remainder_eval(sys, &p, v, 0, z), direct, tol_exp10(-60)));
}

TEST(SolveType2, TwoAtomExample) {
  auto v = solve_type2(fixture_f1(), MultiIndex{2});
  ASSERT_EQ(v.Q.degree(), 2);
  EXPECT_TRUE(near(v.Q.coeff(0), R(-1), tol_exp10(-60)));
  EXPECT_TRUE(near(v.Q.coeff(1), R(0), tol_exp10(-60)));
  EXPECT_EQ(v.Q.coeff(2), R(1));
  ASSERT_EQ(v.P.size(), 1u);
  EXPECT_TRUE(near(v.P[0].coeff(1), R(1), tol_exp10(-60)));
  EXPECT_TRUE(near(v.P[0].coeff(0), R(0), tol_exp10(-60)));
  auto tail = type2_remainder_tail(fixture_f1(), v, 1, 8);
  for (std::size_t k = 0; k < tail.size(); ++k) EXPECT_LE(abs(tail[k]), tol_exp10(-60));
}

TEST(SolveType2, UnitMass) {
  auto v = solve_type2(unit_mass(), MultiIndex{1});
  ASSERT_EQ(v.Q.degree(), 1);
  EXPECT_TRUE(near(v.Q.coeff(0), R(0), tol_exp10(-70)));
  ASSERT_EQ(v.P[0].degree(), 0);
  EXPECT_TRUE(near(v.P[0].coeff(0), R(1), tol_exp10(-70)));
}

TEST(SolveType2, OrthogonalToConstantsOnBothMeasures) {
  auto sys = fixture_f2();
  auto v = solve_type2(sys, MultiIndex{1, 1});
  EXPECT_EQ(v.Q.degree(), 2);
  for (std::size_t j = 1; j <= 2; ++j) {
    const auto& mu = sys.s(1, j);
    R sum(0), scale(0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      R t = v.Q(mu.nodes()[i]) * mu.weights()[i];
      sum += t;
      scale += abs(t);
    }
    EXPECT_LE(abs(sum), half_tol() * scale);
  }
}

TEST(SolveType2, AtomicExactnessPicksMinimalDegree) {
  std::vector<R> x = {R(-0.5), R(0.25), R(0.75)};
  NikishinSystem<R> sys({atoms(x, {R(1), R(2), R(0.5)}, 1, R(-1), R(1))});
  auto v = solve_type2(sys, MultiIndex{3});
  auto q = Poly::from_roots(x);
  ASSERT_EQ(v.Q.degree(), 3);
  for (int i = 0; i <= 3; ++i) EXPECT_TRUE(near(v.Q.coeff(i), q.coeff(i), tol_exp10(-50)));
  EXPECT_LE(v.max_order_violation, tol_exp10(-50));
  // More freedom than atoms: the nullspace is two-dimensional, Q stays minimal.
  auto w = solve_type2(sys, MultiIndex{4});
  EXPECT_TRUE(w.info.nullity_flag);
  ASSERT_EQ(w.Q.degree(), 3);
  for (int i = 0; i <= 3; ++i) EXPECT_TRUE(near(w.Q.coeff(i), q.coeff(i), tol_exp10(-40)));
}

TEST(SolveType2, OrderConditions) {
  auto sys = legendre_chain(3, 24);
  MultiIndex n{3, 2, 2};
  auto v = solve_type2(sys, n);
  EXPECT_EQ(v.Q.degree(), n.total());
  for (std::size_t j = 1; j <= 3; ++j) {
    EXPECT_LE(v.P[j - 1].degree(), n.total() - 1);
    auto tail = type2_remainder_tail(sys, v, j, static_cast<std::size_t>(n[j]));
    R qscale = v.Q.max_abs_coeff() * abs(moments(sys.s(1, j), 0)[0]);
    for (std::size_t k = 0; k < tail.size(); ++k) EXPECT_LE(abs(tail[k]), half_tol() * qscale * R(1e6)) << j;
  }
}

}  // namespace
}  // namespace nikishin::testing
