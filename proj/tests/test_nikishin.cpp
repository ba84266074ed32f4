#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "nikishin/nikishin_system.hpp"

namespace nikishin::testing {
namespace {

TEST(ProductMeasure, Examples) {
  auto a = atoms({R(0)}, {R(1)}, 1, R(-1), R(1));
  auto b = atoms({R(2)}, {R(1)}, 1, R(2), R(3));
  auto p = product_measure(a, b);
  EXPECT_TRUE(near(p.weights()[0], R(0.5), tol_exp10(-70)));
  EXPECT_EQ(p.sign(), -1);

  auto c = atoms({R(-3)}, {R(2)}, 1, R(-4), R(-2));
  auto q = product_measure(a, c);
  EXPECT_TRUE(near(q.weights()[0], R(2) / R(3), tol_exp10(-70)));
  EXPECT_EQ(q.sign(), 1);
}

TEST(ProductMeasure, MassIsIntegralOfTransform) {
  auto a = realize(legendre_spec(R(-1), R(0), 7));
  auto b = realize(legendre_spec(R(1), R(3), 5));
  auto p = product_measure(a, b);
  R integral(0);
  for (std::size_t i = 0; i < a.size(); ++i) integral += a.weights()[i] * cauchy_eval_real(b, a.nodes()[i]);
  EXPECT_TRUE(near(abs(p.signed_mass()), abs(integral), tol_exp10(-70)));
  EXPECT_EQ(p.nodes(), a.nodes());
}

TEST(ProductMeasure, OverlapIsRejected) {
  auto a = atoms({R(0), R(1)}, {R(1), R(1)}, 1, R(0), R(1));
  auto b = atoms({R(0.5)}, {R(1)}, 1, R(0), R(1));
  EXPECT_THROW(product_measure(a, b), Error);
  auto c = atoms({R(1)}, {R(1)}, 1, R(1), R(2));
  EXPECT_THROW(product_measure(a, c), Error);
}

TEST(BuildSystem, SingleGenerator) {
  auto sys = fixture_f1();
  EXPECT_EQ(sys.size(), 1u);
  EXPECT_EQ(sys.s(1, 1).nodes(), sys.generator(1).nodes());
}

TEST(BuildSystem, SupportPreservationAndConstantSign) {
  auto sys = legendre_chain(3, 6);
  for (std::size_t j = 1; j <= 3; ++j) {
    for (std::size_t k = 1; k <= 3; ++k) {
      EXPECT_EQ(sys.s(j, k).nodes(), sys.generator(j).nodes()) << j << "," << k;
      for (const auto& w : sys.s(j, k).weights()) EXPECT_GT(w, R(0));
    }
  }
}

TEST(BuildSystem, ThreeChainMatchesDirectDoubleSum) {
  auto sys = legendre_chain(3, 5);
  const auto& s1 = sys.generator(1);
  const auto& s2 = sys.generator(2);
  const auto& s3 = sys.generator(3);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const R& x = s1.nodes()[i];
    R inner(0);
    for (std::size_t j = 0; j < s2.size(); ++j) {
      const R& y = s2.nodes()[j];
      inner += R(s2.sign()) * s2.weights()[j] * cauchy_eval_real(s3, y) / (x - y);
    }
    EXPECT_TRUE(near(sys.s(1, 3).weights()[i], s1.weights()[i] * abs(inner), tol_exp10(-70)));
  }
}

TEST(BuildSystem, AdjacencyViolations) {
  std::vector<AtomicMeasure<R>> overlap{atoms({R(0)}, {R(1)}, 1, R(-1), R(1)),
                                        atoms({R(1.5)}, {R(1)}, 1, R(0.5), R(2))};
  EXPECT_THROW(NikishinSystem<R>{overlap}, Error);
  std::vector<AtomicMeasure<R>> junction_mass{atoms({R(0), R(1)}, {R(1), R(1)}, 1, R(-1), R(1)),
                                              atoms({R(2)}, {R(1)}, 1, R(1), R(3))};
  EXPECT_THROW(NikishinSystem<R>{junction_mass}, Error);
  std::vector<AtomicMeasure<R>> touching{atoms({R(0)}, {R(1)}, 1, R(-1), R(1)),
                                         atoms({R(2)}, {R(1)}, 1, R(1), R(3))};
  EXPECT_NO_THROW(NikishinSystem<R>{touching});
}

TEST(SHat, DiagonalIsGeneratorTransform) {
  auto sys = legendre_chain(2, 8);
  C z(R(0.5), R(2));
  EXPECT_EQ(s_hat_eval(sys, 2, 2, z), cauchy_eval(sys.generator(2), z));
  // Leading behaviour at infinity.
  C big(R(1e12));
  C lead = big * s_hat_eval(sys, 1, 2, big);
  EXPECT_TRUE(near(lead, C(sys.s(1, 2).signed_mass()), tol_exp10(-10)));
}

TEST(Chile, DegenerateSingleGenerator) {
  auto sys = fixture_f1();
  auto r = check_chile(sys, 0, C(R(0.3), R(2)));
  EXPECT_EQ(r.residual, R(0));
}

TEST(Chile, TwoGeneratorPartialFractionIdentity) {
  auto sys = legendre_chain(2, 16);
  C z(R(0.5), R(0.7));
  auto r = check_chile(sys, 0, z);
  EXPECT_LE(r.residual, half_precision_tol<R>() * r.scale);
  // Same identity spelled out term by term.
  C direct = s_hat_eval(sys, 2, 1, z) - s_hat_eval(sys, 2, 2, z) * s_hat_eval(sys, 1, 1, z) + s_hat_eval(sys, 1, 2, z);
  EXPECT_LE(abs(direct), half_precision_tol<R>() * r.scale);
}

TEST(Chile, ThreeGeneratorsAllIndicesRandomPoints) {
  auto sys = legendre_chain(3, 16);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> re(-3, 8), im(0.05, 4);
  for (int t = 0; t < 20; ++t) {
    C z(R(re(gen)), R(im(gen)) * R(t % 2 ? 1 : -1));
    for (std::size_t j = 0; j < 3; ++j) {
      auto r = check_chile(sys, j, z);
      EXPECT_LE(r.residual, half_precision_tol<R>() * r.scale) << "j=" << j;
    }
  }
  auto r = check_chile(sys, 1, C(R(0), R(10)));
  EXPECT_LE(r.residual, half_precision_tol<R>() * r.scale);
}

TEST(RatioFormula, SingleAtomFirstGenerator) {
  std::vector<AtomicMeasure<R>> g{atoms({R(-0.5)}, {R(2)}, 1, R(-1), R(0)),
                                  realize(legendre_spec(R(1), R(3), 6))};
  NikishinSystem<R> sys(g);
  auto r = check_ratio_formula(sys, 2, C(R(2), R(1)));
  EXPECT_LE(r.residual, precision_fraction<R>(1, 3) * r.scale);
}

TEST(RatioFormula, TwoAtomFirstGenerator) {
  std::vector<AtomicMeasure<R>> g{atoms({R(-0.8), R(-0.2)}, {R(1), R(0.5)}, 1, R(-1), R(0)),
                                  realize(legendre_spec(R(1), R(3), 6))};
  NikishinSystem<R> sys(g);
  auto r = check_ratio_formula(sys, 2, C(R(5), R(5)));
  EXPECT_LE(r.residual, precision_fraction<R>(1, 3) * r.scale);
}

TEST(RatioFormula, ThreeGeneratorsAndLimitAtInfinity) {
  auto sys = legendre_chain(3, 16);
  for (std::size_t k = 2; k <= 3; ++k) {
    auto r = check_ratio_formula(sys, k, C(R(-0.5), R(0.3)));
    EXPECT_LE(r.residual, precision_fraction<R>(1, 3) * r.scale) << "k=" << k;
  }
  C big(R(0), R(1e15));
  C ratio = s_hat_eval(sys, 1, 3, big) / s_hat_eval(sys, 1, 1, big);
  EXPECT_TRUE(near(ratio, C(sys.s(1, 3).signed_mass() / sys.s(1, 1).signed_mass()), tol_exp10(-12)));
  EXPECT_THROW(check_ratio_formula(sys, 1, big), Error);
}

TEST(NikishinSystem, RefinedRebuildsFromSpecs) {
  auto spec = std::vector<MeasureSpec<R>>{legendre_spec(R(-1), R(0), 9), legendre_spec(R(1), R(3), 9)};
  auto sys = build_system(spec);
  EXPECT_EQ(sys.precision(), mp::precision_bits());
  mp::PrecisionScope scope(512);
  auto fine = sys.refined();
  EXPECT_EQ(fine.precision(), 512);
  auto direct = build_system(spec);
  for (std::size_t j = 1; j <= 2; ++j) {
    EXPECT_EQ(fine.s(1, j).nodes(), direct.s(1, j).nodes());
    EXPECT_EQ(fine.s(1, j).weights(), direct.s(1, j).weights());
  }
  // Quadrature nodes gain accuracy beyond the coarse ones.
  EXPECT_TRUE(abs(fine.generator(1).nodes()[0] - sys.generator(1).nodes()[0]) > R(0));
}

TEST(NikishinSystem, RefinedFromAtomsKeepsThem) {
  NikishinSystem<R> sys({atoms({R(-0.5)}, {R(1)}, 1, R(-1), R(0)), atoms({R(2)}, {R(3)}, 1, R(1), R(3))});
  mp::PrecisionScope scope(512);
  auto fine = sys.refined();
  EXPECT_EQ(fine.generator(2).weights()[0], R(3));
  // 3 / 2.5 computed at 512 bits.
  EXPECT_TRUE(near(fine.s(1, 2).weights()[0], R(6) / R(5), tol_exp10(-150)));
}

}  // namespace
}  // namespace nikishin::testing
