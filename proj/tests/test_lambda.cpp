#include <gtest/gtest.h>

#include "commavg/commavg.hpp"
#include "support/oracles.hpp"
#include "support/random_systems.hpp"

using namespace commavg;
using Q = Rational;

TEST(Lambda, IdentityPairIsDiagonal) {
  auto pair = testsupport::identity_pair<Q>(3);
  auto lam = lambda_measure(pair);
  EXPECT_EQ(lam.size(), 3u);
  for (std::size_t x = 0; x < 3; ++x) EXPECT_EQ(lam.weight_of({x, x, x}), Q(1, 3));
  EXPECT_EQ(lam.weight_of({0, 1, 0}), Q(0));
}

TEST(Lambda, FlipIsUniformOnEightTriples) {
  auto lam = lambda_measure(testsupport::flip_pair<Q>());
  EXPECT_EQ(lam.size(), 8u);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(lam.weight_of({a, b, c}), Q(1, 8));
}

TEST(Lambda, WeightsMatchDefinitionAndMassOne) {
  Rng rng(151);
  for (int t = 0; t < 20; ++t) {
    auto pair = testsupport::random_pair<Q>(rng, 1 + t % 2, 12);
    auto lam = lambda_measure(pair);
    EXPECT_EQ(lam.total_mass(), Q(1));
    const auto& sp = pair.space();
    auto sl = oracle::orbit_labels(pair.S().maps(), pair.points());
    auto tl = oracle::orbit_labels(pair.T().maps(), pair.points());
    auto mass = [&](const std::vector<std::size_t>& l, std::size_t x) {
      Q m(0);
      for (std::size_t y = 0; y < pair.points(); ++y)
        if (l[y] == l[x]) m += sp.weight(y);
      return m;
    };
    for (std::size_t z1 = 0; z1 < pair.points(); ++z1)
      for (std::size_t z2 = 0; z2 < pair.points(); ++z2)
        for (std::size_t x = 0; x < pair.points(); ++x) {
          Q expect = (sl[z1] == sl[x] && tl[z2] == tl[x])
                         ? sp.weight(z1) / mass(sl, x) * sp.weight(z2) / mass(tl, x) * sp.weight(x)
                         : Q(0);
          EXPECT_EQ(lam.weight_of({z1, z2, x}), expect);
        }
  }
}

TEST(Lambda, PushforwardInvarianceExact) {
  Rng rng(157);
  for (int t = 0; t < 30; ++t) {
    auto pair = testsupport::random_pair<Q>(rng, 1 + t % 2, 16);
    auto lam = lambda_measure(pair);
    auto id = perm::identity(pair.points());
    for (const auto& m : pair.T().maps()) EXPECT_TRUE(lam.pushforward_invariant(m, id, m));
    for (const auto& m : pair.S().maps()) EXPECT_TRUE(lam.pushforward_invariant(id, m, m));
  }
}

TEST(Lambda, NotInvariantUnderWrongCombination) {
  auto pair = skew_product_example<Q>(2, 2, 2, {1, 0}, {0, 0});
  auto lam = lambda_measure(pair);
  auto id = perm::identity(pair.points());
  const auto& t = pair.T().maps()[0];
  EXPECT_FALSE(lam.pushforward_invariant(id, id, t));
  EXPECT_GT(lam.pushforward_defect(id, id, t), 0.0);
}

TEST(Lambda, TripleIntegralIdentity) {
  Rng rng(163);
  for (int t = 0; t < 20; ++t) {
    auto pair = testsupport::random_pair<double>(rng, 1 + t % 2, 16);
    auto lam = lambda_measure(pair);
    for (int k = 0; k < 10; ++k) {
      auto f1 = random_observable<double>(pair.points(), rng);
      auto f2 = random_observable<double>(pair.points(), rng);
      auto f3 = random_observable<double>(pair.points(), rng);
      EXPECT_NEAR(lam.integrate(f1, f2, f3), lambda_integral_via_expectations(pair, f1, f2, f3), 1e-12);
    }
  }
}
