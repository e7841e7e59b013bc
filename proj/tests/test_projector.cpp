#include <gtest/gtest.h>

#include "commavg/commavg.hpp"
#include "support/random_systems.hpp"

using namespace commavg;

namespace {

void expect_projector_laws(const CharacteristicProjector& pr) {
  EXPECT_LE(pr.idempotence_defect_p(), 1e-9);
  EXPECT_LE(pr.idempotence_defect_q(), 1e-9);
  EXPECT_LE(pr.self_adjoint_defect_p(), 1e-9);
  EXPECT_LE(pr.self_adjoint_defect_q(), 1e-9);
  EXPECT_LE(pr.range_distance(), 1e-9);
}

} // namespace

TEST(Projector, IdentityPairSpansEverything) {
  auto pr = wts_subspace(testsupport::identity_pair<double>(4));
  EXPECT_EQ(pr.dimension_ts(), 4u);
  EXPECT_EQ(pr.dimension_st(), 4u);
  expect_projector_laws(pr);
}

TEST(Projector, FlipContainsChiAndConstants) {
  auto pr = wts_subspace(testsupport::flip_pair<double>());
  EXPECT_EQ(pr.dimension_ts(), 2u);
  Observable<double> chi(std::vector<double>{1, -1});
  EXPECT_LE(pr.residual_off_range(chi), 1e-12);
  EXPECT_LE(pr.residual_off_range(Observable<double>(2, 1.0)), 1e-12);
}

TEST(Projector, CyclicRotationIsFull) {
  for (std::size_t p : {3u, 5u, 7u}) {
    auto pr = wts_subspace(testsupport::rotation_pair<double>(p));
    EXPECT_EQ(pr.dimension_ts(), p);
    expect_projector_laws(pr);
  }
}

TEST(Projector, BasisIsOrthonormalInWeightedInnerProduct) {
  Rng rng(131);
  auto pair = testsupport::random_pair<double>(rng, 2, 16);
  auto pr = wts_subspace(pair);
  const auto& b = pr.basis_ts();
  for (Eigen::Index i = 0; i < b.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0;
      for (std::size_t x = 0; x < pair.points(); ++x)
        s += to_double(pair.space().weight(x)) * b(static_cast<Eigen::Index>(x), i) * b(static_cast<Eigen::Index>(x), j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-9);
    }
}

TEST(Projector, RandomSystemsLawsAndLimitsInRange) {
  Rng rng(137);
  for (int t = 0; t < 20; ++t) {
    auto pair = testsupport::random_pair<double>(rng, 1 + t % 2, 18);
    auto pr = wts_subspace(pair);
    expect_projector_laws(pr);
    for (int k = 0; k < 3; ++k) {
      auto f1 = random_observable<double>(pair.points(), rng);
      auto f2 = random_observable<double>(pair.points(), rng);
      auto f3 = random_observable<double>(pair.points(), rng);
      EXPECT_LE(pr.residual_off_range(multi_limit(pair, f1, f2, f3)), 1e-9);
    }
  }
}

TEST(Projector, ReductionAtFullPeriod) {
  Rng rng(139);
  for (int t = 0; t < 10; ++t) {
    auto pair = testsupport::random_pair<double>(rng, 1, 14, 24);
    auto pr = wts_subspace(pair);
    auto box = FolnerSequence::half_open(pair.group());
    auto p = static_cast<std::int64_t>(*full_period(pair));
    auto f1 = random_observable<double>(pair.points(), rng);
    auto f2 = random_observable<double>(pair.points(), rng);
    auto f3 = random_observable<double>(pair.points(), rng);
    auto a = multi_average(pair, f1, f2, f3, box, box, p);
    auto b = multi_average(pair, pr.apply_p(f1), pr.apply_q(f2), f3, box, box, p);
    EXPECT_LE(distance_l2(pair.space(), a, b), 1e-9);
  }
}

TEST(Projector, ComplementDecaysAtFullPeriod) {
  Rng rng(149);
  for (int t = 0; t < 10; ++t) {
    auto pair = testsupport::random_pair<double>(rng, 1, 14, 24);
    auto pr = wts_subspace(pair);
    auto box = FolnerSequence::half_open(pair.group());
    auto p = static_cast<std::int64_t>(*full_period(pair));
    auto f = pr.complement(random_observable<double>(pair.points(), rng));
    EXPECT_LE(norm_l2(pair.space(), f), 1e-9);
    EXPECT_LE(wm_decay_diagnostic(pair, f, box, p), 1e-9);
  }
}

TEST(Projector, ComplexApplication) {
  auto pr = wts_subspace(testsupport::rotation_pair<double>(4));
  Observable<Complex> f(std::vector<Complex>{{1, 2}, {0, -1}, {3, 0}, {0.5, 0.5}});
  EXPECT_LE(distance_l2(FiniteSpace<double>::uniform(4), pr.apply_p(f), f), 1e-12);
}
