#ifndef COMMAVG_CHECKS_HPP
#define COMMAVG_CHECKS_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "actions.hpp"
#include "averages.hpp"
#include "lambda.hpp"
#include "projector.hpp"
#include "random.hpp"
#include "spaces.hpp"

namespace commavg {

struct CheckResult {
  std::string name;
  double value = 0.0;     ///< worst observed defect
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

/// Schedules whose stage-p boxes have sides that are multiples of p.
inline std::vector<FolnerSequence> period_schedules(const GroupSpec& g) {
  if (g.is_finite()) return {FolnerSequence::full_group(g)};
  const std::size_t d = g.rank();
  auto uniform = [&](AffineBound lo, AffineBound hi) {
    return FolnerSequence::boxes(g, std::vector<AffineBound>(d, lo), std::vector<AffineBound>(d, hi));
  };
  std::vector<AffineBound> mixed_lo(d), mixed_hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    mixed_lo[i] = {static_cast<std::int64_t>(5 * i) - 2, i % 2 == 0 ? 0 : -1};
    mixed_hi[i] = {static_cast<std::int64_t>(5 * i) - 2, i % 2 == 0 ? 2 : 1};
  }
  return {FolnerSequence::half_open(g, 0, 1), FolnerSequence::half_open(g, 7, 1), uniform({-3, -1}, {-3, 1}),
          uniform({11, -2}, {11, 1}), FolnerSequence::boxes(g, mixed_lo, mixed_hi)};
}

/// Stage at which period_schedules reach whole periods: p for Z^d, anything for finite groups.
template <class R> std::optional<std::int64_t> period_stage(const CommutingPair<R>& pair) {
  if (pair.group().is_finite()) return 1;
  auto p = full_period(pair);
  if (!p) return std::nullopt;
  return static_cast<std::int64_t>(*p);
}

/**
 * Every structural identity the library promises, evaluated on `trials`
 * random observables drawn from `seed`.
 */
template <class R, class V = R>
std::vector<CheckResult> property_suite(const CommutingPair<R>& pair, std::uint64_t seed, int trials) {
  const auto& sp = pair.space();
  const std::size_t n = sp.size();
  constexpr bool exact = is_exact_v<V>;
  const double tight = 1e-12;
  const double loose = 1e-9;
  Rng rng(seed);
  std::vector<CheckResult> out;
  auto record = [&](std::string name, double value, double tol, std::string detail = {}) {
    out.push_back({std::move(name), value, tol, value <= tol, std::move(detail)});
  };

  auto stage = period_stage(pair);
  auto schedules = period_schedules(pair.group());
  auto projector = wts_subspace(pair);

  double exact_dev = 0.0, concord = 0.0, folner = 0.0, reduction = 0.0, residual = 0.0;
  double lambda_id = 0.0, four_gap = 0.0, kh_gap = 0.0;
  auto lambda = lambda_measure(pair);
  for (int t = 0; t < trials; ++t) {
    auto f1 = random_observable<V>(n, rng);
    auto f2 = random_observable<V>(n, rng);
    auto f3 = random_observable<V>(n, rng);
    auto limit = multi_limit(pair, f1, f2, f3);
    concord = std::max({concord, distance_l2(sp, limit, multi_limit_dual(pair, f1, f2, f3)),
                        distance_l2(sp, limit, iterated_limit(pair, f1, f2, f3))});
    residual = std::max(residual, projector.residual_off_range(convert_observable<double>(limit)));
    if (stage) {
      exact_dev = std::max(exact_dev, distance_l2(sp, multi_average(pair, f1, f2, f3, schedules[0], schedules[0], *stage), limit));
      for (const auto& s : schedules)
        for (const auto& r : schedules)
          folner = std::max(folner, distance_l2(sp, multi_average(pair, f1, f2, f3, s, r, *stage), limit));
      auto d1 = convert_observable<double>(f1), d2 = convert_observable<double>(f2), d3 = convert_observable<double>(f3);
      auto base = multi_average(pair, d1, d2, d3, schedules[0], schedules[0], *stage);
      auto reduced = multi_average(pair, projector.apply_p(d1), projector.apply_q(d2), d3, schedules[0], schedules[0], *stage);
      reduction = std::max(reduction, distance_l2(sp, base, reduced));
    }
    lambda_id = std::max(lambda_id, abs_double(V(lambda.integrate(f1, f2, f3) - lambda_integral_via_expectations(pair, f1, f2, f3))));

    if constexpr (!is_complex<V>::value) {
      auto g = random_nonnegative<V>(n, rng);
      auto b4 = four_term_bound(pair, g);
      auto bk = khintchine_bound(sp, pair.T(), g);
      four_gap = std::max(four_gap, to_double(V(b4.right - b4.left)));
      kh_gap = std::max(kh_gap, to_double(V(bk.right - bk.left)));
    }
  }

  std::string no_period = "period exceeds cap; check skipped";
  record("full_period_exactness", exact_dev, exact ? 0.0 : tight, stage ? "" : no_period);
  record("formula_concordance", concord, loose);
  record("folner_independence", folner, exact ? 0.0 : tight, stage ? "" : no_period);
  if constexpr (!is_complex<V>::value) {
    record("four_term_bound", std::max(0.0, four_gap), exact ? 0.0 : tight);
    record("khintchine_bound", std::max(0.0, kh_gap), exact ? 0.0 : tight);
  }

  auto id = perm::identity(n);
  double push = 0.0;
  for (const auto& m : pair.T().maps()) push = std::max(push, lambda.pushforward_defect(m, id, m));
  for (const auto& m : pair.S().maps()) push = std::max(push, lambda.pushforward_defect(id, m, m));
  record("lambda_invariance", push, exact ? 0.0 : tight);
  record("lambda_identity", lambda_id, exact ? 0.0 : tight);

  record("projector_idempotent", std::max(projector.idempotence_defect_p(), projector.idempotence_defect_q()), loose);
  record("projector_self_adjoint", std::max(projector.self_adjoint_defect_p(), projector.self_adjoint_defect_q()), loose);
  record("projector_range_equality", projector.range_distance(), loose);
  record("limit_in_range", residual, loose);
  record("reduction", reduction, loose, stage ? "" : no_period);

  if (stage) {
    double wm = 0.0;
    auto comp = projector.complement(convert_observable<double>(random_observable<V>(n, rng)));
    wm = wm_decay_diagnostic(pair, comp, schedules[0], *stage);
    record("wm_decay_orthocomplement", wm, loose,
           "orthocomplement dimension " + std::to_string(n - projector.dimension_ts()));
  }

  auto verdict = constancy_check<R, V>(pair, std::max(trials, 1), seed);
  out.push_back({"constancy_criterion", verdict.max_spread, kConstancyTolerance, verdict.consistent(),
                 std::string(verdict.product_ergodic ? "product ergodic" : "not product ergodic") +
                     (verdict.witness ? ", witness found" : "")});
  return out;
}

} // namespace commavg

#endif // COMMAVG_CHECKS_HPP
