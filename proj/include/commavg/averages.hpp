#ifndef COMMAVG_AVERAGES_HPP
#define COMMAVG_AVERAGES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "actions.hpp"
#include "errors.hpp"
#include "groups.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "spaces.hpp"

namespace commavg {

/**
 * A finite window of group elements reduced to its distinct point maps.
 * Averaging over the window equals the count-weighted average over `maps`.
 * Maps are kept in order of first occurrence.
 */
struct CompressedWindow {
  std::vector<Permutation> maps;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

inline CompressedWindow compress_window(const Action& a, const std::vector<GroupElement>& window) {
  CompressedWindow w;
  std::map<Permutation, std::size_t> slot;
  for (const auto& g : window) {
    auto m = a.element_map(g);
    auto [it, inserted] = slot.try_emplace(m, w.maps.size());
    if (inserted) {
      w.maps.push_back(std::move(m));
      w.counts.push_back(0);
    }
    ++w.counts[it->second];
    ++w.total;
  }
  return w;
}

/**
 * Elements whose uniform average equals the Haar average over the image of
 * the action: prod_i [0, ord(T_i)) for Z^d, all elements for a finite table.
 */
inline std::vector<GroupElement> period_window(const Action& a) {
  const auto& g = a.group();
  if (g.is_finite()) return FolnerSequence::full_group(g).elements(0);
  auto orders = a.map_orders();
  std::vector<AffineBound> lo(g.rank()), hi(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) {
    lo[i] = {0, 0};
    hi[i] = {static_cast<std::int64_t>(orders[i]), 1};
  }
  return FolnerSequence::boxes(g, lo, hi).elements(0);
}

inline constexpr std::uint64_t kFullPeriodCap = 1'000'000;

/**
 * Exponent of the abelian permutation group generated by T and S: the lcm of
 * all generator orders. A box [0, p)^d (or any translate, or any box whose
 * sides are multiples of p) averages every (g,h)-periodic quantity exactly.
 * Empty above the cap.
 */
template <class R> std::optional<std::uint64_t> full_period(const CommutingPair<R>& pair) {
  std::uint64_t p = 1;
  for (const auto* a : {&pair.T(), &pair.S()}) {
    for (auto o : a->map_orders()) {
      p = std::lcm(p, o);
      if (p > kFullPeriodCap) return std::nullopt;
    }
  }
  return p;
}

template <class V> V count_as(std::size_t c) { return V(static_cast<long long>(c)); }

// ---------------------------------------------------------------------------
// Single ergodic averages

/// (1/|Phi_n|) sum_{g in Phi_n} T_g f
template <class V>
Observable<V> ergodic_average(const Action& a, const Observable<V>& f, const FolnerSequence& seq, std::int64_t n) {
  detail::require_same_size(a.points(), f.size(), "ergodic average");
  auto w = compress_window(a, seq.elements(n));
  if (w.total == 0) throw DomainError("empty Folner set at stage " + std::to_string(n));
  Observable<V> out(f.size(), V(0));
  for (std::size_t x = 0; x < f.size(); ++x) {
    V acc(0);
    for (std::size_t i = 0; i < w.maps.size(); ++i) acc += count_as<V>(w.counts[i]) * f[w.maps[i][x]];
    out[x] = acc / count_as<V>(w.total);
  }
  return out;
}

/// E(f | I_T)
template <class R, class V> Observable<V> ergodic_limit(const FiniteSpace<R>& sp, const Action& a, const Observable<V>& f) {
  return conditional_expectation(sp, f, invariant_partition(a));
}

// ---------------------------------------------------------------------------
// Multiple averages and their limits

/// (1/|Phi_n||Psi_n|) sum_{(g,h)} f1(T_g x) f2(S_h x) f3(T_g S_h x)
template <class R, class V>
Observable<V> multi_average(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                            const Observable<V>& f3, const FolnerSequence& phi, const FolnerSequence& psi,
                            std::int64_t n) {
  const std::size_t pts = pair.points();
  detail::require_same_size(pts, f1.size(), "multi average (f1)");
  detail::require_same_size(pts, f2.size(), "multi average (f2)");
  detail::require_same_size(pts, f3.size(), "multi average (f3)");
  auto wt = compress_window(pair.T(), phi.elements(n));
  auto ws = compress_window(pair.S(), psi.elements(n));
  if (wt.total == 0 || ws.total == 0) throw DomainError("empty Folner window at stage " + std::to_string(n));
  const V denom = count_as<V>(wt.total) * count_as<V>(ws.total);

  Observable<V> out(pts, V(0));
  parallel_for(pts, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      V acc(0);
      for (std::size_t b = 0; b < ws.maps.size(); ++b) {
        const std::size_t sx = ws.maps[b][x];
        V inner(0);
        for (std::size_t a = 0; a < wt.maps.size(); ++a) {
          const auto& ta = wt.maps[a];
          inner += count_as<V>(wt.counts[a]) * f1[ta[x]] * f3[ta[sx]];
        }
        acc += count_as<V>(ws.counts[b]) * f2[sx] * inner;
      }
      out[x] = acc / denom;
    }
  });
  return out;
}

/**
 * Orbit structure of a diagonal product action A x A on the relative product
 * over the orbit partition of another action B.
 */
template <class R> struct RelativeOrbits {
  Partition base_partition; ///< I_B on X
  std::vector<R> base_mass; ///< mu of each I_B block
  WeightedPairSpace<R> pairs; ///< mu x_{I_B} mu
  Partition orbits;         ///< (A x A)-orbits on the pair support
};

template <class R> RelativeOrbits<R> relative_orbits(const FiniteSpace<R>& sp, const Action& diagonal, const Action& base) {
  RelativeOrbits<R> out;
  out.base_partition = invariant_partition(base);
  out.base_mass = block_masses(sp, out.base_partition);
  out.pairs = relative_product(sp, out.base_partition);
  out.orbits = invariant_partition(product_action(diagonal, diagonal, out.pairs));
  return out;
}

namespace detail {

// L(x) = int weight(z) Kern(x, z) d mu_{pi(x)}(z), summed over the pair support.
template <class R, class V>
Observable<V> integrate_kernel(const FiniteSpace<R>& sp, const RelativeOrbits<R>& ro, const Observable<V>& kernel,
                               const Observable<V>& weight) {
  Observable<V> out(sp.size(), V(0));
  const auto& support = ro.pairs.support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto [x, z] = support[i];
    out[x] += weight[z] * kernel[i] * from_real<V>(sp.weight(z));
  }
  for (std::size_t x = 0; x < sp.size(); ++x)
    out[x] /= from_real<V>(ro.base_mass[ro.base_partition.block_of(x)]);
  return out;
}

} // namespace detail

/**
 * Exact limit of multi_average: L(x) = int f2(z) H(x,z) d mu_{sigma(x)}(z),
 * H the projection of f1 ⊗ f3 onto T x T-invariant functions on mu x_{I_S} mu.
 */
template <class R, class V>
Observable<V> multi_limit(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                          const Observable<V>& f3) {
  const auto& sp = pair.space();
  detail::require_same_size(sp.size(), f1.size(), "multi limit (f1)");
  detail::require_same_size(sp.size(), f2.size(), "multi limit (f2)");
  detail::require_same_size(sp.size(), f3.size(), "multi limit (f3)");
  auto ro = relative_orbits(sp, pair.T(), pair.S());
  auto h = conditional_expectation(ro.pairs.as_space(), ro.pairs.tensor(f1, f3), ro.orbits);
  return detail::integrate_kernel(sp, ro, h, f2);
}

/// Mirror formula: L(x) = int f1(z) K(x,z) d mu_{tau(x)}(z), K from f2 ⊗ f3 and S x S over I_T.
template <class R, class V>
Observable<V> multi_limit_dual(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                               const Observable<V>& f3) {
  const auto& sp = pair.space();
  detail::require_same_size(sp.size(), f1.size(), "multi limit dual (f1)");
  detail::require_same_size(sp.size(), f2.size(), "multi limit dual (f2)");
  detail::require_same_size(sp.size(), f3.size(), "multi limit dual (f3)");
  auto ro = relative_orbits(sp, pair.S(), pair.T());
  auto k = conditional_expectation(ro.pairs.as_space(), ro.pairs.tensor(f2, f3), ro.orbits);
  return detail::integrate_kernel(sp, ro, k, f1);
}

/// lim_g avg T_g f1 · E(f2 · T_g f3 | I_S): inner limit by projection, outer by a period window of T.
template <class R, class V>
Observable<V> iterated_limit(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                             const Observable<V>& f3) {
  const auto& sp = pair.space();
  detail::require_same_size(sp.size(), f1.size(), "iterated limit (f1)");
  detail::require_same_size(sp.size(), f2.size(), "iterated limit (f2)");
  detail::require_same_size(sp.size(), f3.size(), "iterated limit (f3)");
  auto is = invariant_partition(pair.S());
  auto w = compress_window(pair.T(), period_window(pair.T()));
  Observable<V> out(sp.size(), V(0));
  for (std::size_t a = 0; a < w.maps.size(); ++a) {
    const auto& ta = w.maps[a];
    Observable<V> moved(sp.size(), V(0));
    for (std::size_t x = 0; x < sp.size(); ++x) moved[x] = f2[x] * f3[ta[x]];
    auto inner = conditional_expectation(sp, moved, is);
    for (std::size_t x = 0; x < sp.size(); ++x) out[x] += count_as<V>(w.counts[a]) * f1[ta[x]] * inner[x];
  }
  for (std::size_t x = 0; x < sp.size(); ++x) out[x] /= count_as<V>(w.total);
  return out;
}

/// One row of an AverageReport.
template <class V> struct AverageStage {
  std::int64_t n = 0;
  Observable<V> average;
  double deviation = 0.0; ///< ||A_n - L||_2 in L^2(mu)
};

template <class V> struct AverageReport {
  std::vector<AverageStage<V>> stages;
  Observable<V> limit;
};

/// A_n at each requested stage against the exact limit. Stages must be strictly increasing.
template <class R, class V>
AverageReport<V> average_report(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                                const Observable<V>& f3, const FolnerSequence& phi, const FolnerSequence& psi,
                                const std::vector<std::int64_t>& stages) {
  for (std::size_t i = 1; i < stages.size(); ++i)
    if (stages[i] <= stages[i - 1]) throw DomainError("stages must be strictly increasing");
  AverageReport<V> report;
  report.limit = multi_limit(pair, f1, f2, f3);
  for (auto n : stages) {
    auto a = multi_average(pair, f1, f2, f3, phi, psi, n);
    double dev = distance_l2(pair.space(), a, report.limit);
    report.stages.push_back({n, std::move(a), dev});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Recurrence bounds

template <class V> struct BoundComparison {
  V left;  ///< the limit
  V right; ///< the lower bound
  bool holds(double tol = 1e-12) const {
    if constexpr (is_exact_v<V>) {
      return left >= right;
    } else {
      return to_double(left) >= to_double(right) - tol;
    }
  }
};

namespace detail {

template <class V> void require_nonnegative(const Observable<V>& f) {
  static_assert(!is_complex<V>::value, "recurrence bounds need a real observable");
  std::string bad;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] < V(0)) {
      if (!bad.empty()) bad += ",";
      bad += std::to_string(x);
    }
  }
  if (!bad.empty()) throw DomainError("observable has negative entries at indices " + bad);
}

} // namespace detail

/// lim avg int f T_g f S_h f T_g S_h f d mu against (int f)^4.
template <class R, class V> BoundComparison<V> four_term_bound(const CommutingPair<R>& pair, const Observable<V>& f) {
  detail::require_nonnegative(f);
  auto limit = multi_limit(pair, f, f, f);
  V left = integral(pair.space(), f * limit);
  V mean = integral(pair.space(), f);
  return {left, mean * mean * mean * mean};
}

/// int f E(f|I_T) d mu against (int f)^2.
template <class R, class V>
BoundComparison<V> khintchine_bound(const FiniteSpace<R>& sp, const Action& a, const Observable<V>& f) {
  detail::require_nonnegative(f);
  V left = integral(sp, f * ergodic_limit(sp, a, f));
  V mean = integral(sp, f);
  return {left, mean * mean};
}

// ---------------------------------------------------------------------------
// Diagonal average phi(T_g x) psi(S_g T_g x)

template <class R, class V>
Observable<V> diagonal_average(const CommutingPair<R>& pair, const Observable<V>& phi, const Observable<V>& psi,
                               const FolnerSequence& seq, std::int64_t n) {
  const std::size_t pts = pair.points();
  detail::require_same_size(pts, phi.size(), "diagonal average (phi)");
  detail::require_same_size(pts, psi.size(), "diagonal average (psi)");
  auto st = composed_action(pair.T(), pair.S());
  auto window = seq.elements(n);
  if (window.empty()) throw DomainError("empty Folner set at stage " + std::to_string(n));
  std::map<std::pair<Permutation, Permutation>, std::size_t> counts;
  std::vector<const std::pair<const std::pair<Permutation, Permutation>, std::size_t>*> order;
  for (const auto& g : window) {
    auto [it, inserted] = counts.try_emplace({pair.T().element_map(g), st.element_map(g)}, 0);
    if (inserted) order.push_back(&*it);
    ++it->second;
  }
  Observable<V> out(pts, V(0));
  for (std::size_t x = 0; x < pts; ++x) {
    V acc(0);
    for (const auto* entry : order) {
      const auto& [maps, c] = *entry;
      acc += count_as<V>(c) * phi[maps.first[x]] * psi[maps.second[x]];
    }
    out[x] = acc / count_as<V>(window.size());
  }
  return out;
}

/// Exact limit: lift x to (x, x), project phi ⊗ psi onto T x (S∘T)-invariant functions on mu x mu.
template <class R, class V>
Observable<V> diagonal_limit(const CommutingPair<R>& pair, const Observable<V>& phi, const Observable<V>& psi) {
  const auto& sp = pair.space();
  detail::require_same_size(sp.size(), phi.size(), "diagonal limit (phi)");
  detail::require_same_size(sp.size(), psi.size(), "diagonal limit (psi)");
  auto full = relative_product(sp, Partition::trivial(sp.size()));
  auto coupled = product_action(pair.T(), composed_action(pair.T(), pair.S()), full);
  auto proj = conditional_expectation(full.as_space(), full.tensor(phi, psi), invariant_partition(coupled));
  Observable<V> out(sp.size(), V(0));
  for (std::size_t x = 0; x < sp.size(); ++x) out[x] = proj[*full.index_of(x, x)];
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

/// (1/|Phi_n|) sum_g ||E(f · T_g f | I_S)||_2
template <class R, class V>
double wm_decay_diagnostic(const CommutingPair<R>& pair, const Observable<V>& f, const FolnerSequence& seq,
                           std::int64_t n) {
  const auto& sp = pair.space();
  detail::require_same_size(sp.size(), f.size(), "wm decay");
  auto is = invariant_partition(pair.S());
  auto w = compress_window(pair.T(), seq.elements(n));
  if (w.total == 0) throw DomainError("empty Folner set at stage " + std::to_string(n));
  double acc = 0.0;
  for (std::size_t a = 0; a < w.maps.size(); ++a) {
    Observable<V> prod(sp.size(), V(0));
    for (std::size_t x = 0; x < sp.size(); ++x) prod[x] = f[x] * f[w.maps[a][x]];
    acc += static_cast<double>(w.counts[a]) * norm_l2(sp, conditional_expectation(sp, prod, is));
  }
  return acc / static_cast<double>(w.total);
}

/// Family (g, h) -> u_{g,h} for the van der Corput functional.
template <class V> using ObservableFamily = std::function<Observable<V>(const GroupElement&, const GroupElement&)>;

/**
 * (1/|Phi_m|^2 |Psi_m|^2) sum_{j,j' in Phi_m; k,k' in Psi_m}
 *   (1/|Phi_n||Psi_n|) sum_{g in Phi_n, h in Psi_n} <u_{j'g,k'h}, u_{jg,kh}>
 */
template <class R, class V>
V vdc_double_average(const FiniteSpace<R>& sp, const ObservableFamily<V>& family, const FolnerSequence& phi,
                     const FolnerSequence& psi, std::int64_t n, std::int64_t m) {
  const auto& group = phi.group();
  if (!(group == psi.group())) throw DimensionError("vdc: Folner sequences live on different groups");
  auto outer_g = phi.elements(m);
  auto outer_h = psi.elements(m);
  auto inner_g = phi.elements(n);
  auto inner_h = psi.elements(n);
  if (outer_g.empty() || outer_h.empty() || inner_g.empty() || inner_h.empty())
    throw DomainError("vdc: empty Folner window");

  std::map<std::pair<GroupElement, GroupElement>, Observable<V>> memo;
  auto u = [&](const GroupElement& g, const GroupElement& h) -> const Observable<V>& {
    auto key = std::make_pair(g, h);
    auto it = memo.find(key);
    if (it == memo.end()) {
      auto val = family(g, h);
      detail::require_same_size(sp.size(), val.size(), "vdc family member");
      it = memo.emplace(std::move(key), std::move(val)).first;
    }
    return it->second;
  };

  V total(0);
  for (const auto& j : outer_g)
    for (const auto& jp : outer_g)
      for (const auto& k : outer_h)
        for (const auto& kp : outer_h) {
          V inner(0);
          for (const auto& g : inner_g)
            for (const auto& h : inner_h)
              inner += inner_product(sp, u(group.compose(jp, g), group.compose(kp, h)), u(group.compose(j, g), group.compose(k, h)));
          total += inner / (count_as<V>(inner_g.size()) * count_as<V>(inner_h.size()));
        }
  V outer = count_as<V>(outer_g.size()) * count_as<V>(outer_h.size());
  return total / (outer * outer);
}

// ---------------------------------------------------------------------------
// Constancy criterion

template <class V> struct LimitWitness {
  Observable<V> f1, f2, f3;
  Observable<V> limit;
};

template <class V> struct ConstancyVerdict {
  std::size_t txt_orbits = 0; ///< orbits of T x T on X x X
  std::size_t sxs_orbits = 0; ///< orbits of S x S on X x X
  bool product_ergodic = false;
  bool limits_constant = false;      ///< every examined limit was constant
  std::optional<LimitWitness<V>> witness;
  double max_spread = 0.0;           ///< largest max-min over examined limits
  std::uint64_t seed = 0;
  int trials = 0;

  /// The verdict agrees with the product-ergodicity criterion.
  bool consistent() const {
    return product_ergodic ? limits_constant : (!limits_constant && witness.has_value());
  }
};

template <class V> double spread(const Observable<V>& f) {
  double best = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = x + 1; y < f.size(); ++y) best = std::max(best, abs_double(V(f[x] - f[y])));
  return best;
}

inline constexpr double kConstancyTolerance = 1e-9;

template <class R, class V = R>
ConstancyVerdict<V> constancy_check(const CommutingPair<R>& pair, int trials, std::uint64_t seed) {
  const auto& sp = pair.space();
  const std::size_t n = sp.size();
  ConstancyVerdict<V> verdict;
  verdict.seed = seed;
  verdict.trials = trials;

  auto full = relative_product(sp, Partition::trivial(n));
  verdict.txt_orbits = invariant_partition(product_action(pair.T(), pair.T(), full)).blocks();
  verdict.sxs_orbits = invariant_partition(product_action(pair.S(), pair.S(), full)).blocks();
  verdict.product_ergodic = verdict.txt_orbits == 1 && verdict.sxs_orbits == 1;

  Rng rng(seed);
  if (verdict.product_ergodic) {
    verdict.limits_constant = true;
    for (int t = 0; t < trials; ++t) {
      auto f1 = random_observable<V>(n, rng);
      auto f2 = random_observable<V>(n, rng);
      auto f3 = random_observable<V>(n, rng);
      double s = spread(multi_limit(pair, f1, f2, f3));
      verdict.max_spread = std::max(verdict.max_spread, s);
      if (s > kConstancyTolerance) verdict.limits_constant = false;
    }
    return verdict;
  }

  // Point-mass triples (delta_a, delta_b, delta_c) with (a, c) running over
  // T x T orbit representatives; their limits span W_{T/S}.
  auto accept = [&](Observable<V> f1, Observable<V> f2, Observable<V> f3) {
    auto limit = multi_limit(pair, f1, f2, f3);
    double s = spread(limit);
    verdict.max_spread = std::max(verdict.max_spread, s);
    if (s <= kConstancyTolerance) return false;
    verdict.witness = LimitWitness<V>{std::move(f1), std::move(f2), std::move(f3), std::move(limit)};
    return true;
  };

  auto ro = relative_orbits(sp, pair.T(), pair.S());
  std::vector<bool> seen(ro.orbits.blocks(), false);
  for (std::size_t i = 0; i < ro.pairs.size() && !verdict.witness; ++i) {
    auto o = ro.orbits.block_of(i);
    if (seen[o]) continue;
    seen[o] = true;
    auto [a, c] = ro.pairs.support()[i];
    for (std::size_t b = 0; b < n && !verdict.witness; ++b) {
      accept(Observable<V>::point_mass(n, a), Observable<V>::point_mass(n, b), Observable<V>::point_mass(n, c));
    }
  }
  for (int t = 0; t < trials && !verdict.witness; ++t) {
    auto f1 = random_observable<V>(n, rng);
    auto f2 = random_observable<V>(n, rng);
    auto f3 = random_observable<V>(n, rng);
    accept(std::move(f1), std::move(f2), std::move(f3));
  }
  verdict.limits_constant = !verdict.witness.has_value();
  return verdict;
}

} // namespace commavg

#endif // COMMAVG_AVERAGES_HPP
