#ifndef COMMAVG_LAMBDA_HPP
#define COMMAVG_LAMBDA_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "actions.hpp"
#include "spaces.hpp"

namespace commavg {

/// Point (z1, z2, x) of X x X x X.
using Triple = std::array<std::size_t, 3>;

/// Measure on X^3: lambda = int mu_{sigma(x)} x mu_{tau(x)} x delta_x d mu(x).
template <class R> class TripleMeasure {
public:
  TripleMeasure(FiniteSpace<R> base, std::vector<Triple> support, std::vector<R> weights)
      : base_(std::move(base)), support_(std::move(support)), weights_(std::move(weights)),
        index_(base_.size() * base_.size() * base_.size(), npos) {
    detail::require_same_size(support_.size(), weights_.size(), "triple measure");
    for (std::size_t i = 0; i < support_.size(); ++i) index_[key(support_[i])] = i;
  }

  const FiniteSpace<R>& base() const noexcept { return base_; }
  const std::vector<Triple>& support() const noexcept { return support_; }
  const std::vector<R>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return support_.size(); }

  /// lambda({t}); zero off the support.
  R weight_of(const Triple& t) const {
    auto i = index_[key(t)];
    return i == npos ? R(0) : weights_[i];
  }

  R total_mass() const {
    R total(0);
    for (const auto& w : weights_) total += w;
    return total;
  }

  /// int f1 ⊗ f2 ⊗ f3 d lambda
  template <class V> V integrate(const Observable<V>& f1, const Observable<V>& f2, const Observable<V>& f3) const {
    V total(0);
    for (std::size_t i = 0; i < support_.size(); ++i) {
      const auto& t = support_[i];
      total += f1[t[0]] * f2[t[1]] * f3[t[2]] * from_real<V>(weights_[i]);
    }
    return total;
  }

  /**
   * Largest |lambda(m(t)) - lambda(t)| over the support, m = m1 x m2 x m3.
   * Zero (exactly, for Rational) iff the pushforward equals lambda.
   */
  double pushforward_defect(const Permutation& m1, const Permutation& m2, const Permutation& m3) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      const auto& t = support_[i];
      R diff = weight_of({m1[t[0]], m2[t[1]], m3[t[2]]}) - weights_[i];
      worst = std::max(worst, abs_double(diff));
    }
    return worst;
  }

  bool pushforward_invariant(const Permutation& m1, const Permutation& m2, const Permutation& m3) const {
    for (std::size_t i = 0; i < support_.size(); ++i) {
      const auto& t = support_[i];
      if (weight_of({m1[t[0]], m2[t[1]], m3[t[2]]}) != weights_[i]) return false;
    }
    return true;
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t key(const Triple& t) const { return (t[0] * base_.size() + t[1]) * base_.size() + t[2]; }

  FiniteSpace<R> base_;
  std::vector<Triple> support_;
  std::vector<R> weights_;
  std::vector<std::size_t> index_;
};

template <class R> TripleMeasure<R> lambda_measure(const CommutingPair<R>& pair) {
  const auto& sp = pair.space();
  auto is = invariant_partition(pair.S());
  auto it = invariant_partition(pair.T());
  auto s_mass = block_masses(sp, is);
  auto t_mass = block_masses(sp, it);
  auto s_members = is.members();
  auto t_members = it.members();
  std::vector<Triple> support;
  std::vector<R> weights;
  for (std::size_t x = 0; x < sp.size(); ++x) {
    for (auto z1 : s_members[is.block_of(x)]) {
      for (auto z2 : t_members[it.block_of(x)]) {
        support.push_back({z1, z2, x});
        weights.push_back(sp.weight(z1) / s_mass[is.block_of(x)] * (sp.weight(z2) / t_mass[it.block_of(x)]) *
                          sp.weight(x));
      }
    }
  }
  return TripleMeasure<R>(sp, std::move(support), std::move(weights));
}

/// int E(f1|I_S) E(f2|I_T) f3 d mu, the alternative description of lambda.
template <class R, class V>
V lambda_integral_via_expectations(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                                    const Observable<V>& f3) {
  const auto& sp = pair.space();
  auto e1 = conditional_expectation(sp, f1, invariant_partition(pair.S()));
  auto e2 = conditional_expectation(sp, f2, invariant_partition(pair.T()));
  return integral(sp, e1 * e2 * f3);
}

} // namespace commavg

#endif // COMMAVG_LAMBDA_HPP
