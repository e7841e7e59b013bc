#ifndef COMMAVG_ACTIONS_HPP
#define COMMAVG_ACTIONS_HPP

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "groups.hpp"
#include "spaces.hpp"
#include "union_find.hpp"

namespace commavg {

/// Point map x -> perm[x].
using Permutation = std::vector<std::size_t>;

namespace perm {

inline Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

inline bool is_valid(const Permutation& p) {
  std::vector<bool> hit(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

/// (a ∘ b)(x) = a(b(x))
inline Permutation compose(const Permutation& a, const Permutation& b) {
  detail::require_same_size(a.size(), b.size(), "permutation composition");
  Permutation out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[b[x]];
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[p[x]] = x;
  return out;
}

inline bool commute(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[b[x]] != b[a[x]]) return false;
  return true;
}

/// lcm of cycle lengths
inline std::uint64_t order(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  std::uint64_t ord = 1;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (seen[x]) continue;
    std::uint64_t len = 0;
    for (std::size_t y = x; !seen[y]; y = p[y]) {
      seen[y] = true;
      ++len;
    }
    ord = std::lcm(ord, len);
  }
  return ord;
}

} // namespace perm

/**
 * Measure-preserving action of a GroupSpec on points 0..n-1.
 *
 * For Z^d the data are the d generator images (pairwise commuting); T_g for
 * g = (c_1,...,c_d) is the composite of generator powers. For a finite table
 * the data hold one permutation per element and must form a homomorphism:
 * T_g ∘ T_h = T_{gh}. Functions pull back as T_g f = f ∘ T_g.
 */
class Action {
public:
  Action() = default;

  /// Structural validation only (no weights). Prefer action_from_generators.
  Action(GroupSpec group, std::size_t points, std::vector<Permutation> maps)
      : group_(std::move(group)), points_(points), maps_(std::move(maps)) {
    if (maps_.size() != group_.action_arity()) {
      throw DimensionError("expected " + std::to_string(group_.action_arity()) + " permutations, got " +
                           std::to_string(maps_.size()));
    }
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      if (maps_[i].size() != points_ || !perm::is_valid(maps_[i]))
        throw ValidationError("map " + std::to_string(i) + " is not a permutation of " + std::to_string(points_) +
                              " points");
    }
    if (group_.is_free_abelian()) {
      for (std::size_t i = 0; i < maps_.size(); ++i)
        for (std::size_t j = i + 1; j < maps_.size(); ++j)
          if (!perm::commute(maps_[i], maps_[j]))
            throw ValidationError("generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
      build_cycles();
    } else {
      const auto& t = group_.table();
      if (maps_[t.identity] != perm::identity(points_))
        throw ValidationError("identity element does not act as the identity");
      for (std::size_t g = 0; g < t.order(); ++g)
        for (std::size_t h = 0; h < t.order(); ++h)
          for (std::size_t x = 0; x < points_; ++x)
            if (maps_[g][maps_[h][x]] != maps_[t.table[g][h]][x])
              throw ValidationError("homomorphism fails: T_" + std::to_string(g) + " T_" + std::to_string(h) +
                                    " != T_" + std::to_string(t.table[g][h]));
    }
  }

  const GroupSpec& group() const noexcept { return group_; }
  std::size_t points() const noexcept { return points_; }
  /// Generator images (Z^d) or per-element maps (finite table).
  const std::vector<Permutation>& maps() const noexcept { return maps_; }

  std::size_t apply(const GroupElement& g, std::size_t x) const {
    group_.check(g);
    if (group_.is_finite()) return maps_[std::get<1>(g)][x];
    const auto& c = std::get<0>(g);
    for (std::size_t i = 0; i < c.size(); ++i) x = power(i, c[i], x);
    return x;
  }

  /// x -> T_g x as a permutation.
  Permutation element_map(const GroupElement& g) const {
    group_.check(g);
    if (group_.is_finite()) return maps_[std::get<1>(g)];
    Permutation out(points_);
    for (std::size_t x = 0; x < points_; ++x) out[x] = apply(g, x);
    return out;
  }

  /// Order of each generator (Z^d) or of each element map (finite table).
  std::vector<std::uint64_t> map_orders() const {
    std::vector<std::uint64_t> out;
    for (const auto& m : maps_) out.push_back(perm::order(m));
    return out;
  }

  friend bool operator==(const Action& a, const Action& b) {
    return a.group_ == b.group_ && a.points_ == b.points_ && a.maps_ == b.maps_;
  }

private:
  // T_i^k x via the cycle through x.
  std::size_t power(std::size_t i, std::int64_t k, std::size_t x) const {
    const auto& cyc = cycles_[i][cycle_of_[i][x]];
    auto len = static_cast<std::int64_t>(cyc.size());
    auto pos = static_cast<std::int64_t>(position_[i][x]);
    auto r = ((pos + k) % len + len) % len;
    return cyc[static_cast<std::size_t>(r)];
  }

  void build_cycles() {
    cycles_.assign(maps_.size(), {});
    cycle_of_.assign(maps_.size(), std::vector<std::size_t>(points_));
    position_.assign(maps_.size(), std::vector<std::size_t>(points_));
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      std::vector<bool> seen(points_, false);
      for (std::size_t x = 0; x < points_; ++x) {
        if (seen[x]) continue;
        std::vector<std::size_t> cyc;
        for (std::size_t y = x; !seen[y]; y = maps_[i][y]) {
          seen[y] = true;
          cycle_of_[i][y] = cycles_[i].size();
          position_[i][y] = cyc.size();
          cyc.push_back(y);
        }
        cycles_[i].push_back(std::move(cyc));
      }
    }
  }

  GroupSpec group_;
  std::size_t points_ = 0;
  std::vector<Permutation> maps_;
  std::vector<std::vector<std::vector<std::size_t>>> cycles_;
  std::vector<std::vector<std::size_t>> cycle_of_;
  std::vector<std::vector<std::size_t>> position_;
};

/// Throws unless every map preserves the weights exactly.
template <class R> void require_weight_preserving(const Action& a, const FiniteSpace<R>& sp) {
  detail::require_same_size(a.points(), sp.size(), "action on space");
  for (std::size_t i = 0; i < a.maps().size(); ++i)
    for (std::size_t x = 0; x < sp.size(); ++x)
      if (sp.weight(a.maps()[i][x]) != sp.weight(x))
        throw ValidationError("map " + std::to_string(i) + " does not preserve the weight of point " +
                              std::to_string(x));
}

template <class R>
Action action_from_generators(const GroupSpec& group, const FiniteSpace<R>& sp, std::vector<Permutation> perms) {
  Action a(group, sp.size(), std::move(perms));
  require_weight_preserving(a, sp);
  return a;
}

inline Action identity_action(const GroupSpec& group, std::size_t n) {
  return Action(group, n, std::vector<Permutation>(group.action_arity(), perm::identity(n)));
}

/// (T_g f)(x) = f(T_g x)
template <class V> Observable<V> pullback(const Action& a, const GroupElement& g, const Observable<V>& f) {
  detail::require_same_size(a.points(), f.size(), "pullback");
  auto map = a.element_map(g);
  Observable<V> out(f.size(), V(0));
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[map[x]];
  return out;
}

/// Orbit partition of the action; with positive weights this is exactly the invariant sigma-algebra.
inline Partition invariant_partition(const Action& a) {
  UnionFind uf(a.points());
  for (const auto& m : a.maps())
    for (std::size_t x = 0; x < a.points(); ++x) uf.unite(x, m[x]);
  return Partition::from_labels(uf.roots());
}

/// Orbit partition of the group generated by two actions on the same points.
inline Partition joint_invariant_partition(const Action& a, const Action& b) {
  detail::require_same_size(a.points(), b.points(), "joint orbits");
  UnionFind uf(a.points());
  for (const auto* act : {&a, &b})
    for (const auto& m : act->maps())
      for (std::size_t x = 0; x < act->points(); ++x) uf.unite(x, m[x]);
  return Partition::from_labels(uf.roots());
}

/**
 * g -> a_g x b_g on the support of a pair space. The support must be
 * invariant under every generator; the returned action is weight-preserving
 * on the pair weights.
 */
template <class R> Action product_action(const Action& a, const Action& b, const WeightedPairSpace<R>& pairs) {
  if (!(a.group() == b.group())) throw StructuralError("product action needs a common group");
  detail::require_same_size(a.points(), pairs.base().size(), "product action (first)");
  detail::require_same_size(b.points(), pairs.base().size(), "product action (second)");
  std::vector<Permutation> maps;
  maps.reserve(a.maps().size());
  for (std::size_t i = 0; i < a.maps().size(); ++i) {
    Permutation m(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto [w, z] = pairs.support()[k];
      auto image = pairs.index_of(a.maps()[i][w], b.maps()[i][z]);
      if (!image) {
        throw StructuralError("pair support is not invariant: (" + std::to_string(w) + "," + std::to_string(z) +
                              ") leaves it under map " + std::to_string(i));
      }
      m[k] = *image;
    }
    maps.push_back(std::move(m));
  }
  Action out(a.group(), pairs.size(), std::move(maps));
  require_weight_preserving(out, pairs.as_space());
  return out;
}

/// g -> b_g ∘ a_g. A valid action whenever a and b commute.
inline Action composed_action(const Action& a, const Action& b) {
  if (!(a.group() == b.group())) throw StructuralError("composed action needs a common group");
  std::vector<Permutation> maps;
  for (std::size_t i = 0; i < a.maps().size(); ++i) maps.push_back(perm::compose(b.maps()[i], a.maps()[i]));
  return Action(a.group(), a.points(), std::move(maps));
}

/// Two commuting measure-preserving actions of one group on one space.
template <class R> class CommutingPair {
public:
  CommutingPair() = default;
  CommutingPair(FiniteSpace<R> space, Action t, Action s)
      : space_(std::move(space)), t_(std::move(t)), s_(std::move(s)) {
    if (!(t_.group() == s_.group())) throw ValidationError("T and S act by different groups");
    require_weight_preserving(t_, space_);
    require_weight_preserving(s_, space_);
    for (std::size_t i = 0; i < t_.maps().size(); ++i)
      for (std::size_t j = 0; j < s_.maps().size(); ++j)
        if (!perm::commute(t_.maps()[i], s_.maps()[j]))
          throw ValidationError("T map " + std::to_string(i) + " does not commute with S map " + std::to_string(j));
  }

  const FiniteSpace<R>& space() const noexcept { return space_; }
  const Action& T() const noexcept { return t_; }
  const Action& S() const noexcept { return s_; }
  const GroupSpec& group() const noexcept { return t_.group(); }
  std::size_t points() const noexcept { return space_.size(); }

  friend bool operator==(const CommutingPair&, const CommutingPair&) = default;

private:
  FiniteSpace<R> space_;
  Action t_;
  Action s_;
};

/**
 * Skew-product pair on Z_p x Z_q x Z_r (uniform weights), point index
 * (y0*q + y1)*r + k:
 *   T(y0, y1, k) = (y0 + 1, y1, k + tau(y0)),
 *   S(y0, y1, k) = (y0, y1 + 1, k - sigma(y1)).
 */
template <class R>
CommutingPair<R> skew_product_example(std::size_t p, std::size_t q, std::size_t r, const std::vector<std::size_t>& tau,
                                      const std::vector<std::size_t>& sigma) {
  if (p == 0 || q == 0 || r == 0) throw ValidationError("p, q, r must be at least 1");
  if (tau.size() != p) throw ValidationError("tau must have p = " + std::to_string(p) + " entries");
  if (sigma.size() != q) throw ValidationError("sigma must have q = " + std::to_string(q) + " entries");
  for (auto v : tau)
    if (v >= r) throw ValidationError("tau value " + std::to_string(v) + " outside Z_" + std::to_string(r));
  for (auto v : sigma)
    if (v >= r) throw ValidationError("sigma value " + std::to_string(v) + " outside Z_" + std::to_string(r));

  const std::size_t n = p * q * r;
  auto index = [&](std::size_t y0, std::size_t y1, std::size_t k) { return (y0 * q + y1) * r + k; };
  Permutation t(n), s(n);
  for (std::size_t y0 = 0; y0 < p; ++y0)
    for (std::size_t y1 = 0; y1 < q; ++y1)
      for (std::size_t k = 0; k < r; ++k) {
        t[index(y0, y1, k)] = index((y0 + 1) % p, y1, (k + tau[y0]) % r);
        s[index(y0, y1, k)] = index(y0, (y1 + 1) % q, (k + r - sigma[y1]) % r);
      }
  auto group = GroupSpec::free_abelian(1);
  auto space = FiniteSpace<R>::uniform(n);
  auto T = action_from_generators(group, space, {t});
  auto S = action_from_generators(group, space, {s});
  return CommutingPair<R>(std::move(space), std::move(T), std::move(S));
}

} // namespace commavg

#endif // COMMAVG_ACTIONS_HPP
