#ifndef COMMAVG_TESTS_RANDOM_SYSTEMS_HPP
#define COMMAVG_TESTS_RANDOM_SYSTEMS_HPP

// Generators of commuting measure-preserving pairs for property tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "commavg/commavg.hpp"

namespace testsupport {

using namespace commavg;

struct Component {
  std::size_t n = 0;
  std::vector<Permutation> t; // one per generator
  std::vector<Permutation> s;
};

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Permutation power(const Permutation& p, std::size_t k) {
  Permutation out = perm::identity(p.size());
  for (std::size_t i = 0; i < k; ++i) out = perm::compose(p, out);
  return out;
}

/// Translations on Z_m1 x Z_m2; point (a, b) has index a * m2 + b.
inline Component translation_component(Rng& rng, std::size_t rank, std::size_t max_points, bool same) {
  std::size_t m1 = pick(rng, 1, std::min<std::size_t>(max_points, 8));
  std::size_t m2 = pick(rng, 1, std::max<std::size_t>(1, std::min<std::size_t>(4, max_points / m1)));
  Component c;
  c.n = m1 * m2;
  auto shift = [&](std::size_t u, std::size_t v) {
    Permutation p(c.n);
    for (std::size_t a = 0; a < m1; ++a)
      for (std::size_t b = 0; b < m2; ++b) p[a * m2 + b] = ((a + u) % m1) * m2 + (b + v) % m2;
    return p;
  };
  for (std::size_t i = 0; i < rank; ++i) {
    c.t.push_back(shift(pick(rng, 0, m1 - 1), pick(rng, 0, m2 - 1)));
    c.s.push_back(same ? c.t.back() : shift(pick(rng, 0, m1 - 1), pick(rng, 0, m2 - 1)));
  }
  return c;
}

/// Skew product over Z_p x Z_q with fiber Z_r; extra generators are powers of the first.
inline Component skew_component(Rng& rng, std::size_t rank, std::size_t max_points) {
  std::size_t r = pick(rng, 2, 3);
  std::size_t p = pick(rng, 1, std::max<std::size_t>(1, std::min<std::size_t>(4, max_points / r)));
  std::size_t q = pick(rng, 1, std::max<std::size_t>(1, std::min<std::size_t>(3, max_points / (r * p))));
  std::vector<std::size_t> tau(p), sigma(q);
  for (auto& v : tau) v = pick(rng, 0, r - 1);
  for (auto& v : sigma) v = pick(rng, 0, r - 1);
  auto pair = skew_product_example<Rational>(p, q, r, tau, sigma);
  Component c;
  c.n = pair.points();
  const auto& t = pair.T().maps()[0];
  const auto& s = pair.S().maps()[0];
  c.t.push_back(t);
  c.s.push_back(s);
  for (std::size_t i = 1; i < rank; ++i) {
    c.t.push_back(power(t, pick(rng, 0, 3)));
    c.s.push_back(power(s, pick(rng, 0, 3)));
  }
  return c;
}

/// Disjoint union of components, relabeled by a random permutation.
inline Component disjoint_union(Rng& rng, const std::vector<Component>& parts, std::size_t rank) {
  Component u;
  for (const auto& p : parts) u.n += p.n;
  Permutation relabel(u.n);
  std::iota(relabel.begin(), relabel.end(), std::size_t{0});
  std::shuffle(relabel.begin(), relabel.end(), rng);
  u.t.assign(rank, Permutation(u.n));
  u.s.assign(rank, Permutation(u.n));
  std::size_t base = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t x = 0; x < p.n; ++x) {
        u.t[i][relabel[base + x]] = relabel[base + p.t[i][x]];
        u.s[i][relabel[base + x]] = relabel[base + p.s[i][x]];
      }
    base += p.n;
  }
  return u;
}

/// Positive rational weights constant on the joint orbits of all generators.
inline std::vector<Rational> orbit_constant_weights(Rng& rng, const Component& c, bool uniform) {
  UnionFind uf(c.n);
  for (const auto* gens : {&c.t, &c.s})
    for (const auto& g : *gens)
      for (std::size_t x = 0; x < c.n; ++x) uf.unite(x, g[x]);
  std::vector<long long> per_root(c.n, 0);
  std::vector<Rational> w(c.n);
  long long total = 0;
  for (std::size_t x = 0; x < c.n; ++x) {
    auto r = uf.find(x);
    if (per_root[r] == 0) per_root[r] = uniform ? 1 : static_cast<long long>(pick(rng, 1, 5));
    total += per_root[r];
  }
  for (std::size_t x = 0; x < c.n; ++x) w[x] = Rational(per_root[uf.find(x)], total);
  return w;
}

template <class R> std::vector<R> convert_weights(const std::vector<Rational>& w) {
  std::vector<R> out;
  for (const auto& v : w) out.push_back(from_real<R>(v));
  return out;
}

template <class R> CommutingPair<R> pair_from(const Component& c, const std::vector<Rational>& w) {
  auto group = GroupSpec::free_abelian(c.t.size());
  FiniteSpace<R> sp(convert_weights<R>(w));
  return CommutingPair<R>(sp, action_from_generators(group, sp, c.t), action_from_generators(group, sp, c.s));
}

/**
 * Random commuting pair on at most `max_points` points for Z^rank, mixing
 * translation components (sometimes with S = T), skew products and fixed
 * points, with full period at most `max_period`.
 */
template <class R>
CommutingPair<R> random_pair(Rng& rng, std::size_t rank, std::size_t max_points = 24, std::uint64_t max_period = 60) {
  while (true) {
    std::vector<Component> parts;
    std::size_t used = 0;
    std::size_t count = pick(rng, 1, 3);
    for (std::size_t k = 0; k < count && used < max_points; ++k) {
      std::size_t room = max_points - used;
      Component c;
      switch (pick(rng, 0, 3)) {
      case 0: c = translation_component(rng, rank, room, false); break;
      case 1: c = translation_component(rng, rank, room, true); break;
      case 2:
        if (room >= 2) {
          c = skew_component(rng, rank, room);
          break;
        }
        [[fallthrough]];
      default: c = translation_component(rng, rank, std::min<std::size_t>(room, 3), false); break;
      }
      used += c.n;
      parts.push_back(std::move(c));
    }
    auto u = disjoint_union(rng, parts, rank);
    auto pair = pair_from<R>(u, orbit_constant_weights(rng, u, pick(rng, 0, 2) == 0));
    auto p = full_period(pair);
    if (p && *p <= max_period) return pair;
  }
}

// ---------------------------------------------------------------------------
// Finite groups given by tables

/// S_k with permutations in lexicographic order; product (a b)(x) = a(b(x)).
inline FiniteTable symmetric_group_table(std::size_t k) {
  std::vector<Permutation> elems;
  Permutation p(k);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do elems.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const Permutation& q) {
    return static_cast<std::size_t>(std::find(elems.begin(), elems.end(), q) - elems.begin());
  };
  FiniteTable t;
  t.table.assign(elems.size(), std::vector<std::size_t>(elems.size()));
  t.inverse.resize(elems.size());
  for (std::size_t a = 0; a < elems.size(); ++a) {
    for (std::size_t b = 0; b < elems.size(); ++b) t.table[a][b] = index(perm::compose(elems[a], elems[b]));
    t.inverse[a] = index(perm::inverse(elems[a]));
  }
  t.identity = 0;
  return t;
}

inline FiniteTable cyclic_group_table(std::size_t m) {
  FiniteTable t;
  t.table.assign(m, std::vector<std::size_t>(m));
  t.inverse.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) t.table[a][b] = (a + b) % m;
    t.inverse[a] = (m - a) % m;
  }
  t.identity = 0;
  return t;
}

/// G acting on itself: T_g x = g x, S_h x = x h^{-1}; uniform weights.
template <class R> CommutingPair<R> left_right_pair(const FiniteTable& table) {
  auto g = GroupSpec::finite_table(table);
  const std::size_t m = table.order();
  std::vector<Permutation> left(m, Permutation(m)), right(m, Permutation(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t x = 0; x < m; ++x) {
      left[a][x] = table.table[a][x];
      right[a][x] = table.table[x][table.inverse[a]];
    }
  auto sp = FiniteSpace<R>::uniform(m);
  return CommutingPair<R>(sp, Action(g, m, left), Action(g, m, right));
}

/// Two-point flip for Z with T = S.
template <class R> CommutingPair<R> flip_pair() {
  auto g = GroupSpec::free_abelian(1);
  auto sp = FiniteSpace<R>::uniform(2);
  return CommutingPair<R>(sp, action_from_generators(g, sp, {{1, 0}}), action_from_generators(g, sp, {{1, 0}}));
}

template <class R> CommutingPair<R> identity_pair(std::size_t n, std::size_t rank = 1) {
  auto g = GroupSpec::free_abelian(rank);
  auto sp = FiniteSpace<R>::uniform(n);
  return CommutingPair<R>(sp, identity_action(g, n), identity_action(g, n));
}

/// Rotation x -> x + 1 on Z_p for both T and S.
template <class R> CommutingPair<R> rotation_pair(std::size_t p) {
  auto g = GroupSpec::free_abelian(1);
  auto sp = FiniteSpace<R>::uniform(p);
  Permutation r(p);
  for (std::size_t x = 0; x < p; ++x) r[x] = (x + 1) % p;
  return CommutingPair<R>(sp, action_from_generators(g, sp, {r}), action_from_generators(g, sp, {r}));
}

} // namespace testsupport

#endif // COMMAVG_TESTS_RANDOM_SYSTEMS_HPP
