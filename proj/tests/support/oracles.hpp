#ifndef COMMAVG_TESTS_ORACLES_HPP
#define COMMAVG_TESTS_ORACLES_HPP

// Brute-force reference computations. None of these reuse the library's
// orbit, projection or compression machinery.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "commavg/commavg.hpp"

namespace oracle {

using namespace commavg;

/// Image of x under T_g, applying generator permutations one step at a time.
inline std::size_t act(const Action& a, const GroupElement& g, std::size_t x) {
  if (a.group().is_finite()) return a.maps()[std::get<std::size_t>(g)][x];
  const auto& c = std::get<std::vector<std::int64_t>>(g);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& gen = a.maps()[i];
    if (c[i] >= 0) {
      for (std::int64_t k = 0; k < c[i]; ++k) x = gen[x];
    } else {
      for (std::int64_t k = 0; k < -c[i]; ++k) {
        std::size_t y = 0;
        while (gen[y] != x) ++y;
        x = y;
      }
    }
  }
  return x;
}

/// Orbit labels by breadth-first search over generator images in both directions.
inline std::vector<std::size_t> orbit_labels(const std::vector<Permutation>& gens, std::size_t n) {
  std::vector<std::size_t> label(n, n);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != n) continue;
    std::deque<std::size_t> queue{s};
    label[s] = next;
    while (!queue.empty()) {
      auto x = queue.front();
      queue.pop_front();
      for (const auto& g : gens)
        for (std::size_t y = 0; y < n; ++y)
          if ((g[x] == y || g[y] == x) && label[y] == n) {
            label[y] = next;
            queue.push_back(y);
          }
    }
    ++next;
  }
  return label;
}

inline std::size_t count_labels(const std::vector<std::size_t>& label) {
  std::size_t m = 0;
  for (auto l : label) m = std::max(m, l + 1);
  return m;
}

/// E(f | labels) as weighted block averages.
template <class R, class V>
Observable<V> block_average(const FiniteSpace<R>& sp, const Observable<V>& f, const std::vector<std::size_t>& label) {
  Observable<V> out(f.size(), V(0));
  for (std::size_t x = 0; x < f.size(); ++x) {
    V num(0);
    R den(0);
    for (std::size_t y = 0; y < f.size(); ++y)
      if (label[y] == label[x]) {
        num += f[y] * from_real<V>(sp.weight(y));
        den += sp.weight(y);
      }
    out[x] = num / from_real<V>(den);
  }
  return out;
}

/// Direct double sum over Phi_n x Psi_n.
template <class R, class V>
Observable<V> multi_average(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                            const Observable<V>& f3, const FolnerSequence& phi, const FolnerSequence& psi,
                            std::int64_t n) {
  auto gs = phi.elements(n);
  auto hs = psi.elements(n);
  Observable<V> out(f1.size(), V(0));
  for (std::size_t x = 0; x < f1.size(); ++x) {
    V acc(0);
    for (const auto& g : gs)
      for (const auto& h : hs) {
        auto sx = act(pair.S(), h, x);
        acc += f1[act(pair.T(), g, x)] * f2[sx] * f3[act(pair.T(), g, sx)];
      }
    out[x] = acc / V(static_cast<long long>(gs.size() * hs.size()));
  }
  return out;
}

/// The limit as the average over one full period [0, p)^d of each generator's order.
template <class R, class V>
Observable<V> period_limit(const CommutingPair<R>& pair, const Observable<V>& f1, const Observable<V>& f2,
                           const Observable<V>& f3) {
  if (pair.group().is_finite()) {
    auto full = FolnerSequence::full_group(pair.group());
    return oracle::multi_average(pair, f1, f2, f3, full, full, 0);
  }
  std::uint64_t p = 1;
  for (const auto* a : {&pair.T(), &pair.S()})
    for (const auto& g : a->maps()) {
      auto y = g;
      std::uint64_t k = 1;
      while (y != perm::identity(y.size())) {
        y = perm::compose(g, y);
        ++k;
      }
      p = std::lcm(p, k);
    }
  auto box = FolnerSequence::half_open(pair.group(), 0, 1);
  return oracle::multi_average(pair, f1, f2, f3, box, box, static_cast<std::int64_t>(p));
}

/// All monochromatic parallelepipeds, then the (g, h, k, a)-lexicographic minimum.
inline std::optional<ParallelepipedHit> parallelepiped(const Coloring3& c, std::size_t max_shift) {
  const std::size_t n = c.side();
  std::optional<std::array<std::size_t, 6>> best;
  std::uint8_t best_color = 0;
  for (std::size_t a1 = 0; a1 < n; ++a1)
    for (std::size_t a2 = 0; a2 < n; ++a2)
      for (std::size_t a3 = 0; a3 < n; ++a3)
        for (std::size_t g = 1; g <= max_shift && a1 + g < n; ++g)
          for (std::size_t h = 1; h <= max_shift && a2 + h < n; ++h)
            for (std::size_t k = 1; k <= max_shift && a3 + k < n; ++k) {
              auto col = c.at(a1, a2, a3);
              bool mono = true;
              for (std::size_t e = 1; e < 8 && mono; ++e)
                mono = c.at(a1 + (e & 1 ? g : 0), a2 + (e & 2 ? h : 0), a3 + (e & 4 ? k : 0)) == col;
              if (!mono) continue;
              std::array<std::size_t, 6> key{g, h, k, a1, a2, a3};
              if (!best || key < *best) {
                best = key;
                best_color = col;
              }
            }
  if (!best) return std::nullopt;
  const auto& b = *best;
  return ParallelepipedHit{best_color, {b[3], b[4], b[5]}, {b[0], b[1], b[2]}};
}

/// Count of E ∩ (E-(g,0)) ∩ (E-(0,h)) ∩ (E-(g,h)) over sub, cell by cell.
inline std::size_t intersection_count(const GridSet& e, std::int64_t g, std::int64_t h, const Box2& sub) {
  std::size_t c = 0;
  for (auto x = sub.x0; x < sub.x1; ++x)
    for (auto y = sub.y0; y < sub.y1; ++y)
      if (e.contains(x, y) && e.contains(x + g, y) && e.contains(x, y + h) && e.contains(x + g, y + h)) ++c;
  return c;
}

/// Smallest L such that every L x L square in the window meets S, by direct search.
inline std::optional<std::int64_t> syndeticity(const GridSet& s) {
  const auto& w = s.window();
  for (std::int64_t l = 1; l <= std::min(w.width(), w.height()); ++l) {
    bool all = true;
    for (auto x = w.x0; x + l <= w.x1 && all; ++x)
      for (auto y = w.y0; y + l <= w.y1 && all; ++y) {
        bool hit = false;
        for (auto a = x; a < x + l && !hit; ++a)
          for (auto b = y; b < y + l && !hit; ++b) hit = s.contains(a, b);
        all = hit;
      }
    if (all) return l;
  }
  return std::nullopt;
}

} // namespace oracle

#endif // COMMAVG_TESTS_ORACLES_HPP
