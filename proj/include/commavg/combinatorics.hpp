#ifndef COMMAVG_COMBINATORICS_HPP
#define COMMAVG_COMBINATORICS_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"

namespace commavg {

/// Half-open box [x0, x1) x [y0, y1) in Z^2.
struct Box2 {
  std::int64_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  std::int64_t width() const noexcept { return std::max<std::int64_t>(0, x1 - x0); }
  std::int64_t height() const noexcept { return std::max<std::int64_t>(0, y1 - y0); }
  std::int64_t area() const noexcept { return width() * height(); }
  bool empty() const noexcept { return area() == 0; }
  bool contains(const Box2& b) const noexcept {
    return b.empty() || (b.x0 >= x0 && b.y0 >= y0 && b.x1 <= x1 && b.y1 <= y1);
  }
  Box2 shifted(std::int64_t dx, std::int64_t dy) const noexcept { return {x0 + dx, y0 + dy, x1 + dx, y1 + dy}; }
  std::string str() const {
    return "[" + std::to_string(x0) + "," + std::to_string(x1) + ")x[" + std::to_string(y0) + "," +
           std::to_string(y1) + ")";
  }
  friend bool operator==(const Box2&, const Box2&) = default;
};

/**
 * Subset of a window of Z^2, stored as bit rows: row x holds the bits for
 * y in [y0, y1), 64 per word, with one spare word so shifted reads never
 * run past the end.
 */
class GridSet {
public:
  GridSet() = default;
  explicit GridSet(Box2 window) : window_(window) {
    if (window.empty()) throw ValidationError("grid window " + window.str() + " is empty");
    words_ = static_cast<std::size_t>((window.height() + 63) / 64) + 1;
    bits_.assign(static_cast<std::size_t>(window.width()) * words_, 0);
  }
  GridSet(std::int64_t w1, std::int64_t w2) : GridSet(Box2{0, 0, w1, w2}) {}

  const Box2& window() const noexcept { return window_; }

  bool contains(std::int64_t x, std::int64_t y) const {
    if (x < window_.x0 || x >= window_.x1 || y < window_.y0 || y >= window_.y1) return false;
    auto c = static_cast<std::size_t>(y - window_.y0);
    return (row(x)[c / 64] >> (c % 64)) & 1U;
  }

  void set(std::int64_t x, std::int64_t y, bool value = true) {
    if (x < window_.x0 || x >= window_.x1 || y < window_.y0 || y >= window_.y1)
      throw DomainError("point (" + std::to_string(x) + "," + std::to_string(y) + ") outside window " + window_.str());
    auto c = static_cast<std::size_t>(y - window_.y0);
    auto& word = bits_[static_cast<std::size_t>(x - window_.x0) * words_ + c / 64];
    if (value) word |= (std::uint64_t{1} << (c % 64));
    else word &= ~(std::uint64_t{1} << (c % 64));
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// 64 bits of row x starting at column y (window coordinates), zero past the end.
  std::uint64_t word_at(std::int64_t x, std::int64_t y) const {
    auto c = static_cast<std::size_t>(y - window_.y0);
    const std::uint64_t* r = row(x);
    std::size_t i = c / 64, s = c % 64;
    std::uint64_t lo = i < words_ ? r[i] : 0;
    if (s == 0) return lo;
    std::uint64_t hi = i + 1 < words_ ? r[i + 1] : 0;
    return (lo >> s) | (hi << (64 - s));
  }

  friend bool operator==(const GridSet&, const GridSet&) = default;

private:
  const std::uint64_t* row(std::int64_t x) const { return &bits_[static_cast<std::size_t>(x - window_.x0) * words_]; }

  Box2 window_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

inline void require_inside(const GridSet& e, const Box2& b, const char* what) {
  if (!e.window().contains(b))
    throw DomainError(std::string(what) + ": box " + b.str() + " escapes window " + e.window().str());
}

// |{(a,b) in sub : (a,b), (a+g,b), (a,b+h), (a+g,b+h) all in E}|
inline std::size_t intersection_count(const GridSet& e, std::int64_t g, std::int64_t h, const Box2& sub) {
  std::size_t total = 0;
  const std::int64_t width = sub.height();
  for (std::int64_t a = sub.x0; a < sub.x1; ++a) {
    for (std::int64_t off = 0; off < width; off += 64) {
      std::uint64_t m = e.word_at(a, sub.y0 + off) & e.word_at(a + g, sub.y0 + off) &
                        e.word_at(a, sub.y0 + off + h) & e.word_at(a + g, sub.y0 + off + h);
      std::int64_t left = width - off;
      if (left < 64) m &= (std::uint64_t{1} << left) - 1;
      total += static_cast<std::size_t>(std::popcount(m));
    }
  }
  return total;
}

} // namespace detail

/// |E ∩ sub| / |sub|
inline double window_density(const GridSet& e, const Box2& sub) {
  if (sub.empty()) throw DomainError("density over an empty box");
  detail::require_inside(e, sub, "window density");
  return static_cast<double>(detail::intersection_count(e, 0, 0, sub)) / static_cast<double>(sub.area());
}

/// Density over sub of E ∩ (E-(g,0)) ∩ (E-(0,h)) ∩ (E-(g,h)).
inline double intersection_density_scan(const GridSet& e, std::int64_t g, std::int64_t h, const Box2& sub) {
  if (sub.empty()) throw DomainError("density over an empty box");
  detail::require_inside(e, sub, "intersection density");
  detail::require_inside(e, sub.shifted(g, 0), "intersection density");
  detail::require_inside(e, sub.shifted(0, h), "intersection density");
  detail::require_inside(e, sub.shifted(g, h), "intersection density");
  return static_cast<double>(detail::intersection_count(e, g, h, sub)) / static_cast<double>(sub.area());
}

struct GoodPairScan {
  double delta = 0.0;     ///< window_density(E, sub)
  double threshold = 0.0; ///< delta^4 - epsilon
  GridSet good;           ///< shifts (g,h) in range whose density exceeds the threshold
  std::vector<double> densities; ///< row-major over range: (g - g0) * height + (h - h0)
};

/// All (g,h) in `range` with intersection density over `sub` greater than delta^4 - epsilon.
inline GoodPairScan good_pair_set(const GridSet& e, double epsilon, const Box2& sub, const Box2& range) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (range.empty()) throw DomainError("shift range " + range.str() + " is empty");
  GoodPairScan scan;
  scan.delta = window_density(e, sub);
  scan.threshold = scan.delta * scan.delta * scan.delta * scan.delta - epsilon;
  // Every shift in the range must keep the shifted boxes inside the window.
  for (auto gx : {range.x0, range.x1 - 1})
    for (auto hy : {range.y0, range.y1 - 1}) {
      detail::require_inside(e, sub.shifted(gx, 0), "good pair scan");
      detail::require_inside(e, sub.shifted(0, hy), "good pair scan");
      detail::require_inside(e, sub.shifted(gx, hy), "good pair scan");
    }
  scan.good = GridSet(range);
  const auto rows = static_cast<std::size_t>(range.width());
  const auto cols = static_cast<std::size_t>(range.height());
  scan.densities.assign(rows * cols, 0.0);
  const double area = static_cast<double>(sub.area());
  parallel_for(rows, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        auto g = range.x0 + static_cast<std::int64_t>(i);
        auto h = range.y0 + static_cast<std::int64_t>(j);
        scan.densities[i * cols + j] = static_cast<double>(detail::intersection_count(e, g, h, sub)) / area;
      }
  });
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (scan.densities[i * cols + j] > scan.threshold)
        scan.good.set(range.x0 + static_cast<std::int64_t>(i), range.y0 + static_cast<std::int64_t>(j));
  return scan;
}

/// Smallest L such that every L x L square inside the window meets S; empty if none up to the short side.
inline std::optional<std::int64_t> syndeticity_estimate(const GridSet& s) {
  const auto& w = s.window();
  const auto rows = static_cast<std::size_t>(w.width());
  const auto cols = static_cast<std::size_t>(w.height());
  std::vector<std::size_t> prefix((rows + 1) * (cols + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return prefix[i * (cols + 1) + j]; };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      at(i + 1, j + 1) = at(i, j + 1) + at(i + 1, j) - at(i, j) +
                         (s.contains(w.x0 + static_cast<std::int64_t>(i), w.y0 + static_cast<std::int64_t>(j)) ? 1 : 0);
  auto every_square_meets = [&](std::size_t len) {
    for (std::size_t i = 0; i + len <= rows; ++i)
      for (std::size_t j = 0; j + len <= cols; ++j)
        if (at(i + len, j + len) - at(i, j + len) - at(i + len, j) + at(i, j) == 0) return false;
    return true;
  };
  // Monotone in L: an (L+1)-square contains an L-square.
  std::size_t lo = 1, hi = std::min(rows, cols);
  if (!every_square_meets(hi)) return std::nullopt;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (every_square_meets(mid)) hi = mid;
    else lo = mid + 1;
  }
  return static_cast<std::int64_t>(lo);
}

/// Coloring of [0, N)^3 by colors 1..r, stored at ((a1 * N) + a2) * N + a3.
class Coloring3 {
public:
  Coloring3() = default;
  Coloring3(std::size_t side, std::uint8_t colors, std::vector<std::uint8_t> cells)
      : side_(side), colors_(colors), cells_(std::move(cells)) {
    if (colors_ < 1) throw ValidationError("coloring needs at least one color");
    if (cells_.size() != side_ * side_ * side_)
      throw ValidationError("coloring has " + std::to_string(cells_.size()) + " cells, expected " +
                            std::to_string(side_ * side_ * side_));
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i] < 1 || cells_[i] > colors_)
        throw ValidationError("cell " + std::to_string(i) + " has color " + std::to_string(cells_[i]) +
                              " outside 1.." + std::to_string(colors_));
  }

  std::size_t side() const noexcept { return side_; }
  std::uint8_t colors() const noexcept { return colors_; }
  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }
  std::uint8_t at(std::size_t a1, std::size_t a2, std::size_t a3) const { return cells_[(a1 * side_ + a2) * side_ + a3]; }

  friend bool operator==(const Coloring3&, const Coloring3&) = default;

private:
  std::size_t side_ = 0;
  std::uint8_t colors_ = 1;
  std::vector<std::uint8_t> cells_;
};

struct ParallelepipedHit {
  std::uint8_t color = 0;
  std::array<std::size_t, 3> base{};
  std::array<std::size_t, 3> shifts{}; ///< (g, h, k), each >= 1
  friend bool operator==(const ParallelepipedHit&, const ParallelepipedHit&) = default;
};

/// All eight points a + (eps1 g, eps2 h, eps3 k), eps in {0,1}^3, inside the cube and colored `color`.
inline bool verify_parallelepiped(const Coloring3& c, std::uint8_t color, const std::array<std::size_t, 3>& a,
                                  const std::array<std::size_t, 3>& shifts) {
  const auto n = c.side();
  for (auto s : shifts)
    if (s < 1) return false;
  for (int i = 0; i < 3; ++i)
    if (a[static_cast<std::size_t>(i)] + shifts[static_cast<std::size_t>(i)] >= n) return false;
  for (int mask = 0; mask < 8; ++mask) {
    std::size_t p1 = a[0] + ((mask & 1) ? shifts[0] : 0);
    std::size_t p2 = a[1] + ((mask & 2) ? shifts[1] : 0);
    std::size_t p3 = a[2] + ((mask & 4) ? shifts[2] : 0);
    if (c.at(p1, p2, p3) != color) return false;
  }
  return true;
}

namespace detail {

inline std::optional<ParallelepipedHit> scan_for_g(const Coloring3& c, std::size_t g, std::size_t kmax) {
  const auto n = c.side();
  for (std::size_t h = 1; h <= kmax; ++h)
    for (std::size_t k = 1; k <= kmax; ++k)
      for (std::size_t a1 = 0; a1 + g < n; ++a1)
        for (std::size_t a2 = 0; a2 + h < n; ++a2)
          for (std::size_t a3 = 0; a3 + k < n; ++a3) {
            auto color = c.at(a1, a2, a3);
            if (c.at(a1 + g, a2, a3) != color || c.at(a1, a2 + h, a3) != color || c.at(a1, a2, a3 + k) != color ||
                c.at(a1 + g, a2 + h, a3) != color || c.at(a1 + g, a2, a3 + k) != color ||
                c.at(a1, a2 + h, a3 + k) != color || c.at(a1 + g, a2 + h, a3 + k) != color)
              continue;
            return ParallelepipedHit{color, {a1, a2, a3}, {g, h, k}};
          }
  return std::nullopt;
}

} // namespace detail

/**
 * First monochromatic parallelepiped in lexicographic (g, h, k, a) order with
 * 1 <= g, h, k <= max_shift. Workers split the g axis; the smallest g with a
 * hit wins, so the answer matches the sequential scan.
 */
inline std::optional<ParallelepipedHit> parallelepiped_search(const Coloring3& c, std::size_t max_shift) {
  if (c.side() < 2) return std::nullopt;
  const std::size_t kmax = std::min(max_shift, c.side() - 1);
  if (kmax == 0) return std::nullopt;
  const std::size_t workers = worker_count();
  if (workers <= 1) {
    for (std::size_t g = 1; g <= kmax; ++g)
      if (auto hit = detail::scan_for_g(c, g, kmax)) return hit;
    return std::nullopt;
  }
  std::vector<std::optional<ParallelepipedHit>> per_g(kmax + 1);
  std::atomic<std::size_t> best{kmax + 1};
  parallel_for(kmax, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t g = i + 1;
      if (g > best.load()) return;
      per_g[g] = detail::scan_for_g(c, g, kmax);
      if (per_g[g]) {
        std::size_t cur = best.load();
        while (g < cur && !best.compare_exchange_weak(cur, g)) {
        }
        return;
      }
    }
  }, workers);
  for (std::size_t g = 1; g <= kmax; ++g)
    if (per_g[g]) return per_g[g];
  return std::nullopt;
}

} // namespace commavg

#endif // COMMAVG_COMBINATORICS_HPP
