#ifndef COMMAVG_GROUPS_HPP
#define COMMAVG_GROUPS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace commavg {

/// Z^d, written additively.
struct FreeAbelian {
  std::size_t rank = 1;
  friend bool operator==(const FreeAbelian&, const FreeAbelian&) = default;
};

/// Finite group given by its full multiplication table: table[a][b] = a*b.
struct FiniteTable {
  std::vector<std::vector<std::size_t>> table;
  std::size_t identity = 0;
  std::vector<std::size_t> inverse;
  std::size_t order() const noexcept { return table.size(); }
  friend bool operator==(const FiniteTable&, const FiniteTable&) = default;
};

/// Integer d-tuple for Z^d; element index for a finite table.
using GroupElement = std::variant<std::vector<std::int64_t>, std::size_t>;

/**
 * A concrete amenable group: Z^d or a finite group by table. The finite
 * variant is checked against the group axioms on construction.
 */
class GroupSpec {
public:
  GroupSpec() = default;

  static GroupSpec free_abelian(std::size_t rank) {
    if (rank == 0) throw ValidationError("free abelian rank must be at least 1");
    GroupSpec g;
    g.variant_ = FreeAbelian{rank};
    return g;
  }

  static GroupSpec finite_table(FiniteTable t) {
    validate(t);
    GroupSpec g;
    g.variant_ = std::move(t);
    return g;
  }

  /// Cyclic group Z_m as a table, handy for tests and samples.
  static GroupSpec cyclic_table(std::size_t m) {
    FiniteTable t;
    t.table.assign(m, std::vector<std::size_t>(m));
    t.inverse.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) t.table[a][b] = (a + b) % m;
      t.inverse[a] = (m - a) % m;
    }
    return finite_table(std::move(t));
  }

  bool is_free_abelian() const noexcept { return std::holds_alternative<FreeAbelian>(variant_); }
  bool is_finite() const noexcept { return std::holds_alternative<FiniteTable>(variant_); }
  std::size_t rank() const { return std::get<FreeAbelian>(variant_).rank; }
  const FiniteTable& table() const { return std::get<FiniteTable>(variant_); }
  std::size_t order() const { return table().order(); }

  /// Number of action data items: generators for Z^d, elements for a table.
  std::size_t action_arity() const { return is_free_abelian() ? rank() : order(); }

  GroupElement identity() const {
    if (is_free_abelian()) return std::vector<std::int64_t>(rank(), 0);
    return table().identity;
  }

  GroupElement compose(const GroupElement& a, const GroupElement& b) const {
    check(a);
    check(b);
    if (is_free_abelian()) {
      auto out = std::get<0>(a);
      const auto& bb = std::get<0>(b);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += bb[i];
      return out;
    }
    return table().table[std::get<1>(a)][std::get<1>(b)];
  }

  GroupElement inverse(const GroupElement& a) const {
    check(a);
    if (is_free_abelian()) {
      auto out = std::get<0>(a);
      for (auto& c : out) c = -c;
      return out;
    }
    return table().inverse[std::get<1>(a)];
  }

  /// Throws unless `a` is an element of this group.
  void check(const GroupElement& a) const {
    if (is_free_abelian()) {
      if (!std::holds_alternative<std::vector<std::int64_t>>(a) || std::get<0>(a).size() != rank())
        throw DimensionError("group element is not in Z^" + std::to_string(rank()));
    } else {
      if (!std::holds_alternative<std::size_t>(a) || std::get<1>(a) >= order())
        throw DimensionError("group element is not in the finite table");
    }
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

private:
  static void validate(const FiniteTable& t) {
    const std::size_t m = t.order();
    if (m == 0) throw ValidationError("finite group table is empty");
    if (t.identity >= m) throw ValidationError("identity index out of range");
    if (t.inverse.size() != m) throw ValidationError("inverse table has wrong length");
    for (std::size_t a = 0; a < m; ++a) {
      if (t.table[a].size() != m) throw ValidationError("multiplication table row " + std::to_string(a) + " has wrong length");
      for (auto c : t.table[a])
        if (c >= m) throw ValidationError("multiplication table entry out of range");
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (t.table[t.identity][a] != a || t.table[a][t.identity] != a)
        throw ValidationError("identity axiom fails at element " + std::to_string(a));
      if (t.inverse[a] >= m || t.table[a][t.inverse[a]] != t.identity || t.table[t.inverse[a]][a] != t.identity)
        throw ValidationError("inverse axiom fails at element " + std::to_string(a));
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          if (t.table[t.table[a][b]][c] != t.table[a][t.table[b][c]])
            throw ValidationError("associativity fails at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                  std::to_string(c) + ")");
  }

  std::variant<FreeAbelian, FiniteTable> variant_ = FreeAbelian{1};
};

/// Affine bound a + b*n.
struct AffineBound {
  std::int64_t offset = 0;
  std::int64_t slope = 0;
  std::int64_t at(std::int64_t n) const noexcept { return offset + slope * n; }
  friend bool operator==(const AffineBound&, const AffineBound&) = default;
};

/**
 * Two-sided Folner sequence. For Z^d it is the box schedule
 * Phi_n = prod_i [M_i(n), N_i(n)) with affine M_i, N_i whose side lengths
 * grow without bound; for a finite table it is the constant full group.
 */
class FolnerSequence {
public:
  FolnerSequence() = default;

  /// Boxes [lo_i(n), hi_i(n)); requires hi slope > lo slope in every coordinate.
  static FolnerSequence boxes(const GroupSpec& g, std::vector<AffineBound> lo, std::vector<AffineBound> hi) {
    if (!g.is_free_abelian()) throw ValidationError("box schedules need a free abelian group");
    if (lo.size() != g.rank() || hi.size() != g.rank())
      throw DimensionError("box schedule needs one bound pair per coordinate");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (hi[i].slope <= lo[i].slope)
        throw ValidationError("box side length must grow: coordinate " + std::to_string(i));
    FolnerSequence s;
    s.group_ = g;
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
  }

  /// [-n, n] in every coordinate.
  static FolnerSequence symmetric(const GroupSpec& g) {
    return boxes(g, std::vector<AffineBound>(g.rank(), {0, -1}), std::vector<AffineBound>(g.rank(), {1, 1}));
  }

  /// [offset, offset + scale*n) in every coordinate.
  static FolnerSequence half_open(const GroupSpec& g, std::int64_t offset = 0, std::int64_t scale = 1) {
    return boxes(g, std::vector<AffineBound>(g.rank(), {offset, 0}),
                 std::vector<AffineBound>(g.rank(), {offset, scale}));
  }

  static FolnerSequence full_group(const GroupSpec& g) {
    if (!g.is_finite()) throw ValidationError("constant full-group sequence needs a finite group");
    FolnerSequence s;
    s.group_ = g;
    return s;
  }

  /// Default sequence for a group: symmetric boxes or the whole finite group.
  static FolnerSequence standard(const GroupSpec& g) {
    return g.is_free_abelian() ? symmetric(g) : full_group(g);
  }

  const GroupSpec& group() const noexcept { return group_; }
  const std::vector<AffineBound>& lower() const noexcept { return lo_; }
  const std::vector<AffineBound>& upper() const noexcept { return hi_; }

  /// Box sides for stage n; empty sides are reported as [lo, lo).
  std::vector<std::pair<std::int64_t, std::int64_t>> box(std::int64_t n) const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      auto a = lo_[i].at(n);
      auto b = hi_[i].at(n);
      out.emplace_back(a, std::max(a, b));
    }
    return out;
  }

  std::size_t cardinality(std::int64_t n) const {
    if (group_.is_finite()) return group_.order();
    std::size_t c = 1;
    for (auto [a, b] : box(n)) c *= static_cast<std::size_t>(b - a);
    return c;
  }

  /// Elements of Phi_n in lexicographic order.
  std::vector<GroupElement> elements(std::int64_t n) const {
    std::vector<GroupElement> out;
    if (group_.is_finite()) {
      for (std::size_t i = 0; i < group_.order(); ++i) out.emplace_back(i);
      return out;
    }
    auto sides = box(n);
    std::size_t total = cardinality(n);
    out.reserve(total);
    if (total == 0) return out;
    std::vector<std::int64_t> cur(sides.size());
    for (std::size_t i = 0; i < sides.size(); ++i) cur[i] = sides[i].first;
    while (true) {
      out.emplace_back(cur);
      std::size_t i = sides.size();
      while (i > 0) {
        --i;
        if (++cur[i] < sides[i].second) break;
        cur[i] = sides[i].first;
        if (i == 0) return out;
      }
    }
  }

  friend bool operator==(const FolnerSequence&, const FolnerSequence&) = default;

private:
  GroupSpec group_;
  std::vector<AffineBound> lo_;
  std::vector<AffineBound> hi_;
};

/// (|Phi_n ∩ g Phi_n| / |Phi_n|, |Phi_n ∩ Phi_n g| / |Phi_n|).
inline std::pair<double, double> folner_defect(const FolnerSequence& seq, const GroupElement& g, std::int64_t n) {
  const auto& group = seq.group();
  group.check(g);
  if (group.is_finite()) return {1.0, 1.0};
  auto sides = seq.box(n);
  const auto& shift = std::get<0>(g);
  double total = 1.0;
  double overlap = 1.0;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    auto [a, b] = sides[i];
    auto len = b - a;
    if (len <= 0) throw DomainError("empty Folner set at stage " + std::to_string(n));
    auto lo = std::max(a, a + shift[i]);
    auto hi = std::min(b, b + shift[i]);
    total *= static_cast<double>(len);
    overlap *= static_cast<double>(std::max<std::int64_t>(0, hi - lo));
  }
  double r = overlap / total;
  return {r, r};
}

} // namespace commavg

#endif // COMMAVG_GROUPS_HPP
