#ifndef COMMAVG_UNION_FIND_HPP
#define COMMAVG_UNION_FIND_HPP

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace commavg {

/// Disjoint sets over 0..n-1 with path halving and union by size.
class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  /// returns true if a union was performed
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
    return true;
  }

  std::size_t sets() const noexcept { return sets_; }

  std::vector<std::size_t> roots() {
    std::vector<std::size_t> r(parent_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = find(i);
    return r;
  }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

} // namespace commavg

#endif // COMMAVG_UNION_FIND_HPP
