#ifndef COMMAVG_SPACES_HPP
#define COMMAVG_SPACES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace commavg {

/**
 * Finite probability space on points 0..n-1 with strictly positive weights.
 *
 * R is the real field: double, or Rational for exact arithmetic. Weights must
 * sum to one exactly (Rational) or within 1e-12 (double).
 */
template <class R> class FiniteSpace {
public:
  FiniteSpace() = default;

  explicit FiniteSpace(std::vector<R> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ValidationError("space must have at least one point");
    R total(0);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i] > R(0))) {
        throw ValidationError("weight of point " + std::to_string(i) + " is not strictly positive");
      }
      total += weights_[i];
    }
    if constexpr (is_exact_v<R>) {
      if (total != R(1)) throw ValidationError("weights sum to " + rational_to_string(total) + ", not 1");
    } else {
      if (std::fabs(to_double(total) - 1.0) > 1e-12) {
        throw ValidationError("weights sum to " + std::to_string(to_double(total)) + ", not 1");
      }
    }
  }

  static FiniteSpace uniform(std::size_t n) {
    if (n == 0) throw ValidationError("space must have at least one point");
    return FiniteSpace(std::vector<R>(n, R(1) / R(static_cast<long long>(n))));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  const R& weight(std::size_t x) const { return weights_.at(x); }
  const std::vector<R>& weights() const noexcept { return weights_; }

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

private:
  std::vector<R> weights_;
};

/// Function on the points of a finite space. Values may be real, complex or rational.
template <class V> class Observable {
public:
  using value_type = V;

  Observable() = default;
  explicit Observable(std::vector<V> values) : values_(std::move(values)) {}
  Observable(std::size_t n, const V& fill) : values_(n, fill) {}

  static Observable constant(std::size_t n, const V& c) { return Observable(n, c); }
  static Observable point_mass(std::size_t n, std::size_t at) {
    Observable f(n, V(0));
    f.values_.at(at) = V(1);
    return f;
  }

  std::size_t size() const noexcept { return values_.size(); }
  const V& operator[](std::size_t x) const { return values_[x]; }
  V& operator[](std::size_t x) { return values_[x]; }
  const std::vector<V>& values() const noexcept { return values_; }
  std::vector<V>& values() noexcept { return values_; }

  Observable& operator+=(const Observable& o) {
    detail::require_same_size(size(), o.size(), "observable sum");
    for (std::size_t i = 0; i < size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Observable& operator-=(const Observable& o) {
    detail::require_same_size(size(), o.size(), "observable difference");
    for (std::size_t i = 0; i < size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Observable& operator*=(const Observable& o) {
    detail::require_same_size(size(), o.size(), "observable product");
    for (std::size_t i = 0; i < size(); ++i) values_[i] *= o.values_[i];
    return *this;
  }
  Observable& operator*=(const V& c) {
    for (auto& v : values_) v *= c;
    return *this;
  }

  friend Observable operator+(Observable a, const Observable& b) { return a += b; }
  friend Observable operator-(Observable a, const Observable& b) { return a -= b; }
  friend Observable operator*(Observable a, const Observable& b) { return a *= b; }
  friend Observable operator*(Observable a, const V& c) { return a *= c; }
  friend Observable operator*(const V& c, Observable a) { return a *= c; }
  friend bool operator==(const Observable&, const Observable&) = default;

private:
  std::vector<V> values_;
};

template <class W, class V> Observable<W> convert_observable(const Observable<V>& f) {
  std::vector<W> out;
  out.reserve(f.size());
  for (const auto& v : f.values()) {
    if constexpr (std::is_same_v<W, V>) {
      out.push_back(v);
    } else if constexpr (is_complex<W>::value && is_complex<V>::value) {
      out.push_back(W(v));
    } else if constexpr (is_complex<W>::value) {
      out.push_back(W(to_double(v), 0.0));
    } else {
      out.push_back(from_real<W>(v));
    }
  }
  return Observable<W>(std::move(out));
}

/**
 * Finite sigma-algebra, stored as the partition generating it.
 *
 * Block ids are canonical: blocks are numbered in order of their smallest
 * point, so two partitions with the same blocks compare equal.
 */
class Partition {
public:
  Partition() = default;

  /// Builds from arbitrary labels; equal labels share a block.
  static Partition from_labels(const std::vector<std::size_t>& labels) {
    Partition p;
    p.block_of_.resize(labels.size());
    std::unordered_map<std::size_t, std::size_t> id_of;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, inserted] = id_of.try_emplace(labels[i], p.blocks_);
      if (inserted) ++p.blocks_;
      p.block_of_[i] = it->second;
    }
    return p;
  }

  /// Validating constructor: ids must be exactly {0,...,k-1}, each used.
  Partition(std::vector<std::size_t> block_of, std::size_t blocks)
      : block_of_(std::move(block_of)), blocks_(blocks) {
    std::vector<bool> used(blocks_, false);
    for (auto b : block_of_) {
      if (b >= blocks_) throw ValidationError("block id " + std::to_string(b) + " out of range");
      used[b] = true;
    }
    for (std::size_t b = 0; b < blocks_; ++b)
      if (!used[b]) throw ValidationError("block " + std::to_string(b) + " is empty");
  }

  static Partition discrete(std::size_t n) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return Partition(std::move(ids), n);
  }
  static Partition trivial(std::size_t n) { return Partition(std::vector<std::size_t>(n, 0), n ? 1 : 0); }

  std::size_t size() const noexcept { return block_of_.size(); }
  std::size_t blocks() const noexcept { return blocks_; }
  std::size_t block_of(std::size_t x) const { return block_of_.at(x); }
  const std::vector<std::size_t>& labels() const noexcept { return block_of_; }

  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t x = 0; x < block_of_.size(); ++x) out[block_of_[x]].push_back(x);
    return out;
  }

  /// True iff every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const {
    detail::require_same_size(size(), coarser.size(), "partition refinement");
    std::vector<std::size_t> image(blocks_, npos);
    for (std::size_t x = 0; x < size(); ++x) {
      auto& slot = image[block_of_[x]];
      if (slot == npos) slot = coarser.block_of_[x];
      else if (slot != coarser.block_of_[x]) return false;
    }
    return true;
  }

  /// Common refinement (the sigma-algebra generated by both).
  Partition meet(const Partition& other) const {
    detail::require_same_size(size(), other.size(), "partition meet");
    std::vector<std::size_t> labels(size());
    for (std::size_t x = 0; x < size(); ++x) labels[x] = block_of_[x] * other.blocks_ + other.block_of_[x];
    return from_labels(labels);
  }

  friend bool operator==(const Partition&, const Partition&) = default;

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> block_of_;
  std::size_t blocks_ = 0;
};

/// mu(B) for every block B.
template <class R> std::vector<R> block_masses(const FiniteSpace<R>& sp, const Partition& p) {
  detail::require_same_size(sp.size(), p.size(), "block masses");
  std::vector<R> mass(p.blocks(), R(0));
  for (std::size_t x = 0; x < sp.size(); ++x) mass[p.block_of(x)] += sp.weight(x);
  return mass;
}

/// E(f | p): on each block B, sum_{x in B} mu(x) f(x) / mu(B).
template <class R, class V>
Observable<V> conditional_expectation(const FiniteSpace<R>& sp, const Observable<V>& f, const Partition& p) {
  detail::require_same_size(sp.size(), f.size(), "conditional expectation (observable)");
  detail::require_same_size(sp.size(), p.size(), "conditional expectation (partition)");
  std::vector<V> sums(p.blocks(), V(0));
  std::vector<R> mass(p.blocks(), R(0));
  for (std::size_t x = 0; x < sp.size(); ++x) {
    sums[p.block_of(x)] += f[x] * from_real<V>(sp.weight(x));
    mass[p.block_of(x)] += sp.weight(x);
  }
  for (std::size_t b = 0; b < sums.size(); ++b) sums[b] /= from_real<V>(mass[b]);
  Observable<V> out(sp.size(), V(0));
  for (std::size_t x = 0; x < sp.size(); ++x) out[x] = sums[p.block_of(x)];
  return out;
}

template <class R, class V> V integral(const FiniteSpace<R>& sp, const Observable<V>& f) {
  detail::require_same_size(sp.size(), f.size(), "integral");
  V total(0);
  for (std::size_t x = 0; x < sp.size(); ++x) total += f[x] * from_real<V>(sp.weight(x));
  return total;
}

/// L^2(mu) pairing: sum mu(x) f(x) conj(g(x)).
template <class R, class V>
V inner_product(const FiniteSpace<R>& sp, const Observable<V>& f, const Observable<V>& g) {
  detail::require_same_size(sp.size(), f.size(), "inner product (f)");
  detail::require_same_size(sp.size(), g.size(), "inner product (g)");
  V total(0);
  for (std::size_t x = 0; x < sp.size(); ++x) total += f[x] * conj_value(g[x]) * from_real<V>(sp.weight(x));
  return total;
}

template <class R, class V> real_of_t<V> norm_squared(const FiniteSpace<R>& sp, const Observable<V>& f) {
  detail::require_same_size(sp.size(), f.size(), "norm");
  real_of_t<V> total(0);
  for (std::size_t x = 0; x < sp.size(); ++x) total += abs2(f[x]) * from_real<real_of_t<V>>(sp.weight(x));
  return total;
}

template <class R, class V> double norm_l2(const FiniteSpace<R>& sp, const Observable<V>& f) {
  return std::sqrt(to_double(norm_squared(sp, f)));
}

template <class R, class V>
double distance_l2(const FiniteSpace<R>& sp, const Observable<V>& f, const Observable<V>& g) {
  return norm_l2(sp, f - g);
}

/// max |f(x) - g(x)|
template <class V> double sup_distance(const Observable<V>& f, const Observable<V>& g) {
  detail::require_same_size(f.size(), g.size(), "sup distance");
  double d = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    V diff = f[x] - g[x];
    d = std::max(d, abs_double(diff));
  }
  return d;
}

/**
 * Conditional measures x -> mu_x over a partition: mu_x is mu restricted to
 * the block of x and normalized.
 */
template <class R> class Disintegration {
public:
  Disintegration(const FiniteSpace<R>& sp, Partition p)
      : space_(sp), partition_(std::move(p)), mass_(block_masses(sp, partition_)) {}

  const Partition& partition() const noexcept { return partition_; }
  const std::vector<R>& block_mass() const noexcept { return mass_; }

  /// mu_x(z)
  R conditional_weight(std::size_t x, std::size_t z) const {
    if (partition_.block_of(x) != partition_.block_of(z)) return R(0);
    return space_.weight(z) / mass_[partition_.block_of(x)];
  }

  /// Dense vector of mu_x.
  std::vector<R> measure_at(std::size_t x) const {
    std::vector<R> out(space_.size(), R(0));
    for (std::size_t z = 0; z < space_.size(); ++z) out[z] = conditional_weight(x, z);
    return out;
  }

  /// int f d mu_x
  template <class V> V integrate(std::size_t x, const Observable<V>& f) const {
    detail::require_same_size(space_.size(), f.size(), "disintegration integral");
    V total(0);
    for (std::size_t z = 0; z < space_.size(); ++z)
      if (partition_.block_of(z) == partition_.block_of(x)) total += f[z] * from_real<V>(space_.weight(z));
    return total / from_real<V>(mass_[partition_.block_of(x)]);
  }

  /// int int f d mu_x d mu(x); equals int f d mu.
  template <class V> V reconstitute(const Observable<V>& f) const {
    V total(0);
    for (std::size_t x = 0; x < space_.size(); ++x) total += integrate(x, f) * from_real<V>(space_.weight(x));
    return total;
  }

private:
  FiniteSpace<R> space_;
  Partition partition_;
  std::vector<R> mass_;
};

template <class R> Disintegration<R> disintegration(const FiniteSpace<R>& sp, const Partition& p) {
  detail::require_same_size(sp.size(), p.size(), "disintegration");
  return Disintegration<R>(sp, p);
}

/// Measure on a subset of X x X with strictly positive weights summing to one.
template <class R> class WeightedPairSpace {
public:
  using Pair = std::pair<std::size_t, std::size_t>;

  WeightedPairSpace() = default;
  WeightedPairSpace(FiniteSpace<R> base, std::vector<Pair> support, std::vector<R> weights)
      : base_(std::move(base)), support_(std::move(support)),
        index_(base_.size() * base_.size(), npos) {
    detail::require_same_size(support_.size(), weights.size(), "pair space weights");
    for (std::size_t i = 0; i < support_.size(); ++i) {
      auto [w, z] = support_[i];
      if (w >= base_.size() || z >= base_.size()) throw ValidationError("pair index out of range");
      auto& slot = index_[w * base_.size() + z];
      if (slot != npos) throw ValidationError("duplicate pair in support");
      slot = i;
    }
    pair_space_ = FiniteSpace<R>(std::move(weights));
  }

  const FiniteSpace<R>& base() const noexcept { return base_; }
  const std::vector<Pair>& support() const noexcept { return support_; }
  std::size_t size() const noexcept { return support_.size(); }
  const R& weight(std::size_t i) const { return pair_space_.weight(i); }
  /// The pair space viewed as a finite space indexed by support position.
  const FiniteSpace<R>& as_space() const noexcept { return pair_space_; }

  std::optional<std::size_t> index_of(std::size_t w, std::size_t z) const {
    auto i = index_.at(w * base_.size() + z);
    if (i == npos) return std::nullopt;
    return i;
  }

  std::vector<R> first_marginal() const {
    std::vector<R> m(base_.size(), R(0));
    for (std::size_t i = 0; i < size(); ++i) m[support_[i].first] += weight(i);
    return m;
  }
  std::vector<R> second_marginal() const {
    std::vector<R> m(base_.size(), R(0));
    for (std::size_t i = 0; i < size(); ++i) m[support_[i].second] += weight(i);
    return m;
  }

  /// (f ⊗ g)(w, z) = f(w) g(z) restricted to the support.
  template <class V> Observable<V> tensor(const Observable<V>& f, const Observable<V>& g) const {
    detail::require_same_size(base_.size(), f.size(), "tensor (f)");
    detail::require_same_size(base_.size(), g.size(), "tensor (g)");
    Observable<V> out(size(), V(0));
    for (std::size_t i = 0; i < size(); ++i) out[i] = f[support_[i].first] * g[support_[i].second];
    return out;
  }

private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  FiniteSpace<R> base_;
  std::vector<Pair> support_;
  std::vector<std::size_t> index_;
  FiniteSpace<R> pair_space_;
};

/// mu x_D mu: weight mu(w) mu(z) / mu(B) on pairs inside a common block B.
template <class R> WeightedPairSpace<R> relative_product(const FiniteSpace<R>& sp, const Partition& p) {
  detail::require_same_size(sp.size(), p.size(), "relative product");
  auto mass = block_masses(sp, p);
  std::vector<typename WeightedPairSpace<R>::Pair> support;
  std::vector<R> weights;
  for (std::size_t w = 0; w < sp.size(); ++w) {
    for (std::size_t z = 0; z < sp.size(); ++z) {
      if (p.block_of(w) != p.block_of(z)) continue;
      support.emplace_back(w, z);
      weights.push_back(sp.weight(w) * sp.weight(z) / mass[p.block_of(w)]);
    }
  }
  return WeightedPairSpace<R>(sp, std::move(support), std::move(weights));
}

} // namespace commavg

#endif // COMMAVG_SPACES_HPP
