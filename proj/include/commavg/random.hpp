#ifndef COMMAVG_RANDOM_HPP
#define COMMAVG_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>

#include "scalar.hpp"
#include "spaces.hpp"

namespace commavg {

using Rng = std::mt19937_64;

/// Entries i.i.d. uniform on [lo, hi]; rationals are drawn on the grid of step 1/1000.
template <class V> Observable<V> random_observable(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Observable<V> f(n, V(0));
  if constexpr (is_exact_v<V>) {
    std::uniform_int_distribution<long long> dist(static_cast<long long>(lo * 1000), static_cast<long long>(hi * 1000));
    for (std::size_t i = 0; i < n; ++i) f[i] = Rational(dist(rng), 1000);
  } else if constexpr (is_complex<V>::value) {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (std::size_t i = 0; i < n; ++i) {
      double re = dist(rng);
      f[i] = V(re, dist(rng));
    }
  } else {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (std::size_t i = 0; i < n; ++i) f[i] = V(dist(rng));
  }
  return f;
}

template <class V> Observable<V> random_nonnegative(std::size_t n, Rng& rng) {
  return random_observable<V>(n, rng, 0.0, 1.0);
}

} // namespace commavg

#endif // COMMAVG_RANDOM_HPP
