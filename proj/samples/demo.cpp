// Builds the skew product example, compares finite averages with the exact
// limit, and prints the recurrence bounds.
#include <iostream>

#include "commavg/commavg.hpp"

using namespace commavg;

int main() {
  auto pair = skew_product_example<Rational>(3, 2, 4, {1, 0, 2}, {0, 3});
  const std::size_t n = pair.points();
  std::cout << "points: " << n << ", T-orbits: " << invariant_partition(pair.T()).blocks()
            << ", S-orbits: " << invariant_partition(pair.S()).blocks() << "\n";

  Rng rng(7);
  auto f1 = random_observable<Rational>(n, rng);
  auto f2 = random_observable<Rational>(n, rng);
  auto f3 = random_observable<Rational>(n, rng);
  auto limit = multi_limit(pair, f1, f2, f3);

  auto period = *full_period(pair);
  auto window = FolnerSequence::half_open(pair.group());
  auto symmetric = FolnerSequence::symmetric(pair.group());
  std::cout << "full period: " << period << "\n";
  for (std::int64_t stage : {1, 4, 16, 64})
    std::cout << "  n = " << stage << "  ||A_n - L|| = "
              << distance_l2(pair.space(), multi_average(pair, f1, f2, f3, symmetric, symmetric, stage), limit) << "\n";
  auto exact = multi_average(pair, f1, f2, f3, window, window, static_cast<std::int64_t>(period));
  std::cout << "  average over [0, p)^2 equals the limit exactly: " << std::boolalpha << (exact == limit) << "\n";

  auto f = random_nonnegative<Rational>(n, rng);
  auto b = four_term_bound(pair, f);
  std::cout << "four-term bound: " << rational_to_string(b.left) << " >= " << rational_to_string(b.right) << "\n";
  return 0;
}
