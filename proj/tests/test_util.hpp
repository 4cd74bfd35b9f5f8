// Shared fixtures for the unit tests.
#ifndef SEQTEST_TEST_UTIL_HPP
#define SEQTEST_TEST_UTIL_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "seqtest/bench.hpp"
#include "seqtest/core.hpp"
#include "seqtest/random.hpp"

namespace seqtest::testing {

// Five unit items, p = 1/2, classes High {0, 1}, Medium {2, 3, 4}, Low {5}.
inline SscInstance fig1(double setup_cost = 0.0) {
  std::vector<Item> items(5, Item{1.0, 0.5, 1});
  return SscInstance(items, {0, 2, 5, 6}, setup_cost);
}

// Costs in [1, 10], probabilities in tenths, weights in [0, max_weight].
inline std::vector<Item> small_items(Rng& rng, std::size_t n,
                                     std::int64_t max_weight = 5) {
  std::vector<Item> items(n);
  for (Item& it : items) {
    it.cost = static_cast<double>(rng.between(1, 10));
    it.prob = static_cast<double>(rng.between(0, 10)) / 10.0;
    it.weight = rng.between(0, max_weight);
  }
  return items;
}

inline SscInstance small_instance(Rng& rng, std::size_t n,
                                  std::int64_t max_weight = 5,
                                  int max_classes = 4) {
  auto items = small_items(rng, n, max_weight);
  std::int64_t w = 0;
  for (const Item& it : items) w += it.weight;
  const int classes = static_cast<int>(
      rng.between(1, std::clamp<std::int64_t>(w, 1, max_classes)));
  return SscInstance(std::move(items), generate_alphas(w, classes, rng));
}

}  // namespace seqtest::testing

#endif  // SEQTEST_TEST_UTIL_HPP
