// Fractional knapsack by greedy density order.
//
// For items sorted by reward/cost (descending), the LP value g(D) fills whole
// items until the first item t whose cumulative cost reaches D and takes the
// fraction psi of it. Q = {order[0..t]} is the rounded-up integer solution:
// c(Q) <= D + c_max and r(Q) >= g(D). The right derivative of g at D is the
// density of the pivot item.
//
// Everything here is templated on the scalar so the same code runs over
// double and over exact rationals.
#ifndef SEQTEST_KNAPSACK_HPP
#define SEQTEST_KNAPSACK_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqtest/core.hpp"

namespace seqtest {

template <class Scalar>
struct KnapItem {
  int id = 0;
  Scalar reward{0};
  Scalar cost{1};
};

template <class Scalar>
struct KnapResult {
  std::vector<int> order;             // item ids, greedy order
  std::optional<std::size_t> pivot;   // position of t in `order`
  Scalar psi{0};
  Scalar lp_value{0};
  Scalar derivative{0};
  std::vector<int> prefix;            // Q

  Scalar prefix_cost{0};
  Scalar prefix_reward{0};
};

/// Strict total order used for every greedy sort: higher density first,
/// then lower cost, then lower id.
template <class Scalar>
bool greedy_before(const KnapItem<Scalar>& a, const KnapItem<Scalar>& b) {
  const Scalar lhs = a.reward * b.cost;
  const Scalar rhs = b.reward * a.cost;
  if (lhs != rhs) return lhs > rhs;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.id < b.id;
}

template <class Scalar>
void check_knap_items(std::span<const KnapItem<Scalar>> items) {
  for (const auto& it : items) {
    if (!(it.cost > Scalar(0))) {
      throw InvalidInstance("knapsack item " + std::to_string(it.id) +
                            ": cost must be positive");
    }
    if (it.reward < Scalar(0)) {
      throw InvalidInstance("knapsack item " + std::to_string(it.id) +
                            ": reward must be nonnegative");
    }
  }
}

template <class Scalar>
std::vector<KnapItem<Scalar>> greedy_sorted(
    std::span<const KnapItem<Scalar>> items) {
  std::vector<KnapItem<Scalar>> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end(), greedy_before<Scalar>);
  return sorted;
}

namespace detail {

// Fills `out` from items already in greedy order.
template <class Scalar>
void fill_from_sorted(std::span<const KnapItem<Scalar>> sorted,
                      const Scalar& budget, KnapResult<Scalar>& out) {
  out.order.clear();
  out.prefix.clear();
  out.order.reserve(sorted.size());
  for (const auto& it : sorted) out.order.push_back(it.id);

  Scalar cumulative{0};
  Scalar value{0};
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& it = sorted[k];
    if (cumulative + it.cost >= budget) {
      out.pivot = k;
      out.psi = (budget - cumulative) / it.cost;
      out.lp_value = value + out.psi * it.reward;
      out.derivative = it.reward / it.cost;
      out.prefix.assign(out.order.begin(), out.order.begin() + k + 1);
      out.prefix_cost = cumulative + it.cost;
      out.prefix_reward = value + it.reward;
      return;
    }
    cumulative += it.cost;
    value += it.reward;
  }
  out.pivot.reset();
  out.psi = Scalar(0);
  out.lp_value = value;
  out.derivative = Scalar(0);
  out.prefix = out.order;
  out.prefix_cost = cumulative;
  out.prefix_reward = value;
}

}  // namespace detail

template <class Scalar>
KnapResult<Scalar> solve_fractional(std::span<const KnapItem<Scalar>> items,
                                    const Scalar& budget) {
  if (budget < Scalar(0)) throw InvalidInstance("budget must be nonnegative");
  check_knap_items(items);
  const auto sorted = greedy_sorted(items);
  KnapResult<Scalar> out;
  detail::fill_from_sorted<Scalar>(sorted, budget, out);
  return out;
}

template <class Scalar>
KnapResult<Scalar> solve_fractional(const std::vector<KnapItem<Scalar>>& items,
                                    const Scalar& budget) {
  return solve_fractional(std::span<const KnapItem<Scalar>>(items), budget);
}

/// g(D) for every budget in `budgets`, sharing one sort.
template <class Scalar>
std::vector<Scalar> lp_value_at(std::span<const KnapItem<Scalar>> items,
                                std::span<const Scalar> budgets) {
  check_knap_items(items);
  const auto sorted = greedy_sorted(items);
  std::vector<Scalar> cum_cost(sorted.size() + 1, Scalar(0));
  std::vector<Scalar> cum_reward(sorted.size() + 1, Scalar(0));
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cum_cost[k + 1] = cum_cost[k] + sorted[k].cost;
    cum_reward[k + 1] = cum_reward[k] + sorted[k].reward;
  }
  std::vector<Scalar> values;
  values.reserve(budgets.size());
  for (const Scalar& d : budgets) {
    if (d < Scalar(0)) throw InvalidInstance("budget must be nonnegative");
    // first k with cum_cost[k + 1] >= d
    auto it = std::lower_bound(cum_cost.begin() + 1, cum_cost.end(), d);
    if (it == cum_cost.end()) {
      values.push_back(cum_reward.back());
      continue;
    }
    const std::size_t k = static_cast<std::size_t>(it - cum_cost.begin()) - 1;
    const Scalar psi = (d - cum_cost[k]) / sorted[k].cost;
    values.push_back(cum_reward[k] + psi * sorted[k].reward);
  }
  return values;
}

template <class Scalar>
std::vector<Scalar> lp_value_at(const std::vector<KnapItem<Scalar>>& items,
                                const std::vector<Scalar>& budgets) {
  return lp_value_at(std::span<const KnapItem<Scalar>>(items),
                     std::span<const Scalar>(budgets));
}

/// Locates the pivot item for budget D without a full sort (expected linear
/// time by repeated nth_element). Reorders `items`; on return the items in
/// [0, pos) are exactly those ahead of the pivot in greedy order. Returns
/// nullopt when the total cost is below D. `comparisons` counts comparator
/// calls.
template <class Scalar>
std::optional<std::size_t> select_pivot(std::vector<KnapItem<Scalar>>& items,
                                        const Scalar& budget,
                                        std::uint64_t* comparisons = nullptr) {
  auto less = [comparisons](const KnapItem<Scalar>& a,
                            const KnapItem<Scalar>& b) {
    if (comparisons) ++*comparisons;
    return greedy_before(a, b);
  };
  std::size_t lo = 0;
  std::size_t hi = items.size();
  Scalar before{0};  // total cost of items placed ahead of [lo, hi)
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(items.begin() + lo, items.begin() + mid,
                     items.begin() + hi, less);
    Scalar left{0};
    for (std::size_t k = lo; k < mid; ++k) left += items[k].cost;
    if (comparisons) *comparisons += mid - lo;
    if (before + left >= budget) {
      hi = mid;
    } else if (before + left + items[mid].cost >= budget) {
      return mid;
    } else {
      before += left + items[mid].cost;
      lo = mid + 1;
    }
  }
  // position lo was fixed by an earlier partition and closes the budget
  if (lo < items.size()) return lo;
  return std::nullopt;
}

}  // namespace seqtest

#endif  // SEQTEST_KNAPSACK_HPP
