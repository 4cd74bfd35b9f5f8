// Exhaustive reference computations for small inputs.
//
// Each routine here is written from the problem definition alone (subset and
// realization enumeration) and shares no code path with the algorithms it is
// used to check. Sizes are exponential; callers keep n small.
#ifndef SEQTEST_ORACLES_HPP
#define SEQTEST_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/exdshe.hpp"
#include "seqtest/knapsack.hpp"
#include "seqtest/lowerbound.hpp"
#include "seqtest/policy.hpp"

namespace seqtest::oracle {

/// max sum r_i x_i s.t. sum c_i x_i <= D, 0 <= x <= 1. Some optimal vertex
/// has at most one fractional coordinate, so it suffices to try every subset
/// S that fits, topped up with a fraction of one further item.
template <class Scalar>
Scalar lp_optimum(std::span<const KnapItem<Scalar>> items, const Scalar& budget) {
  const std::size_t n = items.size();
  Scalar best{0};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Scalar cost{0};
    Scalar reward{0};
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        cost += items[i].cost;
        reward += items[i].reward;
      }
    }
    if (cost > budget) continue;
    if (reward > best) best = reward;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) continue;
      Scalar frac = (budget - cost) / items[j].cost;
      if (frac > Scalar(1)) frac = Scalar(1);
      const Scalar v = reward + frac * items[j].reward;
      if (v > best) best = v;
    }
  }
  return best;
}

/// Class of a score from the raw boundary list by linear scan.
inline int class_by_scan(std::span<const std::int64_t> alphas, std::int64_t s) {
  int j = 0;
  for (std::size_t k = 1; k + 1 < alphas.size(); ++k) {
    if (s >= alphas[k]) j = static_cast<int>(k);
  }
  return j;
}

/// Shortest prefix of `order` after which every completion of the unprobed
/// items lands in one class, found by enumerating the completions.
inline std::size_t minimal_prefix(const SscInstance& instance,
                                  std::span<const int> order,
                                  std::span<const std::uint8_t> x) {
  const std::size_t n = instance.size();
  const auto alphas = instance.classes().alphas();
  for (std::size_t k = 0; k <= order.size(); ++k) {
    std::vector<bool> probed(n, false);
    for (std::size_t t = 0; t < k; ++t) probed[order[t]] = true;
    std::vector<std::size_t> open;
    std::int64_t fixed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!probed[i]) {
        open.push_back(i);
      } else if (x[i]) {
        fixed += instance.item(i).weight;
      }
    }
    std::optional<int> seen;
    bool constant = true;
    for (std::uint64_t m = 0; constant && m < (std::uint64_t{1} << open.size());
         ++m) {
      std::int64_t s = fixed;
      for (std::size_t b = 0; b < open.size(); ++b) {
        if (m >> b & 1) s += instance.item(open[b]).weight;
      }
      const int j = class_by_scan(alphas, s);
      if (seen && *seen != j) constant = false;
      seen = j;
    }
    if (constant) return k;
  }
  return order.size();
}

/// Probability of realization x under the product law.
inline double realization_probability(std::span<const Item> items,
                                      std::span<const std::uint8_t> x) {
  double p = 1.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    p *= x[i] ? items[i].prob : 1.0 - items[i].prob;
  }
  return p;
}

inline Realization realization_from_mask(std::size_t n, std::uint64_t mask) {
  Realization x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i & 1) ? 1 : 0;
  return x;
}

/// Expected cost of probing `order` until the class is certain, by summing
/// over all 2^n realizations.
inline double enumerated_expected_cost(const SscInstance& instance,
                                       std::span<const int> order) {
  const std::size_t n = instance.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const Realization x = realization_from_mask(n, mask);
    const std::size_t k = minimal_prefix(instance, order, x);
    double cost = 0.0;
    for (std::size_t t = 0; t < k; ++t) cost += instance.item(order[t]).cost;
    total += realization_probability(instance.items(), x) * cost;
  }
  return total;
}

/// Cheapest subset with reward >= target, by subset enumeration.
inline double cover_by_enumeration(const CoverInstance& cover) {
  const std::size_t n = cover.items.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t reward = 0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        reward += cover.items[i].reward;
        cost += cover.items[i].cost;
      }
    }
    if (reward >= cover.target) best = std::min(best, cost);
  }
  return best;
}

/// Cheapest probe set whose outcomes certify the class of x: the set must
/// contain working weight >= alpha_j and failed weight >= W - alpha_{j+1} + 1
/// (the full integer program, solved over all 2^n subsets).
inline double lower_bound_by_enumeration(const SscInstance& instance,
                                         std::span<const std::uint8_t> x) {
  const std::size_t n = instance.size();
  const auto alphas = instance.classes().alphas();
  std::int64_t score = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i]) score += instance.item(i).weight;
  }
  const int j = class_by_scan(alphas, score);
  const std::int64_t need1 = alphas[j];
  const std::int64_t need0 = instance.total_weight() - alphas[j + 1] + 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t got1 = 0;
    std::int64_t got0 = 0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      cost += instance.item(i).cost;
      (x[i] ? got1 : got0) += instance.item(i).weight;
    }
    if (got1 >= need1 && got0 >= need0) best = std::min(best, cost);
  }
  return best;
}

/// Semantic witness check: every completion of the unprobed items keeps each
/// halfspace in T at one value, and f is constant once those values are
/// fixed. Returns the certified value or nullopt.
inline std::optional<bool> witness_by_enumeration(
    const HalfspaceSystem& system, std::span<const int> probed,
    std::span<const std::uint8_t> values, std::span<const int> halfspaces) {
  const std::size_t n = system.size();
  const int d = system.dimension();
  std::vector<int> fixed(n, -1);
  for (std::size_t s = 0; s < probed.size(); ++s) fixed[probed[s]] = values[s];
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i] < 0) open.push_back(i);
  }
  std::vector<int> hval(d, -1);
  Realization x(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << open.size()); ++m) {
    for (std::size_t i = 0; i < n; ++i) x[i] = fixed[i] > 0 ? 1 : 0;
    for (std::size_t b = 0; b < open.size(); ++b) x[open[b]] = m >> b & 1;
    for (int k : halfspaces) {
      const int v = system.halfspace_value(k, x) ? 1 : 0;
      if (hval[k] >= 0 && hval[k] != v) return std::nullopt;
      hval[k] = v;
    }
  }
  std::vector<int> free;
  for (int k = 0; k < d; ++k) {
    if (hval[k] < 0) free.push_back(k);
  }
  std::optional<bool> f;
  std::vector<std::uint8_t> y(d);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
    for (int k = 0; k < d; ++k) y[k] = hval[k] > 0 ? 1 : 0;
    for (std::size_t b = 0; b < free.size(); ++b) y[free[b]] = m >> b & 1;
    const bool v = system.aggregator().evaluate(y);
    if (f && *f != v) return std::nullopt;
    f = v;
  }
  return f;
}


/// max over subsets A with sum of costs <= budget of Pr[R(S) < R(A)], where
/// item i contributes weights[i] with probability probs[i], independently.
/// Exact when Scalar is exact. Outcomes and subsets are both enumerated.
template <class Scalar>
Scalar worst_shortfall(std::span<const std::int64_t> weights,
                       std::span<const Scalar> probs,
                       std::span<const double> costs, std::span<const int> chosen,
                       double budget, std::uint64_t* worst_subset = nullptr) {
  const std::size_t n = weights.size();
  const std::uint64_t full = std::uint64_t{1} << n;
  std::vector<std::int64_t> subset_weight(full, 0);
  std::vector<bool> affordable(full, false);
  for (std::uint64_t m = 0; m < full; ++m) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (m >> i & 1) {
        subset_weight[m] += weights[i];
        c += costs[i];
      }
    }
    affordable[m] = c <= budget;
  }
  std::uint64_t s_mask = 0;
  for (int id : chosen) s_mask |= std::uint64_t{1} << id;
  std::vector<Scalar> shortfall(full, Scalar(0));
  for (std::uint64_t x = 0; x < full; ++x) {
    Scalar p(1);
    for (std::size_t i = 0; i < n; ++i) {
      p *= (x >> i & 1) ? probs[i] : Scalar(1) - probs[i];
    }
    if (p == Scalar(0)) continue;
    const std::int64_t rs = subset_weight[s_mask & x];
    for (std::uint64_t a = 0; a < full; ++a) {
      if (affordable[a] && rs < subset_weight[a & x]) shortfall[a] += p;
    }
  }
  Scalar worst(0);
  for (std::uint64_t a = 0; a < full; ++a) {
    if (affordable[a] && shortfall[a] > worst) {
      worst = shortfall[a];
      if (worst_subset) *worst_subset = a;
    }
  }
  return worst;
}

}  // namespace seqtest::oracle

#endif  // SEQTEST_ORACLES_HPP
