// Non-adaptive stochastic covering knapsack.
//
// Each candidate item carries a Bernoulli reward (value w_i with probability
// q_i, else 0) and a probe cost. Given a budget B the selector returns a fixed
// subset S with c(S) <= (C + 1) B whose reward is, with high probability, at
// least that of any policy restricted to cost B.
//
// Items costing more than B are dropped. For every power-of-two scale tau up
// to 2W the items get the deterministic surrogate reward
//     r_tau(i) = q_i * min(w_i / tau, 1),
// and the fractional knapsack at budget D = C B is inspected: the scale is
// rich when the LP derivative g'_tau(D) exceeds eps / B. The critical scale
// is the smallest poor one; S is the greedy prefix Q at that scale.
#ifndef SEQTEST_STOCHKNAP_HPP
#define SEQTEST_STOCHKNAP_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/knapsack.hpp"

namespace seqtest {

template <class Scalar>
struct RewardSpec {
  int id = 0;
  std::int64_t weight = 0;  // reward value when the Bernoulli fires
  Scalar prob{0};           // probability that it fires
  Scalar cost{1};
};

template <class Scalar>
struct ScaleReport {
  std::int64_t scale = 1;
  std::vector<Scalar> rewards;  // r_tau(i), aligned with the eligible items
  Scalar derivative{0};         // g'_tau(C B)
  bool rich = false;
};

template <class Scalar>
struct StochKnapResult {
  std::vector<int> items;          // S, in greedy order at the critical scale
  std::int64_t critical_scale = 1;
  std::size_t critical_index = 0;  // position of the critical scale in the table
  std::vector<int> eligible;       // T, ids of items with cost <= B
  std::uint64_t comparisons = 0;   // comparator calls (sort + selections)
  Scalar cost{0};
};

enum class CMode { practical, theory };

/// Smallest C with exp(-(mu - ln mu - 1)) <= eps, mu = (C - 1) eps / 2,
/// found by bisection on mu > 1.
double theory_capital_c(double epsilon);

/// Truncated expected reward of one item at `scale`.
template <class Scalar>
Scalar truncated_reward(const RewardSpec<Scalar>& spec, std::int64_t scale) {
  const std::int64_t capped = spec.weight < scale ? spec.weight : scale;
  return spec.prob * Scalar(capped) / Scalar(scale);
}

/// Scales {1, 2, ..., 2^L} with L = floor(log2 W) + 1, i.e. the largest scale
/// is the first power of two above W. W = 0 gives the single scale 1.
inline std::vector<std::int64_t> scale_set(std::int64_t total_weight) {
  std::vector<std::int64_t> scales{1};
  if (total_weight <= 0) return scales;
  const int top = std::bit_width(static_cast<std::uint64_t>(total_weight));
  for (int l = 1; l <= top; ++l) scales.push_back(std::int64_t{1} << l);
  return scales;
}

template <class Scalar>
void check_stochknap_params(const Scalar& budget, const Scalar& epsilon,
                            const Scalar& capital_c, CMode mode) {
  if (budget < Scalar(1)) throw ParameterError("budget must be at least 1");
  if (!(epsilon > Scalar(0) && epsilon < Scalar(1))) {
    throw ParameterError("epsilon must lie in (0, 1)");
  }
  if (!(capital_c > Scalar(1))) throw ParameterError("C must exceed 1");
  if (mode == CMode::theory &&
      !(capital_c > Scalar(1) + Scalar(2) / epsilon)) {
    throw ParameterError("theory mode requires C > 1 + 2/epsilon");
  }
}

namespace detail {

template <class Scalar>
std::vector<RewardSpec<Scalar>> eligible_items(
    std::span<const RewardSpec<Scalar>> items, const Scalar& budget) {
  std::vector<RewardSpec<Scalar>> out;
  out.reserve(items.size());
  for (const auto& it : items) {
    if (it.weight < 0) {
      throw InvalidInstance("reward item " + std::to_string(it.id) +
                            ": negative weight");
    }
    if (!(it.prob >= Scalar(0) && it.prob <= Scalar(1))) {
      throw InvalidInstance("reward item " + std::to_string(it.id) +
                            ": probability outside [0, 1]");
    }
    if (!(it.cost > Scalar(0))) {
      throw InvalidInstance("reward item " + std::to_string(it.id) +
                            ": cost must be positive");
    }
    if (it.cost <= budget) out.push_back(it);
  }
  return out;
}

template <class Scalar>
std::vector<KnapItem<Scalar>> knap_items_at(
    std::span<const RewardSpec<Scalar>> eligible, std::int64_t scale,
    std::vector<Scalar>* rewards) {
  std::vector<KnapItem<Scalar>> out;
  out.reserve(eligible.size());
  if (rewards) rewards->clear();
  for (const auto& it : eligible) {
    Scalar r = truncated_reward(it, scale);
    if (rewards) rewards->push_back(r);
    out.push_back({it.id, std::move(r), it.cost});
  }
  return out;
}

// Fills one report; the pivot is located by selection, not a sort.
template <class Scalar>
ScaleReport<Scalar> inspect_scale(std::span<const RewardSpec<Scalar>> eligible,
                                  std::int64_t scale, const Scalar& budget,
                                  const Scalar& epsilon,
                                  const Scalar& capital_c, bool keep_rewards,
                                  std::uint64_t* comparisons) {
  ScaleReport<Scalar> report;
  report.scale = scale;
  auto knap = knap_items_at<Scalar>(eligible, scale,
                                    keep_rewards ? &report.rewards : nullptr);
  const Scalar d = capital_c * budget;
  if (auto pos = select_pivot(knap, d, comparisons)) {
    report.derivative = knap[*pos].reward / knap[*pos].cost;
  }
  report.rich = report.derivative > epsilon / budget;
  return report;
}

// Total reward weight of the candidate set (defines the scale set).
template <class Scalar>
std::int64_t total_reward_weight(std::span<const RewardSpec<Scalar>> items) {
  std::int64_t w = 0;
  for (const auto& it : items) w += it.weight;
  return w;
}

}  // namespace detail

/// One report per scale in the scale set built from the candidates' total
/// weight. In practical mode (where C eps may be below 1) further doublings
/// are appended until a poor scale appears.
template <class Scalar>
std::vector<ScaleReport<Scalar>> scale_table(
    std::span<const RewardSpec<Scalar>> items, const Scalar& budget,
    const Scalar& epsilon, const Scalar& capital_c,
    CMode mode = CMode::practical) {
  check_stochknap_params(budget, epsilon, capital_c, mode);
  const auto eligible = detail::eligible_items(items, budget);
  std::vector<ScaleReport<Scalar>> table;
  for (std::int64_t scale : scale_set(detail::total_reward_weight(items))) {
    table.push_back(detail::inspect_scale<Scalar>(
        eligible, scale, budget, epsilon, capital_c, true, nullptr));
  }
  while (table.back().rich) {
    table.push_back(detail::inspect_scale<Scalar>(
        eligible, table.back().scale * 2, budget, epsilon, capital_c, true,
        nullptr));
  }
  return table;
}

template <class Scalar>
StochKnapResult<Scalar> stoch_knap(std::span<const RewardSpec<Scalar>> items,
                                   const Scalar& budget, const Scalar& epsilon,
                                   const Scalar& capital_c,
                                   CMode mode = CMode::practical) {
  check_stochknap_params(budget, epsilon, capital_c, mode);
  StochKnapResult<Scalar> result;
  const auto eligible = detail::eligible_items(items, budget);
  result.eligible.reserve(eligible.size());
  for (const auto& it : eligible) result.eligible.push_back(it.id);
  if (eligible.empty()) return result;

  // smallest poor scale; the last regular scale is poor whenever C eps >= 1,
  // otherwise keep doubling (rewards shrink as 1/tau past W)
  auto scales = scale_set(detail::total_reward_weight(items));
  std::int64_t critical = 0;
  for (std::size_t index = 0;; ++index) {
    if (index == scales.size()) {
      if (mode == CMode::theory) {
        throw std::logic_error("no poor scale although C > 1 + 2/epsilon");
      }
      scales.push_back(scales.back() * 2);
    }
    const auto report = detail::inspect_scale<Scalar>(
        eligible, scales[index], budget, epsilon, capital_c, false,
        &result.comparisons);
    if (!report.rich) {
      critical = scales[index];
      result.critical_index = index;
      break;
    }
  }
  result.critical_scale = critical;

  auto knap = detail::knap_items_at<Scalar>(eligible, critical, nullptr);
  std::sort(knap.begin(), knap.end(),
            [&](const KnapItem<Scalar>& a, const KnapItem<Scalar>& b) {
              ++result.comparisons;
              return greedy_before(a, b);
            });
  KnapResult<Scalar> solved;
  detail::fill_from_sorted<Scalar>(knap, capital_c * budget, solved);
  result.items = std::move(solved.prefix);
  result.cost = solved.prefix_cost;
  return result;
}

template <class Scalar>
StochKnapResult<Scalar> stoch_knap(const std::vector<RewardSpec<Scalar>>& items,
                                   const Scalar& budget, const Scalar& epsilon,
                                   const Scalar& capital_c,
                                   CMode mode = CMode::practical) {
  return stoch_knap(std::span<const RewardSpec<Scalar>>(items), budget,
                    epsilon, capital_c, mode);
}

template <class Scalar>
std::vector<ScaleReport<Scalar>> scale_table(
    const std::vector<RewardSpec<Scalar>>& items, const Scalar& budget,
    const Scalar& epsilon, const Scalar& capital_c,
    CMode mode = CMode::practical) {
  return scale_table(std::span<const RewardSpec<Scalar>>(items), budget,
                     epsilon, capital_c, mode);
}

}  // namespace seqtest

#endif  // SEQTEST_STOCHKNAP_HPP
