#include "seqtest/lowerbound.hpp"

#include <algorithm>
#include <limits>

namespace seqtest {

CoverResult min_cost_cover(const CoverInstance& cover) {
  CoverResult out;
  if (cover.target <= 0) return out;
  std::int64_t available = 0;
  for (const auto& it : cover.items) {
    if (it.reward < 0) throw InvalidInstance("cover rewards must be >= 0");
    if (!(it.cost >= 0.0)) throw InvalidInstance("cover costs must be >= 0");
    available += it.reward;
  }
  if (available < cover.target) {
    out.feasible = false;
    out.cost = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto target = static_cast<std::size_t>(cover.target);
  const double inf = std::numeric_limits<double>::infinity();
  // best[v]: cheapest cost reaching reward >= v with the items seen so far
  std::vector<double> best(target + 1, inf);
  best[0] = 0.0;
  std::vector<std::vector<bool>> took;
  took.reserve(cover.items.size());
  for (const auto& it : cover.items) {
    took.emplace_back(target + 1, false);
    if (it.reward == 0) continue;
    auto& row = took.back();
    for (std::size_t v = target; v >= 1; --v) {
      const std::size_t from =
          v > static_cast<std::size_t>(it.reward) ? v - it.reward : 0;
      const double candidate = best[from] + it.cost;
      if (candidate < best[v]) {
        best[v] = candidate;
        row[v] = true;
      }
    }
  }
  out.cost = best[target];
  std::size_t v = target;
  for (std::size_t k = cover.items.size(); k-- > 0 && v > 0;) {
    if (took[k][v]) {
      out.chosen.push_back(cover.items[k].id);
      const auto r = static_cast<std::size_t>(cover.items[k].reward);
      v = v > r ? v - r : 0;
    }
  }
  std::reverse(out.chosen.begin(), out.chosen.end());
  return out;
}

LowerBoundDetail realization_lb_detail(
    const SscInstance& instance, std::span<const std::uint8_t> realization) {
  LowerBoundDetail out;
  out.klass = classify(instance, realization);
  CoverInstance working;
  CoverInstance failed;
  working.target = std::max<std::int64_t>(0, instance.classes().beta1(out.klass));
  failed.target = std::max<std::int64_t>(0, instance.classes().beta0(out.klass));
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Item& it = instance.item(i);
    if (it.weight == 0) continue;
    CoverItem c{static_cast<int>(i), it.cost, it.weight};
    (realization[i] ? working : failed).items.push_back(c);
  }
  out.working = min_cost_cover(working);
  out.failed = min_cost_cover(failed);
  out.value = out.working.cost + out.failed.cost;
  return out;
}

double realization_lb(const SscInstance& instance,
                      std::span<const std::uint8_t> realization) {
  return realization_lb_detail(instance, realization).value;
}

}  // namespace seqtest
