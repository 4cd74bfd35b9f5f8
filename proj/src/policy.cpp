#include "seqtest/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqtest {

double effective_capital_c(const PolicyConfig& config, double epsilon) {
  if (config.mode == CMode::theory) return theory_capital_c(epsilon);
  return config.capital_c;
}

bool is_complete(const NonAdaptiveList& list, std::size_t n) {
  if (list.order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (int i : list.order) {
    if (i < 0 || static_cast<std::size_t>(i) >= n || seen[i]) return false;
    seen[i] = true;
  }
  std::size_t cursor = 0;
  int level = -1;
  for (const Phase& p : list.phases) {
    if (p.bounds.size() < 2 || p.begin() != cursor || p.level <= level) {
      return false;
    }
    if (!std::is_sorted(p.bounds.begin(), p.bounds.end())) return false;
    cursor = p.end();
    level = p.level;
  }
  return cursor == n;
}

NonAdaptiveList build_phased_list(
    std::span<const double> costs,
    std::span<const std::vector<RewardSpec<double>>> channels,
    double epsilon, double capital_c, CMode mode) {
  const std::size_t n = costs.size();
  for (const auto& ch : channels) {
    if (ch.size() != n) {
      throw InvalidInstance("reward channel size does not match item count");
    }
  }
  NonAdaptiveList list;
  list.params = {epsilon, capital_c, mode};
  list.order.reserve(n);
  std::vector<bool> listed(n, false);
  std::vector<RewardSpec<double>> residual;
  residual.reserve(n);

  for (int level = 0; list.order.size() < n; ++level) {
    if (level > 62) throw std::logic_error("phase budget overflow");
    const double budget = static_cast<double>(std::int64_t{1} << level);
    Phase phase;
    phase.level = level;
    phase.bounds.push_back(list.order.size());
    for (const auto& channel : channels) {
      residual.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (!listed[i]) residual.push_back(channel[i]);
      }
      if (!residual.empty()) {
        const auto picked =
            stoch_knap<double>(residual, budget, epsilon, capital_c, mode);
        for (int id : picked.items) {
          listed[id] = true;
          list.order.push_back(id);
        }
      }
      phase.bounds.push_back(list.order.size());
    }
    if (phase.end() > phase.begin()) list.phases.push_back(std::move(phase));
  }
  return list;
}

NonAdaptiveList build_list(const SscInstance& instance,
                           const PolicyConfig& config) {
  const std::size_t n = instance.size();
  const double scale = instance.min_cost();
  std::vector<double> costs(n);
  std::vector<std::vector<RewardSpec<double>>> channels(
      2, std::vector<RewardSpec<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Item& it = instance.item(i);
    costs[i] = it.cost / scale;
    const int id = static_cast<int>(i);
    channels[0][i] = {id, it.weight, 1.0 - it.prob, costs[i]};  // R_0
    channels[1][i] = {id, it.weight, it.prob, costs[i]};        // R_1
  }
  return build_phased_list(costs, channels, config.epsilon,
                           effective_capital_c(config, config.epsilon),
                           config.mode);
}

UniversalityReport universal_property_check(std::span<const SscInstance> family,
                                            const PolicyConfig& config) {
  UniversalityReport report;
  for (const SscInstance& inst : family) {
    const auto& first = family.front();
    if (inst.size() != first.size()) {
      throw InvalidInstance("family members differ in item count");
    }
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const Item& a = inst.item(i);
      const Item& b = first.item(i);
      if (a.cost != b.cost || a.prob != b.prob || a.weight != b.weight) {
        throw InvalidInstance("family members differ in item " +
                              std::to_string(i));
      }
    }
    NonAdaptiveList list = build_list(inst, config);
    ++report.builds;
    if (report.builds == 1) {
      report.list = std::move(list);
    } else if (!(list == report.list)) {
      report.identical = false;
    }
  }
  return report;
}

}  // namespace seqtest
