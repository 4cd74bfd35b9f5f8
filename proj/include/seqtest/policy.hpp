// Phase-doubling construction of non-adaptive probe lists.
//
// In phase l every reward channel (R_0 and R_1 for score classification,
// R_{k,0} and R_{k,1} for each halfspace) gets one stochastic-knapsack call
// with budget 2^l over the items not yet listed; the selected items are
// appended in greedy order. Costs are rescaled so the cheapest item costs 1.
// The list depends only on costs, probabilities and weights, never on the
// class boundaries.
#ifndef SEQTEST_POLICY_HPP
#define SEQTEST_POLICY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/stochknap.hpp"

namespace seqtest {

struct PolicyConfig {
  double epsilon = 0.15;
  double capital_c = 2.0;
  CMode mode = CMode::practical;
};

/// C actually used for calls at `epsilon`: the configured value in practical
/// mode, the smallest admissible value in theory mode.
double effective_capital_c(const PolicyConfig& config, double epsilon);

struct Phase {
  int level = 0;
  /// Segment boundaries into the list order, one segment per reward channel:
  /// segment s is [bounds[s], bounds[s + 1]).
  std::vector<std::size_t> bounds;

  std::size_t begin() const { return bounds.front(); }
  std::size_t end() const { return bounds.back(); }

  bool operator==(const Phase&) const = default;
};

struct ListParams {
  double epsilon = 0.15;    // per-call epsilon
  double capital_c = 2.0;   // per-call C
  CMode mode = CMode::practical;

  bool operator==(const ListParams&) const = default;
};

struct NonAdaptiveList {
  std::vector<int> order;
  std::vector<Phase> phases;  // nonempty phases only, increasing level
  ListParams params;

  bool operator==(const NonAdaptiveList&) const = default;
};

/// True when `list.order` is a permutation of {0, ..., n-1} and the phase
/// segments tile it in order.
bool is_complete(const NonAdaptiveList& list, std::size_t n);

/// Generic phased builder. `channels[k][i]` is the reward description of
/// item i for channel k; `costs` are already rescaled (min cost 1).
NonAdaptiveList build_phased_list(
    std::span<const double> costs,
    std::span<const std::vector<RewardSpec<double>>> channels,
    double epsilon, double capital_c, CMode mode);

/// Score-classification list: two channels (R_0 then R_1) per phase.
NonAdaptiveList build_list(const SscInstance& instance,
                           const PolicyConfig& config = {});

struct UniversalityReport {
  bool identical = true;
  std::size_t builds = 0;
  NonAdaptiveList list;
};

/// Builds the list for every member of a family that shares items and
/// differs only in class boundaries, and reports whether all coincide.
UniversalityReport universal_property_check(std::span<const SscInstance> family,
                                            const PolicyConfig& config = {});

}  // namespace seqtest

#endif  // SEQTEST_POLICY_HPP
