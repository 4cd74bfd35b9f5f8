// Per-realization information-theoretic lower bound.
//
// For a realization of class j, any policy must probe working items of total
// weight >= beta^1_j and failed items of total weight >= beta^0_j before the
// class is certain. Each item feeds exactly one of the two constraints, so the
// cheapest certifying set splits into two independent min-cost covers.
#ifndef SEQTEST_LOWERBOUND_HPP
#define SEQTEST_LOWERBOUND_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "seqtest/core.hpp"

namespace seqtest {

struct CoverItem {
  int id = 0;
  double cost = 1.0;
  std::int64_t reward = 0;
};

struct CoverInstance {
  std::vector<CoverItem> items;
  std::int64_t target = 0;
};

struct CoverResult {
  bool feasible = true;
  double cost = 0.0;
  std::vector<int> chosen;  // ids
};

/// Minimum-cost subset with total reward >= target (0/1 choices), by dynamic
/// programming over rewards capped at the target: O(n * target).
CoverResult min_cost_cover(const CoverInstance& cover);

struct LowerBoundDetail {
  int klass = 0;
  CoverResult working;  // covers beta^1 with working items
  CoverResult failed;   // covers beta^0 with failed items
  double value = 0.0;
};

LowerBoundDetail realization_lb_detail(const SscInstance& instance,
                                       std::span<const std::uint8_t> realization);

double realization_lb(const SscInstance& instance,
                      std::span<const std::uint8_t> realization);

}  // namespace seqtest

#endif  // SEQTEST_LOWERBOUND_HPP
