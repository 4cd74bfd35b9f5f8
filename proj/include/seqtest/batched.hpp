// Batched execution of phased lists under a per-batch setup cost rho.
//
// With tau = floor(log2(rho)) (costs in units of the cheapest item, tau = 0
// when rho < 1), the first batch tests every item of phases 0..tau at once
// and each later nonempty phase is one more batch. The stopping rule is only
// consulted between batches. A run that ends in its k-th batch has final
// batch index tau + k - 1 and pays k * rho in setup costs.
#ifndef SEQTEST_BATCHED_HPP
#define SEQTEST_BATCHED_HPP

#include <span>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/exdshe.hpp"
#include "seqtest/policy.hpp"
#include "seqtest/simulate.hpp"

namespace seqtest {

struct BatchedPolicy {
  int start_phase = 0;                 // tau
  double setup_cost = 0.0;             // rho, original cost units
  std::vector<std::size_t> batch_ends; // exclusive end of each batch in the list
};

/// tau for a setup cost expressed in original units.
int start_phase_for(double setup_cost, double min_cost);

BatchedPolicy make_batched_policy(const NonAdaptiveList& list,
                                  double setup_cost, double min_cost);

RunResult run_batched(const SscInstance& instance, const NonAdaptiveList& list,
                      const BatchedPolicy& policy,
                      std::span<const std::uint8_t> realization);

RunResult run_batched(const HalfspaceSystem& system,
                      const NonAdaptiveList& list, const BatchedPolicy& policy,
                      std::span<const std::uint8_t> realization);

}  // namespace seqtest

#endif  // SEQTEST_BATCHED_HPP
