#include "seqtest/batched.hpp"

#include <cmath>

namespace seqtest {

int start_phase_for(double setup_cost, double min_cost) {
  if (!(setup_cost >= 0.0)) throw ParameterError("setup cost must be >= 0");
  const double scaled = setup_cost / min_cost;
  if (scaled < 1.0) return 0;
  return static_cast<int>(std::floor(std::log2(scaled)));
}

BatchedPolicy make_batched_policy(const NonAdaptiveList& list,
                                  double setup_cost, double min_cost) {
  BatchedPolicy policy;
  policy.setup_cost = setup_cost;
  policy.start_phase = start_phase_for(setup_cost, min_cost);
  std::size_t first_end = 0;
  bool merged = false;
  for (const Phase& p : list.phases) {
    if (p.level <= policy.start_phase) {
      first_end = p.end();
      merged = true;
    }
  }
  if (merged) policy.batch_ends.push_back(first_end);
  for (const Phase& p : list.phases) {
    if (p.level > policy.start_phase) policy.batch_ends.push_back(p.end());
  }
  if (list.phases.empty() && !list.order.empty()) {
    policy.batch_ends.push_back(list.order.size());
  }
  return policy;
}

namespace {

template <class Certify, class Observe>
RunResult run_batches(const NonAdaptiveList& list, const BatchedPolicy& policy,
                      std::span<const Item> items, Certify certify,
                      Observe observe) {
  RunResult run;
  std::size_t cursor = 0;
  bool done = certify();
  for (std::size_t b = 0; !done && b < policy.batch_ends.size(); ++b) {
    run.setup_cost += policy.setup_cost;
    ++run.batches;
    for (; cursor < policy.batch_ends[b]; ++cursor) {
      const int id = list.order[cursor];
      observe(id);
      run.testing_cost += items[id].cost;
    }
    done = certify();
  }
  if (!done) throw std::logic_error("batches exhausted before certification");
  run.probes = cursor;
  run.final_batch = run.batches == 0
                        ? -1
                        : policy.start_phase + static_cast<int>(run.batches) - 1;
  return run;
}

}  // namespace

RunResult run_batched(const SscInstance& instance, const NonAdaptiveList& list,
                      const BatchedPolicy& policy,
                      std::span<const std::uint8_t> realization) {
  check_realization(instance.size(), realization);
  ProbeState state;
  std::optional<int> klass;
  RunResult run = run_batches(
      list, policy, instance.items(),
      [&] {
        klass = stopping_check(instance, state);
        return klass.has_value();
      },
      [&](int id) {
        state.observe(instance.item(id).weight, realization[id] != 0);
      });
  run.outcome = *klass;
  return run;
}

RunResult run_batched(const HalfspaceSystem& system,
                      const NonAdaptiveList& list, const BatchedPolicy& policy,
                      std::span<const std::uint8_t> realization) {
  check_realization(system.size(), realization);
  WitnessTracker tracker(system);
  std::optional<bool> value;
  RunResult run = run_batches(
      list, policy, system.items(),
      [&] {
        value = tracker.decided();
        return value.has_value();
      },
      [&](int id) {
        tracker.observe(static_cast<std::size_t>(id), realization[id] != 0);
      });
  run.outcome = *value ? 1 : 0;
  Witness w;
  w.probed.assign(list.order.begin(), list.order.begin() + run.probes);
  for (int id : w.probed) w.values.push_back(realization[id]);
  w.halfspaces = tracker.determined();
  w.value = *value;
  run.witness = std::move(w);
  return run;
}

}  // namespace seqtest
