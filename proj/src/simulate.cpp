#include "seqtest/simulate.hpp"

#include <chrono>
#include <numeric>

#include "seqtest/batched.hpp"
#include "seqtest/lowerbound.hpp"

namespace seqtest {

namespace {

void check_list(const NonAdaptiveList& list, std::size_t n) {
  for (int id : list.order) {
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw InvalidInstance("list refers to item " + std::to_string(id) +
                            " outside the instance");
    }
  }
}

struct Moments {
  CompensatedSum cost;
  CompensatedSum cost_sq;
  CompensatedSum lb;

  void finish(CostSummary& out, std::size_t n, bool with_lb) const {
    out.realizations = n;
    if (n == 0) return;
    const double count = static_cast<double>(n);
    out.mean_cost = cost.value() / count;
    if (n > 1) {
      const double var =
          std::max(0.0, (cost_sq.value() - count * out.mean_cost * out.mean_cost) /
                            (count - 1.0));
      out.std_error = std::sqrt(var / count);
    }
    if (with_lb) {
      out.lb_mean = lb.value() / count;
      out.ratio = out.lb_mean > 0.0 ? out.mean_cost / out.lb_mean
                                    : (out.mean_cost > 0.0 ? INFINITY : 1.0);
    }
  }
};

}  // namespace

RunResult run_list(const SscInstance& instance, const NonAdaptiveList& list,
                   std::span<const std::uint8_t> realization) {
  check_realization(instance.size(), realization);
  check_list(list, instance.size());
  RunResult run;
  ProbeState state;
  std::optional<int> klass = stopping_check(instance, state);
  for (std::size_t k = 0; !klass && k < list.order.size(); ++k) {
    const int id = list.order[k];
    const Item& it = instance.item(id);
    state.observe(it.weight, realization[id] != 0);
    run.testing_cost += it.cost;
    klass = stopping_check(instance, state);
  }
  if (!klass) {
    throw std::logic_error("list exhausted before the class was certified");
  }
  run.probes = state.probes;
  run.outcome = *klass;
  return run;
}

RunResult simulate_until_witness(const HalfspaceSystem& system,
                                 const NonAdaptiveList& list,
                                 std::span<const std::uint8_t> realization) {
  check_realization(system.size(), realization);
  check_list(list, system.size());
  RunResult run;
  WitnessTracker tracker(system);
  std::size_t k = 0;
  std::optional<bool> value = tracker.decided();
  for (; !value && k < list.order.size(); ++k) {
    const int id = list.order[k];
    tracker.observe(static_cast<std::size_t>(id), realization[id] != 0);
    run.testing_cost += system.item(id).cost;
    value = tracker.decided();
  }
  if (!value) {
    throw std::logic_error("list exhausted without a witness");
  }
  run.probes = k;
  run.outcome = *value ? 1 : 0;
  Witness w;
  w.probed.assign(list.order.begin(), list.order.begin() + k);
  w.values.reserve(k);
  for (int id : w.probed) w.values.push_back(realization[id]);
  w.halfspaces = tracker.determined();
  w.value = *value;
  run.witness = std::move(w);
  return run;
}

NonAdaptiveList random_baseline(std::size_t n, std::uint64_t seed) {
  NonAdaptiveList list;
  list.order.resize(n);
  std::iota(list.order.begin(), list.order.end(), 0);
  Rng rng(derive_seed(seed, {0x7065726DULL}));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(list.order[i - 1], list.order[j]);
  }
  list.phases.push_back({0, {0, n}});
  return list;
}

NonAdaptiveList random_baseline(const SscInstance& instance,
                                std::uint64_t seed) {
  return random_baseline(instance.size(), seed);
}

Realization sample_realization(std::span<const Item> items, Rng& rng) {
  Realization x(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    x[i] = rng.uniform() < items[i].prob ? 1 : 0;
  }
  return x;
}

CostSummary estimate(const SscInstance& instance, const NonAdaptiveList& list,
                     std::size_t num_realizations, std::uint64_t seed,
                     const EstimateOptions& options) {
  if (num_realizations == 0) {
    throw ParameterError("need at least one realization");
  }
  const auto start = std::chrono::steady_clock::now();
  std::optional<BatchedPolicy> batched;
  if (options.batched) {
    batched = make_batched_policy(list, instance.setup_cost(),
                                  instance.min_cost());
  }
  Moments m;
  for (std::size_t r = 0; r < num_realizations; ++r) {
    Rng rng(realization_seed(seed, r));
    const Realization x = sample_realization(instance.items(), rng);
    const RunResult run = batched ? run_batched(instance, list, *batched, x)
                                  : run_list(instance, list, x);
    m.cost.add(run.cost());
    m.cost_sq.add(run.cost() * run.cost());
    if (options.lower_bound) {
      double lb = realization_lb(instance, x);
      if (batched && lb > 0.0) lb += instance.setup_cost();
      m.lb.add(lb);
    }
  }
  CostSummary out;
  m.finish(out, num_realizations, options.lower_bound);
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

CostSummary estimate(const HalfspaceSystem& system,
                     const NonAdaptiveList& list,
                     std::size_t num_realizations, std::uint64_t seed,
                     const EstimateOptions& options) {
  if (num_realizations == 0) {
    throw ParameterError("need at least one realization");
  }
  const auto start = std::chrono::steady_clock::now();
  std::optional<BatchedPolicy> batched;
  if (options.batched) {
    batched = make_batched_policy(list, system.setup_cost(), system.min_cost());
  }
  Moments m;
  for (std::size_t r = 0; r < num_realizations; ++r) {
    Rng rng(realization_seed(seed, r));
    const Realization x = sample_realization(system.items(), rng);
    const RunResult run = batched ? run_batched(system, list, *batched, x)
                                  : simulate_until_witness(system, list, x);
    m.cost.add(run.cost());
    m.cost_sq.add(run.cost() * run.cost());
  }
  CostSummary out;
  m.finish(out, num_realizations, false);
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

}  // namespace seqtest
