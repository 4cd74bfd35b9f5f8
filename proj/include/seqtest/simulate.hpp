// Executing probe lists against realizations.
#ifndef SEQTEST_SIMULATE_HPP
#define SEQTEST_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/exdshe.hpp"
#include "seqtest/policy.hpp"
#include "seqtest/random.hpp"

namespace seqtest {

/// Record of one execution. The probed items are always the first `probes`
/// entries of the executed list.
struct RunResult {
  std::uint64_t realization_id = 0;
  std::size_t probes = 0;
  double testing_cost = 0.0;
  double setup_cost = 0.0;
  std::size_t batches = 0;
  int final_batch = -1;  // phase index of the last batch, -1 when none ran
  int outcome = -1;      // class index, or 0/1 aggregate value
  std::optional<Witness> witness;

  double cost() const { return testing_cost + setup_cost; }
};

/// Probes in list order and stops at the first certified class.
RunResult run_list(const SscInstance& instance, const NonAdaptiveList& list,
                   std::span<const std::uint8_t> realization);

/// Probes in list order until the probed outcomes form a witness; the
/// witness uses every halfspace determined at that point.
RunResult simulate_until_witness(const HalfspaceSystem& system,
                                 const NonAdaptiveList& list,
                                 std::span<const std::uint8_t> realization);

inline constexpr std::size_t kExactCap = 20;

/// Expected stopping cost of `list` under the product distribution. Exact
/// for exact Scalar types: it equals the sum over all 2^n realizations of
/// Pr[X] * cost(run_list), computed by propagating the distribution of the
/// probed working weight through the list.
template <class Scalar>
Scalar exact_expected_cost(const SscInstance& instance,
                           const NonAdaptiveList& list,
                           std::size_t cap = kExactCap) {
  if (instance.size() > cap) {
    throw ParameterError("exact expected cost refused: n = " +
                         std::to_string(instance.size()) + " exceeds cap " +
                         std::to_string(cap));
  }
  if (!is_complete(list, instance.size())) {
    throw InvalidInstance("list is not a permutation of the items");
  }
  const auto& classes = instance.classes();
  const std::int64_t total = instance.total_weight();
  if (total > (std::int64_t{1} << 24)) {
    throw ParameterError("exact expected cost refused: total weight too large");
  }
  std::vector<Scalar> alive(static_cast<std::size_t>(total) + 1, Scalar(0));
  alive[0] = Scalar(1);
  std::int64_t listed_weight = 0;
  auto prune = [&] {
    for (std::int64_t s = 0; s <= listed_weight; ++s) {
      if (classes.class_of(s) ==
          classes.class_of(total - (listed_weight - s))) {
        alive[s] = Scalar(0);
      }
    }
  };
  prune();
  Scalar expected(0);
  for (int id : list.order) {
    Scalar mass(0);
    for (std::int64_t s = 0; s <= listed_weight; ++s) mass += alive[s];
    if (mass == Scalar(0)) break;
    const Item& it = instance.item(id);
    expected += Scalar(it.cost) * mass;
    const Scalar p(it.prob);
    const Scalar q = Scalar(1) - p;
    for (std::int64_t s = listed_weight; s >= 0; --s) {
      const Scalar here = alive[s];
      alive[s] = here * q;
      if (it.weight > 0) alive[s + it.weight] += here * p;
      else alive[s] += here * p;
    }
    listed_weight += it.weight;
    prune();
  }
  return expected;
}

/// Uniformly random permutation from the seeded stream (one phase).
NonAdaptiveList random_baseline(std::size_t n, std::uint64_t seed);
NonAdaptiveList random_baseline(const SscInstance& instance,
                                std::uint64_t seed);

Realization sample_realization(std::span<const Item> items, Rng& rng);

/// Seed of realization `index` in the stream rooted at `seed`.
inline std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(seed, {0x7265616CULL, index});
}

/// Neumaier-compensated running sum; fixed order gives bitwise-reproducible
/// totals.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct CostSummary {
  std::size_t realizations = 0;
  double mean_cost = 0.0;
  double std_error = 0.0;
  double lb_mean = std::nan("");
  double ratio = std::nan("");  // mean cost / mean lower bound
  double seconds = 0.0;
};

struct EstimateOptions {
  bool batched = false;      // use the instance setup cost with phase batches
  bool lower_bound = true;   // attach the per-realization lower bound
};

/// Monte Carlo estimate over `num_realizations` realizations drawn from the
/// product law; realization r uses realization_seed(seed, r).
CostSummary estimate(const SscInstance& instance, const NonAdaptiveList& list,
                     std::size_t num_realizations, std::uint64_t seed,
                     const EstimateOptions& options = {});

CostSummary estimate(const HalfspaceSystem& system,
                     const NonAdaptiveList& list,
                     std::size_t num_realizations, std::uint64_t seed,
                     const EstimateOptions& options = {});

}  // namespace seqtest

#endif  // SEQTEST_SIMULATE_HPP
