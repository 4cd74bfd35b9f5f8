// Instance model and score-classification semantics.
//
// An instance is a set of independent Bernoulli items X_i with probe cost
// c_i, success probability p_i and integer weight w_i, plus a partition of
// the possible scores {0, ..., W} into consecutive intervals (classes).
// Classes are 0-based throughout the library: class j covers the scores
// alphas[j] <= score < alphas[j + 1].
#ifndef SEQTEST_CORE_HPP
#define SEQTEST_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqtest {

/// Raised when an instance, system or list violates its structural invariants.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for out-of-range algorithm parameters (epsilon, C, mode, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Item {
  double cost = 1.0;
  double prob = 0.5;
  std::int64_t weight = 1;
};

/// Full outcome vector, one 0/1 entry per item.
using Realization = std::vector<std::uint8_t>;

class ClassPartition {
 public:
  ClassPartition() = default;

  /// Normalizes `alphas` against the total weight W of a nonnegative
  /// instance. Requires strictly increasing alphas with alphas.front() <= 0
  /// and alphas.back() >= W. The outer boundaries are then clamped to 0 and
  /// W + 1 so the half-open intervals partition {0, ..., W}; in particular a
  /// last boundary equal to W becomes W + 1. Clamping must keep the list
  /// strictly increasing, otherwise InvalidInstance is thrown.
  ClassPartition(std::vector<std::int64_t> alphas, std::int64_t total_weight);

  int num_classes() const { return static_cast<int>(alphas_.size()) - 1; }
  std::int64_t total_weight() const { return total_weight_; }
  std::span<const std::int64_t> alphas() const { return alphas_; }

  /// Smallest score of class j (beta^1_j).
  std::int64_t beta1(int j) const { return alphas_[j]; }
  /// Failed weight needed to rule out every score above class j (beta^0_j).
  std::int64_t beta0(int j) const { return total_weight_ - alphas_[j + 1] + 1; }

  /// Class containing `score`; scores outside [0, W] are clamped.
  int class_of(std::int64_t score) const;

 private:
  std::vector<std::int64_t> alphas_{0, 1};
  std::int64_t total_weight_ = 0;
};

/// Score-classification instance with nonnegative weights.
class SscInstance {
 public:
  SscInstance() = default;
  SscInstance(std::vector<Item> items, std::vector<std::int64_t> alphas,
              double setup_cost = 0.0);

  std::size_t size() const { return items_.size(); }
  std::span<const Item> items() const { return items_; }
  const Item& item(std::size_t i) const { return items_[i]; }
  const ClassPartition& classes() const { return classes_; }
  int num_classes() const { return classes_.num_classes(); }
  std::int64_t total_weight() const { return classes_.total_weight(); }
  double setup_cost() const { return setup_cost_; }
  /// Smallest item cost (1 for an empty instance); algorithms that work in
  /// rescaled cost units divide by this.
  double min_cost() const { return min_cost_; }

  /// Copy with the same items and a different class partition.
  SscInstance with_alphas(std::vector<std::int64_t> alphas) const;

 private:
  std::vector<Item> items_;
  ClassPartition classes_;
  double setup_cost_ = 0.0;
  double min_cost_ = 1.0;
};

/// Running partial information after probing a set of items.
struct ProbeState {
  std::size_t probes = 0;
  std::int64_t s1 = 0;  // weight of probed working items (R_1 reward)
  std::int64_t s0 = 0;  // weight of probed failed items (R_0 reward)

  void observe(std::int64_t weight, bool working) {
    ++probes;
    (working ? s1 : s0) += weight;
  }
};

/// Instance after mapping negative weights away, with the per-item flips
/// that relate its realizations to the original ones.
struct Reduction {
  SscInstance instance;
  std::vector<bool> flipped;
  std::int64_t offset = 0;  // sum of |w_i| over negative items

  /// Maps an original realization to the reduced instance.
  Realization map(std::span<const std::uint8_t> original) const;
};

/// Builds an equivalent nonnegative-weight instance: items with w_i < 0 are
/// replaced by X'_i = 1 - X_i (p'_i = 1 - p_i, w'_i = |w_i|) and every
/// boundary is shifted by the total negative magnitude. The raw alphas use
/// the original score range (alphas.front() <= min score,
/// alphas.back() >= max score).
Reduction reduce_negative_weights(std::span<const Item> raw_items,
                                  std::span<const std::int64_t> raw_alphas,
                                  double setup_cost = 0.0);

std::int64_t score(const SscInstance& instance,
                   std::span<const std::uint8_t> realization);

int classify(const SscInstance& instance,
             std::span<const std::uint8_t> realization);

/// Class certified by the probed items, if any: the class is known exactly
/// when the lowest and highest still-possible scores fall in the same class.
std::optional<int> stopping_check(const SscInstance& instance,
                                  const ProbeState& state);

void check_realization(std::size_t n, std::span<const std::uint8_t> realization);

}  // namespace seqtest

#endif  // SEQTEST_CORE_HPP
