// Explainable evaluation of an aggregate of d halfspaces.
//
// Halfspace k is h_k(X) = [sum_i w_ki X_i >= alpha_k] with weights of either
// sign. After moving negative weights to the complemented variable, h_k is
// certified to be 1 once the probed items contribute R_{k,1} >= beta_{k,1}
// and to be 0 once they contribute R_{k,0} >= beta_{k,0}.
//
// A witness (S, v, T) is a probed set S with outcomes v that determines every
// halfspace in T, where the values on T alone fix the aggregate f.
#ifndef SEQTEST_EXDSHE_HPP
#define SEQTEST_EXDSHE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/policy.hpp"
#include "seqtest/stochknap.hpp"

namespace seqtest {

class Aggregator {
 public:
  enum class Kind { all_of, any_of, at_least, table };

  static Aggregator all_of() { return Aggregator(Kind::all_of, 0, {}); }
  static Aggregator any_of() { return Aggregator(Kind::any_of, 0, {}); }
  static Aggregator at_least(int count) {
    return Aggregator(Kind::at_least, count, {});
  }
  /// Explicit truth table: entry y holds f at the point whose bit k
  /// (least significant first) is y_k. Size must be 2^d.
  static Aggregator table(std::vector<std::uint8_t> bits);

  Kind kind() const { return kind_; }
  int count() const { return count_; }
  std::span<const std::uint8_t> bits() const { return table_; }

  bool evaluate(std::span<const std::uint8_t> y) const;

  /// Value of f if it is constant over every completion of `partial`
  /// (entries 0/1 are fixed, anything else is free), nullopt otherwise.
  std::optional<bool> forced(std::span<const std::int8_t> partial) const;

  void check_arity(int d) const;

  static constexpr int kMaxTableArity = 20;

 private:
  Aggregator(Kind kind, int count, std::vector<std::uint8_t> table)
      : kind_(kind), count_(count), table_(std::move(table)) {}

  Kind kind_ = Kind::all_of;
  int count_ = 0;
  std::vector<std::uint8_t> table_;
};

struct Halfspace {
  std::vector<std::int64_t> weights;
  std::int64_t alpha = 0;
};

/// Items carry cost and probability; their `weight` field is unused here.
class HalfspaceSystem {
 public:
  HalfspaceSystem(std::vector<Item> items, std::vector<Halfspace> halfspaces,
                  Aggregator aggregator, double setup_cost = 0.0);

  std::size_t size() const { return items_.size(); }
  int dimension() const { return static_cast<int>(halfspaces_.size()); }
  std::span<const Item> items() const { return items_; }
  const Item& item(std::size_t i) const { return items_[i]; }
  const Halfspace& halfspace(int k) const { return halfspaces_[k]; }
  const Aggregator& aggregator() const { return aggregator_; }
  double setup_cost() const { return setup_cost_; }
  double min_cost() const { return min_cost_; }

  /// h_k of a full realization.
  bool halfspace_value(int k, std::span<const std::uint8_t> realization) const;
  /// f(h(X)) of a full realization.
  bool value(std::span<const std::uint8_t> realization) const;

 private:
  std::vector<Item> items_;
  std::vector<Halfspace> halfspaces_;
  Aggregator aggregator_;
  double setup_cost_ = 0.0;
  double min_cost_ = 1.0;
};

struct HalfspaceRewards {
  /// rewards[b][i]: R_{k,b} of item i (nonnegative weight, firing probability)
  std::array<std::vector<RewardSpec<double>>, 2> rewards;
  /// beta[b]: reward needed to certify h_k = b
  std::array<std::int64_t, 2> beta{0, 0};
  /// alpha_k shifted by the negative weight magnitude
  std::int64_t shifted_alpha = 0;
  std::int64_t total_weight = 0;  // sum of |w_ki|
};

/// Nonnegative rewards of halfspace k. `cost_scale` divides item costs.
HalfspaceRewards halfspace_rewards(const HalfspaceSystem& system, int k,
                                   double cost_scale = 1.0);

/// Per-call epsilon is epsilon / d; 2d channels per phase, k outer, b inner.
NonAdaptiveList build_list_exdshe(const HalfspaceSystem& system,
                                  const PolicyConfig& config = {});

struct Witness {
  std::vector<int> probed;             // S
  std::vector<std::uint8_t> values;    // v, aligned with `probed`
  std::vector<int> halfspaces;         // T
  bool value = false;                  // f(h(X))
};

/// Aggregate value certified by (S, v, T), or nullopt when it is not a
/// witness. Throws InvalidInstance on malformed input (T outside [0, d),
/// unknown or repeated items in S, size mismatch between S and v).
std::optional<bool> witness_value(const HalfspaceSystem& system,
                                  std::span<const int> probed,
                                  std::span<const std::uint8_t> values,
                                  std::span<const int> halfspaces);

bool verify_witness(const HalfspaceSystem& system, std::span<const int> probed,
                    std::span<const std::uint8_t> values,
                    std::span<const int> halfspaces);

/// Incremental certification state for one halfspace system.
class WitnessTracker {
 public:
  explicit WitnessTracker(const HalfspaceSystem& system);

  void observe(std::size_t item, bool working);
  /// Recomputes the aggregate check only when the determined set changed.
  std::optional<bool> decided();
  std::span<const std::int8_t> halfspace_values() const { return known_; }
  std::vector<int> determined() const;

 private:
  void refresh(int k);

  const HalfspaceSystem* system_;
  std::vector<std::array<std::int64_t, 2>> gathered_;
  std::vector<std::array<std::int64_t, 2>> beta_;
  std::vector<std::int8_t> known_;
  bool dirty_ = true;
  std::optional<bool> decided_;
};

}  // namespace seqtest

#endif  // SEQTEST_EXDSHE_HPP
