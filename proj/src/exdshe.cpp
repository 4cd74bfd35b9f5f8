#include "seqtest/exdshe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace seqtest {

Aggregator Aggregator::table(std::vector<std::uint8_t> bits) {
  if (bits.empty() || (bits.size() & (bits.size() - 1)) != 0) {
    throw InvalidInstance("truth table size must be a power of two");
  }
  for (auto& b : bits) {
    if (b > 1) throw InvalidInstance("truth table entries must be 0 or 1");
  }
  return Aggregator(Kind::table, 0, std::move(bits));
}

void Aggregator::check_arity(int d) const {
  if (d < 1) throw InvalidInstance("need at least one halfspace");
  if (kind_ == Kind::table) {
    if (d > kMaxTableArity) {
      throw InvalidInstance("truth tables are limited to d <= 20");
    }
    if (table_.size() != (std::size_t{1} << d)) {
      throw InvalidInstance("truth table has " + std::to_string(table_.size()) +
                            " entries, expected 2^" + std::to_string(d));
    }
  }
}

bool Aggregator::evaluate(std::span<const std::uint8_t> y) const {
  int ones = 0;
  for (auto v : y) ones += v ? 1 : 0;
  const int d = static_cast<int>(y.size());
  switch (kind_) {
    case Kind::all_of:
      return ones == d;
    case Kind::any_of:
      return ones > 0;
    case Kind::at_least:
      return ones >= count_;
    case Kind::table: {
      std::size_t index = 0;
      for (int k = 0; k < d; ++k) {
        if (y[k]) index |= std::size_t{1} << k;
      }
      return table_[index] != 0;
    }
  }
  return false;
}

std::optional<bool> Aggregator::forced(
    std::span<const std::int8_t> partial) const {
  const int d = static_cast<int>(partial.size());
  int ones = 0;
  int zeros = 0;
  for (auto v : partial) {
    if (v == 1) ++ones;
    if (v == 0) ++zeros;
  }
  const int free = d - ones - zeros;
  switch (kind_) {
    case Kind::all_of:
      if (zeros > 0) return false;
      if (free == 0) return true;
      return std::nullopt;
    case Kind::any_of:
      if (ones > 0) return true;
      if (free == 0) return false;
      return std::nullopt;
    case Kind::at_least:
      if (ones >= count_) return true;
      if (ones + free < count_) return false;
      return std::nullopt;
    case Kind::table: {
      std::size_t base = 0;
      std::vector<int> open;
      for (int k = 0; k < d; ++k) {
        if (partial[k] == 1) base |= std::size_t{1} << k;
        if (partial[k] != 0 && partial[k] != 1) open.push_back(k);
      }
      const bool first = table_[base] != 0;
      const std::size_t completions = std::size_t{1} << open.size();
      for (std::size_t mask = 1; mask < completions; ++mask) {
        std::size_t index = base;
        for (std::size_t b = 0; b < open.size(); ++b) {
          if (mask >> b & 1) index |= std::size_t{1} << open[b];
        }
        if ((table_[index] != 0) != first) return std::nullopt;
      }
      return first;
    }
  }
  return std::nullopt;
}

HalfspaceSystem::HalfspaceSystem(std::vector<Item> items,
                                 std::vector<Halfspace> halfspaces,
                                 Aggregator aggregator, double setup_cost)
    : items_(std::move(items)),
      halfspaces_(std::move(halfspaces)),
      aggregator_(std::move(aggregator)),
      setup_cost_(setup_cost) {
  aggregator_.check_arity(dimension());
  min_cost_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Item& it = items_[i];
    if (!(it.cost > 0.0) || !std::isfinite(it.cost)) {
      throw InvalidInstance("item " + std::to_string(i) +
                            ": cost must be positive and finite");
    }
    if (!(it.prob >= 0.0 && it.prob <= 1.0)) {
      throw InvalidInstance("item " + std::to_string(i) +
                            ": probability must lie in [0, 1]");
    }
    min_cost_ = std::min(min_cost_, it.cost);
  }
  if (items_.empty()) min_cost_ = 1.0;
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) {
    if (halfspaces_[k].weights.size() != items_.size()) {
      throw InvalidInstance("halfspace " + std::to_string(k) + " has " +
                            std::to_string(halfspaces_[k].weights.size()) +
                            " weights, expected " +
                            std::to_string(items_.size()));
    }
  }
  if (!(setup_cost_ >= 0.0) || !std::isfinite(setup_cost_)) {
    throw InvalidInstance("setup cost must be nonnegative and finite");
  }
}

bool HalfspaceSystem::halfspace_value(
    int k, std::span<const std::uint8_t> realization) const {
  check_realization(size(), realization);
  const auto& h = halfspaces_[k];
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < realization.size(); ++i) {
    if (realization[i]) sum += h.weights[i];
  }
  return sum >= h.alpha;
}

bool HalfspaceSystem::value(std::span<const std::uint8_t> realization) const {
  std::vector<std::uint8_t> y(halfspaces_.size());
  for (int k = 0; k < dimension(); ++k) {
    y[k] = halfspace_value(k, realization) ? 1 : 0;
  }
  return aggregator_.evaluate(y);
}

HalfspaceRewards halfspace_rewards(const HalfspaceSystem& system, int k,
                                   double cost_scale) {
  if (k < 0 || k >= system.dimension()) {
    throw InvalidInstance("halfspace index out of range");
  }
  const Halfspace& h = system.halfspace(k);
  HalfspaceRewards out;
  std::int64_t negative = 0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const std::int64_t w = h.weights[i];
    const double p = system.item(i).prob;
    const double c = system.item(i).cost / cost_scale;
    const int id = static_cast<int>(i);
    const std::int64_t magnitude = w < 0 ? -w : w;
    out.total_weight += magnitude;
    if (w < 0) negative += magnitude;
    // R_{k,1} collects the working side of the shifted halfspace, R_{k,0}
    // the failing side; a negative item works for it when X_i = 0.
    const double q1 = w < 0 ? 1.0 - p : p;
    out.rewards[1].push_back({id, magnitude, q1, c});
    out.rewards[0].push_back({id, magnitude, 1.0 - q1, c});
  }
  out.shifted_alpha = h.alpha + negative;
  out.beta[1] = out.shifted_alpha;
  out.beta[0] = out.total_weight - out.shifted_alpha + 1;
  return out;
}

NonAdaptiveList build_list_exdshe(const HalfspaceSystem& system,
                                  const PolicyConfig& config) {
  const std::size_t n = system.size();
  const int d = system.dimension();
  const double scale = system.min_cost();
  std::vector<double> costs(n);
  for (std::size_t i = 0; i < n; ++i) costs[i] = system.item(i).cost / scale;
  std::vector<std::vector<RewardSpec<double>>> channels;
  channels.reserve(2 * d);
  for (int k = 0; k < d; ++k) {
    auto rewards = halfspace_rewards(system, k, scale);
    channels.push_back(std::move(rewards.rewards[0]));
    channels.push_back(std::move(rewards.rewards[1]));
  }
  const double epsilon = config.epsilon / d;
  return build_phased_list(costs, channels, epsilon,
                           effective_capital_c(config, epsilon), config.mode);
}

namespace {

// Contribution of item i to (R_{k,0}, R_{k,1}) given its outcome.
std::array<std::int64_t, 2> contribution(std::int64_t w, bool working) {
  const std::int64_t magnitude = w < 0 ? -w : w;
  const bool counts_as_one = (w < 0) ? !working : working;
  if (counts_as_one) return {0, magnitude};
  return {magnitude, 0};
}

std::array<std::int64_t, 2> thresholds(const Halfspace& h) {
  std::int64_t total = 0;
  std::int64_t negative = 0;
  for (auto w : h.weights) {
    total += w < 0 ? -w : w;
    if (w < 0) negative += -w;
  }
  const std::int64_t shifted = h.alpha + negative;
  return {total - shifted + 1, shifted};
}

}  // namespace

std::optional<bool> witness_value(const HalfspaceSystem& system,
                                  std::span<const int> probed,
                                  std::span<const std::uint8_t> values,
                                  std::span<const int> halfspaces) {
  if (probed.size() != values.size()) {
    throw InvalidInstance("witness values do not match the probed set");
  }
  std::vector<bool> seen(system.size(), false);
  for (int i : probed) {
    if (i < 0 || static_cast<std::size_t>(i) >= system.size() || seen[i]) {
      throw InvalidInstance("witness probed set contains an invalid item");
    }
    seen[i] = true;
  }
  const int d = system.dimension();
  std::vector<bool> in_t(d, false);
  for (int k : halfspaces) {
    if (k < 0 || k >= d) {
      throw InvalidInstance("witness halfspace " + std::to_string(k) +
                            " outside [0, d)");
    }
    in_t[k] = true;
  }
  std::vector<std::int8_t> partial(d, -1);
  for (int k = 0; k < d; ++k) {
    if (!in_t[k]) continue;
    const Halfspace& h = system.halfspace(k);
    std::array<std::int64_t, 2> gathered{0, 0};
    for (std::size_t s = 0; s < probed.size(); ++s) {
      const auto c = contribution(h.weights[probed[s]], values[s] != 0);
      gathered[0] += c[0];
      gathered[1] += c[1];
    }
    const auto beta = thresholds(h);
    if (gathered[1] >= beta[1]) {
      partial[k] = 1;
    } else if (gathered[0] >= beta[0]) {
      partial[k] = 0;
    } else {
      return std::nullopt;  // condition (i) fails for k
    }
  }
  return system.aggregator().forced(partial);
}

bool verify_witness(const HalfspaceSystem& system, std::span<const int> probed,
                    std::span<const std::uint8_t> values,
                    std::span<const int> halfspaces) {
  return witness_value(system, probed, values, halfspaces).has_value();
}

WitnessTracker::WitnessTracker(const HalfspaceSystem& system)
    : system_(&system),
      gathered_(system.dimension(), {0, 0}),
      known_(system.dimension(), -1) {
  beta_.reserve(system.dimension());
  for (int k = 0; k < system.dimension(); ++k) {
    beta_.push_back(thresholds(system.halfspace(k)));
    refresh(k);
  }
}

void WitnessTracker::refresh(int k) {
  if (known_[k] >= 0) return;
  if (gathered_[k][1] >= beta_[k][1]) {
    known_[k] = 1;
    dirty_ = true;
  } else if (gathered_[k][0] >= beta_[k][0]) {
    known_[k] = 0;
    dirty_ = true;
  }
}

void WitnessTracker::observe(std::size_t item, bool working) {
  for (int k = 0; k < system_->dimension(); ++k) {
    if (known_[k] >= 0) continue;
    const auto c = contribution(system_->halfspace(k).weights[item], working);
    gathered_[k][0] += c[0];
    gathered_[k][1] += c[1];
    refresh(k);
  }
}

std::optional<bool> WitnessTracker::decided() {
  if (dirty_) {
    decided_ = system_->aggregator().forced(known_);
    dirty_ = false;
  }
  return decided_;
}

std::vector<int> WitnessTracker::determined() const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(known_.size()); ++k) {
    if (known_[k] >= 0) out.push_back(k);
  }
  return out;
}

}  // namespace seqtest
