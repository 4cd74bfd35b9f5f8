#include "seqtest/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace seqtest {

ClassPartition::ClassPartition(std::vector<std::int64_t> alphas,
                               std::int64_t total_weight)
    : alphas_(std::move(alphas)), total_weight_(total_weight) {
  if (total_weight_ < 0) {
    throw InvalidInstance("total weight must be nonnegative");
  }
  if (alphas_.size() < 2) {
    throw InvalidInstance("need at least two class boundaries");
  }
  for (std::size_t j = 1; j < alphas_.size(); ++j) {
    if (alphas_[j] <= alphas_[j - 1]) {
      throw InvalidInstance("class boundaries must be strictly increasing");
    }
  }
  if (alphas_.front() > 0) {
    throw InvalidInstance("first class boundary " +
                          std::to_string(alphas_.front()) +
                          " leaves score 0 unclassified");
  }
  if (alphas_.back() < total_weight_) {
    throw InvalidInstance("last class boundary " +
                          std::to_string(alphas_.back()) +
                          " is below the total weight " +
                          std::to_string(total_weight_));
  }
  alphas_.front() = 0;
  alphas_.back() = total_weight_ + 1;
  if (alphas_[1] <= 0 || alphas_[alphas_.size() - 2] > total_weight_) {
    throw InvalidInstance("class boundaries leave an empty outer class");
  }
}

int ClassPartition::class_of(std::int64_t score) const {
  score = std::clamp<std::int64_t>(score, 0, total_weight_);
  auto it = std::upper_bound(alphas_.begin(), alphas_.end(), score);
  return static_cast<int>(it - alphas_.begin()) - 1;
}

SscInstance::SscInstance(std::vector<Item> items,
                         std::vector<std::int64_t> alphas, double setup_cost)
    : items_(std::move(items)), setup_cost_(setup_cost) {
  std::int64_t total = 0;
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
    if (it.weight < 0) {
      throw InvalidInstance("item " + std::to_string(i) +
                            ": negative weight (use reduce_negative_weights)");
    }
    total += it.weight;
    min_cost_ = std::min(min_cost_, it.cost);
  }
  if (items_.empty()) min_cost_ = 1.0;
  if (!(setup_cost_ >= 0.0) || !std::isfinite(setup_cost_)) {
    throw InvalidInstance("setup cost must be nonnegative and finite");
  }
  classes_ = ClassPartition(std::move(alphas), total);
}

SscInstance SscInstance::with_alphas(std::vector<std::int64_t> alphas) const {
  SscInstance copy = *this;
  copy.classes_ = ClassPartition(std::move(alphas), total_weight());
  return copy;
}

Realization Reduction::map(std::span<const std::uint8_t> original) const {
  check_realization(flipped.size(), original);
  Realization out(original.begin(), original.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (flipped[i]) out[i] = static_cast<std::uint8_t>(1 - out[i]);
  }
  return out;
}

Reduction reduce_negative_weights(std::span<const Item> raw_items,
                                  std::span<const std::int64_t> raw_alphas,
                                  double setup_cost) {
  for (std::size_t j = 1; j < raw_alphas.size(); ++j) {
    if (raw_alphas[j] <= raw_alphas[j - 1]) {
      throw InvalidInstance("class boundaries must be strictly increasing");
    }
  }
  Reduction out;
  out.flipped.assign(raw_items.size(), false);
  std::vector<Item> items(raw_items.begin(), raw_items.end());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].weight < 0) {
      out.flipped[i] = true;
      out.offset += -items[i].weight;
      items[i].weight = -items[i].weight;
      items[i].prob = 1.0 - items[i].prob;
    }
  }
  std::vector<std::int64_t> alphas(raw_alphas.begin(), raw_alphas.end());
  for (auto& a : alphas) a += out.offset;
  out.instance = SscInstance(std::move(items), std::move(alphas), setup_cost);
  return out;
}

void check_realization(std::size_t n,
                       std::span<const std::uint8_t> realization) {
  if (realization.size() != n) {
    throw InvalidInstance("realization has " +
                          std::to_string(realization.size()) +
                          " entries, expected " + std::to_string(n));
  }
}

std::int64_t score(const SscInstance& instance,
                   std::span<const std::uint8_t> realization) {
  check_realization(instance.size(), realization);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < realization.size(); ++i) {
    if (realization[i]) s += instance.item(i).weight;
  }
  return s;
}

int classify(const SscInstance& instance,
             std::span<const std::uint8_t> realization) {
  return instance.classes().class_of(score(instance, realization));
}

std::optional<int> stopping_check(const SscInstance& instance,
                                  const ProbeState& state) {
  const ClassPartition& classes = instance.classes();
  const int low = classes.class_of(state.s1);
  const int high = classes.class_of(classes.total_weight() - state.s0);
  if (low == high) return low;
  return std::nullopt;
}

}  // namespace seqtest
