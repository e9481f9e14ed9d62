#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goldbach_lab/partitions.hpp"

namespace goldbach_lab {

struct KeyedEntry {
  std::uint64_t key;  // k in (2, n]
  double value;
  double prob;

  friend bool operator==(const KeyedEntry&, const KeyedEntry&) = default;
};

/// Finite distribution whose outcomes are labelled by k.
///
/// Outcomes are never merged by value: two keys with the same value stay
/// separate entries, which is what lets a size-biased Y_n be compared with
/// G_n key by key.
class KeyedDistribution {
 public:
  /// Validates the invariants: keys distinct and in (2, n], values finite
  /// and >= 0, probabilities >= 0 summing to 1 within 1e-12.
  /// Throws std::invalid_argument on violation.
  KeyedDistribution(std::string name, std::uint64_t n, std::vector<KeyedEntry> entries);

  const std::string& name() const noexcept { return name_; }
  std::uint64_t n() const noexcept { return n_; }
  std::span<const KeyedEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::string name_;
  std::uint64_t n_;
  std::vector<KeyedEntry> entries_;
};

/// b_n = n / (ln(n) / 2)^2 = 4n / ln^2 n, natural logarithm.
struct ScalingConstant {
  std::uint64_t n;
  double b_n;
};

/// Throws std::invalid_argument for n <= 2.
ScalingConstant scaling_constant(std::uint64_t n);

/// Y_n: value Q(2k), probability 1/(n-2) per k.
KeyedDistribution dist_Yn(const PartitionTable& table);

/// G_n: value 2k, probability Q(2k)/total. Zero-count keys are kept with
/// probability 0. Throws DegenerateDistributionError if total is 0.
KeyedDistribution dist_Gn(const PartitionTable& table);

/// X_n: value k/n, probability 1/(n-2). Throws std::invalid_argument for n <= 2.
KeyedDistribution dist_Xn(std::uint64_t n);

/// Z_n = Y_n / b_n.
KeyedDistribution dist_Zn(const PartitionTable& table);

/// G_n on the unit scale: value k/n, probability Q(2k)/total.
/// Throws DegenerateDistributionError if total is 0.
KeyedDistribution dist_Gn_over_n(const PartitionTable& table);

/// Reweights each entry by value/mean; values and keys are unchanged.
/// Throws std::invalid_argument on a negative value and
/// DegenerateDistributionError on zero mean.
KeyedDistribution size_bias(const KeyedDistribution& dist);

/// Sum of value * prob (compensated summation).
double expected_value(const KeyedDistribution& dist);

/// CSV with `# name=...` and `# n=...` header lines, then k,value,prob.
std::string to_csv(const KeyedDistribution& dist);

/// {"name": ..., "n": ..., "entries": [{"k", "value", "prob"}, ...]}
std::string to_json(const KeyedDistribution& dist);

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace detail

}  // namespace goldbach_lab
