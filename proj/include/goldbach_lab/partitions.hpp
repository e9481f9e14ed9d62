#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "goldbach_lab/sieve.hpp"

namespace goldbach_lab {

/// Exact Goldbach-partition counts Q(2k) for k = 3..n and their sum.
///
/// k, not 2k, is the index everywhere.
class PartitionTable {
 public:
  /// `counts[i]` is Q(2(i + 3)); must hold exactly n - 2 entries.
  /// Throws std::invalid_argument if n <= 2 or the size is wrong.
  PartitionTable(std::uint64_t n, std::vector<std::uint64_t> counts);

  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t total() const noexcept { return total_; }

  /// Q(2k) for 3 <= k <= n; throws std::out_of_range otherwise.
  std::uint64_t q(std::uint64_t k) const;

  /// Counts in k order, starting at k = 3.
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  /// Table for a smaller scale m (2 < m <= n); Q(2k) does not depend on n.
  PartitionTable prefix(std::uint64_t m) const;

  friend bool operator==(const PartitionTable&, const PartitionTable&) = default;

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_;
};

/// Number of unordered odd-prime pairs p <= q with p + q = two_k, by a
/// direct scan of odd p in [3, two_k / 2].
/// Throws std::invalid_argument if two_k is odd, <= 4, or > flags.limit().
std::uint64_t count_partitions(const PrimeFlags& flags, std::uint64_t two_k);

/// Q(2k) for every k in [3, n].
///
/// Each k is a half-range scan done 64 candidates at a time: the prime bits
/// for p are ANDed against a reversed copy of the bitset aligned on 2k - p.
/// k-ranges are distributed over `workers` threads; output does not depend
/// on the worker count. Throws std::invalid_argument if n <= 2,
/// flags.limit() < 2n, or workers == 0.
PartitionTable build_partition_table(const PrimeFlags& flags, std::uint64_t n,
                                     unsigned workers = 1);

inline std::uint64_t total_partitions(const PartitionTable& table) noexcept {
  return table.total();
}

/// All k in (2, n] with Q(2k) = 0, ascending.
std::vector<std::uint64_t> zero_partition_census(const PartitionTable& table);

}  // namespace goldbach_lab
