#include "goldbach_lab/partitions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace goldbach_lab {

PartitionTable::PartitionTable(std::uint64_t n, std::vector<std::uint64_t> counts)
    : n_(n), counts_(std::move(counts)), total_(0) {
  if (n_ <= 2) throw std::invalid_argument("partition table needs n > 2, got " + std::to_string(n_));
  if (counts_.size() != n_ - 2)
    throw std::invalid_argument("partition table for n=" + std::to_string(n_) + " needs " +
                                std::to_string(n_ - 2) + " counts, got " +
                                std::to_string(counts_.size()));
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t PartitionTable::q(std::uint64_t k) const {
  if (k < 3 || k > n_) throw std::out_of_range("k=" + std::to_string(k) + " outside [3, " + std::to_string(n_) + "]");
  return counts_[k - 3];
}

PartitionTable PartitionTable::prefix(std::uint64_t m) const {
  if (m <= 2 || m > n_) throw std::invalid_argument("prefix scale must lie in (2, " + std::to_string(n_) + "]");
  return PartitionTable(m, {counts_.begin(), counts_.begin() + static_cast<std::ptrdiff_t>(m - 2)});
}

std::uint64_t count_partitions(const PrimeFlags& flags, std::uint64_t two_k) {
  if (two_k % 2 != 0 || two_k <= 4 || two_k > flags.limit())
    throw std::invalid_argument("count_partitions needs an even 4 < 2k <= " +
                                std::to_string(flags.limit()) + ", got " + std::to_string(two_k));
  std::uint64_t count = 0;
  for (std::uint64_t p = 3; p <= two_k / 2; p += 2)
    if (flags.is_odd_prime(p) && flags.is_odd_prime(two_k - p)) ++count;
  return count;
}

namespace {

// Bit t of the result is bit (slots - 1 - t) of the source. Two zero words of
// padding let unaligned 64-bit reads run past the end.
std::vector<std::uint64_t> reversed_bits(const PrimeFlags& flags) {
  const std::uint64_t slots = flags.slot_count();
  std::vector<std::uint64_t> out((slots + 63) / 64 + 2, 0);
  for (std::uint64_t t = 0; t < slots; ++t)
    if (flags.test_slot(slots - 1 - t)) out[t >> 6] |= std::uint64_t{1} << (t & 63);
  return out;
}

// With p = 2i + 3, the partner 2k - p sits in slot k - 3 - i, which is bit
// i + (slots + 2 - k) of the reversed copy. So Q(2k) is the popcount of
// forward[0..m] & reversed[off..off+m] where m = (k - 3) / 2 keeps p <= k.
std::uint64_t scan_one(const std::uint64_t* forward, const std::uint64_t* reversed,
                       std::uint64_t slots, std::uint64_t k) {
  const std::uint64_t n_bits = (k - 3) / 2 + 1;
  const std::uint64_t off = slots + 2 - k;
  const std::uint64_t full = n_bits / 64;
  const std::uint64_t* r = reversed + off / 64;
  const unsigned shift = off & 63;
  std::uint64_t count = 0;
  std::uint64_t w = 0;
  if (shift == 0) {
    for (; w < full; ++w) count += std::popcount(forward[w] & r[w]);
  } else {
    for (; w < full; ++w)
      count += std::popcount(forward[w] & ((r[w] >> shift) | (r[w + 1] << (64 - shift))));
  }
  if (const auto rem = n_bits & 63; rem != 0) {
    const std::uint64_t rw = shift == 0 ? r[w] : (r[w] >> shift) | (r[w + 1] << (64 - shift));
    count += std::popcount(forward[w] & rw & ((std::uint64_t{1} << rem) - 1));
  }
  return count;
}

}  // namespace

PartitionTable build_partition_table(const PrimeFlags& flags, std::uint64_t n, unsigned workers) {
  if (n <= 2) throw std::invalid_argument("partition table needs n > 2, got " + std::to_string(n));
  if (workers == 0) throw std::invalid_argument("workers must be >= 1");
  if (flags.limit() / 2 < n)
    throw std::invalid_argument("sieve limit " + std::to_string(flags.limit()) +
                                " is below 2n = " + std::to_string(2 * n));

  const auto reversed = reversed_bits(flags);
  const std::uint64_t* forward = flags.words().data();
  const std::uint64_t slots = flags.slot_count();
  std::vector<std::uint64_t> counts(n - 2, 0);

  // Work per k grows linearly, so chunk boundaries follow n * sqrt(j / tasks)
  // to give chunks of roughly equal cost.
  const std::size_t tasks = workers == 1 ? 1 : std::size_t{64} * workers;
  std::vector<std::uint64_t> bounds(tasks + 1);
  bounds[0] = 3;
  for (std::size_t j = 1; j < tasks; ++j) {
    const auto b = static_cast<std::uint64_t>(
        static_cast<double>(n) * std::sqrt(static_cast<double>(j) / static_cast<double>(tasks)));
    bounds[j] = std::clamp(b, bounds[j - 1], n + 1);
  }
  bounds[tasks] = n + 1;

  detail::parallel_tasks(tasks, workers, [&](std::size_t j) {
    for (std::uint64_t k = bounds[j]; k < bounds[j + 1]; ++k)
      counts[k - 3] = scan_one(forward, reversed.data(), slots, k);
  });

  return PartitionTable(n, std::move(counts));
}

std::vector<std::uint64_t> zero_partition_census(const PartitionTable& table) {
  std::vector<std::uint64_t> ks;
  const auto counts = table.counts();
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] == 0) ks.push_back(i + 3);
  return ks;
}

}  // namespace goldbach_lab
