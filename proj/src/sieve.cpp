#include "goldbach_lab/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "goldbach_lab/errors.hpp"
#include "parallel.hpp"

namespace goldbach_lab {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t slots_for(std::uint64_t limit) { return limit < 3 ? 0 : (limit - 1) / 2; }

std::uint64_t words_for(std::uint64_t slots) { return (slots + 63) / 64; }

// Odd primes up to `bound` by a plain sieve; bound is at most sqrt(limit).
std::vector<std::uint32_t> base_primes(std::uint64_t bound) {
  std::vector<std::uint32_t> primes;
  if (bound < 3) return primes;
  std::vector<char> composite(bound + 1, 0);
  for (std::uint64_t i = 3; i * i <= bound; i += 2)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= bound; j += 2 * i) composite[j] = 1;
  for (std::uint64_t i = 3; i <= bound; i += 2)
    if (!composite[i]) primes.push_back(static_cast<std::uint32_t>(i));
  return primes;
}

std::uint64_t count_bits(std::span<const std::uint64_t> words) {
  std::uint64_t c = 0;
  for (auto w : words) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

}  // namespace

PrimeFlags build_prime_flags(std::uint64_t limit, std::size_t segment_slots, unsigned workers) {
  if (limit < 2) throw std::invalid_argument("sieve limit must be >= 2, got " + std::to_string(limit));
  if (limit > kMaxSieveLimit) throw CapacityError("sieve limit " + std::to_string(limit) + " exceeds bitset capacity");
  if (segment_slots == 0) throw std::invalid_argument("segment size must be positive");
  if (workers == 0) throw std::invalid_argument("workers must be >= 1");

  PrimeFlags flags;
  flags.limit_ = limit;
  flags.slots_ = slots_for(limit);
  flags.words_.assign(words_for(flags.slots_), 0);
  if (flags.slots_ == 0) return flags;

  // Segments start on word boundaries so each one owns whole output words.
  const std::uint64_t seg = (static_cast<std::uint64_t>(segment_slots) + 63) / 64 * 64;
  const std::uint64_t n_segments = (flags.slots_ + seg - 1) / seg;
  const auto primes = base_primes(isqrt(limit));
  const std::uint64_t total_slots = flags.slots_;
  auto& words = flags.words_;

  detail::parallel_tasks(n_segments, workers, [&](std::size_t s) {
    const std::uint64_t lo = s * seg;
    const std::uint64_t hi = std::min(lo + seg, total_slots);  // exclusive
    std::vector<char> mark(hi - lo, 1);
    const std::uint64_t low_value = 2 * lo + 3;
    const std::uint64_t high_value = 2 * (hi - 1) + 3;
    for (std::uint64_t p : primes) {
      std::uint64_t first = p * p;
      if (first > high_value) break;
      if (first < low_value) {
        first = (low_value + p - 1) / p * p;
        if (first % 2 == 0) first += p;
      }
      for (std::uint64_t m = first; m <= high_value; m += 2 * p) mark[(m - 3) / 2 - lo] = 0;
    }
    for (std::uint64_t i = lo; i < hi; ++i)
      if (mark[i - lo]) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  });

  flags.prime_count_ = count_bits(flags.words_);
  return flags;
}

PrimeFlags PrimeFlags::from_words(std::uint64_t limit, std::vector<std::uint64_t> words) {
  if (limit < 2 || limit > kMaxSieveLimit) throw std::invalid_argument("limit out of range");
  PrimeFlags flags;
  flags.limit_ = limit;
  flags.slots_ = slots_for(limit);
  if (words.size() != words_for(flags.slots_))
    throw std::invalid_argument("word count does not match limit");
  if (const auto tail = flags.slots_ & 63; tail != 0 && (words.back() >> tail) != 0)
    throw std::invalid_argument("padding bits past the last slot are set");
  flags.words_ = std::move(words);
  flags.prime_count_ = count_bits(flags.words_);
  return flags;
}

bool PrimeFlags::is_odd_prime(std::uint64_t m) const {
  if (m > limit_)
    throw std::out_of_range(std::to_string(m) + " exceeds sieve limit " + std::to_string(limit_));
  if (m < 3 || m % 2 == 0) return false;
  return test_slot((m - 3) / 2);
}

std::uint64_t odd_prime_count_upto(const PrimeFlags& flags, std::uint64_t x) {
  if (x > flags.limit())
    throw std::out_of_range(std::to_string(x) + " exceeds sieve limit " + std::to_string(flags.limit()));
  if (x < 3) return 0;
  const std::uint64_t slots = (x - 1) / 2;  // slots 0..slots-1 cover 3..x
  const auto words = flags.words();
  const std::uint64_t full = slots / 64;
  std::uint64_t c = count_bits(words.first(full));
  if (const auto rem = slots & 63; rem != 0)
    c += static_cast<std::uint64_t>(std::popcount(words[full] & ((std::uint64_t{1} << rem) - 1)));
  return c;
}

}  // namespace goldbach_lab
