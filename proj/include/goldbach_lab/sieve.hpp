#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace goldbach_lab {

/// Odd slots per sieve segment (rounded up to a multiple of 64 internally).
inline constexpr std::size_t kDefaultSegmentSlots = std::size_t{1} << 18;

/// Largest limit accepted by build_prime_flags (2^40, a 64 GiB bitset).
inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 40;

/// Odd-prime indicator over [3, limit].
///
/// Bit i of the packed words stands for the odd integer 2i + 3. Bits past
/// slot_count() in the last word are always zero, so whole-word popcounts
/// over the storage are exact. Immutable after construction.
class PrimeFlags {
 public:
  PrimeFlags() = default;

  /// Adopts packed words for `limit`; validates padding and recounts primes.
  /// Throws std::invalid_argument if the word count or padding bits do not
  /// match the limit.
  static PrimeFlags from_words(std::uint64_t limit, std::vector<std::uint64_t> words);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t prime_count() const noexcept { return prime_count_; }

  /// Number of odd integers in [3, limit].
  std::uint64_t slot_count() const noexcept { return slots_; }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test_slot(std::uint64_t slot) const noexcept {
    return (words_[slot >> 6] >> (slot & 63)) & 1u;
  }

  /// True iff m is an odd prime. Even m (including 2) is always false.
  /// Throws std::out_of_range for m > limit().
  bool is_odd_prime(std::uint64_t m) const;

  friend bool operator==(const PrimeFlags&, const PrimeFlags&) = default;

 private:
  std::uint64_t limit_ = 2;
  std::uint64_t slots_ = 0;
  std::uint64_t prime_count_ = 0;
  std::vector<std::uint64_t> words_;

  friend PrimeFlags build_prime_flags(std::uint64_t, std::size_t, unsigned);
};

/// Segmented sieve of Eratosthenes over odd integers up to `limit`.
///
/// Working memory beyond the output is one byte per slot of a single
/// segment per worker plus the base primes up to sqrt(limit). The result is
/// independent of both `segment_slots` and `workers`.
///
/// Throws std::invalid_argument for limit < 2 or segment_slots == 0, and
/// CapacityError for limit > kMaxSieveLimit.
PrimeFlags build_prime_flags(std::uint64_t limit,
                             std::size_t segment_slots = kDefaultSegmentSlots,
                             unsigned workers = 1);

inline bool is_odd_prime(const PrimeFlags& flags, std::uint64_t m) {
  return flags.is_odd_prime(m);
}

/// Number of odd primes <= x (x <= flags.limit()).
std::uint64_t odd_prime_count_upto(const PrimeFlags& flags, std::uint64_t x);

}  // namespace goldbach_lab
