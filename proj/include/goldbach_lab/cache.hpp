#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "goldbach_lab/partitions.hpp"
#include "goldbach_lab/sieve.hpp"

namespace goldbach_lab {

// Both formats are little-endian and end with an FNV-1a 64 checksum of the
// payload bytes.
//
//   GBPF1: "GBPF1" | limit u64 | payload_len u64 | bit payload | checksum u64
//   GBQT1: "GBQT1" | n u64 | (n-2) x u32 counts | total u64 | checksum u64
//          (the checksum covers the counts and the total)
//
// Loaders throw CacheError on I/O failure, bad magic, truncation, checksum
// mismatch, or contents that violate the type's invariants.

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;

void save_prime_flags(const PrimeFlags& flags, const std::filesystem::path& path);
PrimeFlags load_prime_flags(const std::filesystem::path& path);

/// Throws CapacityError if some count does not fit in 32 bits.
void save_partition_table(const PartitionTable& table, const std::filesystem::path& path);
PartitionTable load_partition_table(const std::filesystem::path& path);

}  // namespace goldbach_lab
