#include "goldbach_lab/cache.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "goldbach_lab/errors.hpp"

namespace goldbach_lab {
namespace {

constexpr std::string_view kFlagsMagic = "GBPF1";
constexpr std::string_view kTableMagic = "GBQT1";

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  Reader(std::vector<std::uint8_t> bytes, const std::filesystem::path& path)
      : bytes_(std::move(bytes)), path_(path) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) fail("truncated file");
    auto s = std::span<const std::uint8_t>(bytes_).subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::uint64_t u64() { return le<std::uint64_t>(take(8)); }

  void expect_magic(std::string_view magic) {
    const auto m = take(magic.size());
    if (!std::equal(m.begin(), m.end(), magic.begin())) fail("bad magic");
  }

  void expect_end() {
    if (pos_ != bytes_.size()) fail("trailing bytes");
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw CacheError(fmt::format("{}: {}", path_.string(), what));
  }

  template <class T>
  static T le(std::span<const std::uint8_t> b) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
    return v;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  const std::filesystem::path& path_;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError(fmt::format("{}: cannot open for reading", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw CacheError(fmt::format("{}: read failed", path.string()));
  return bytes;
}

// Writes next to the target and renames, so a failed write never leaves a
// truncated cache behind.
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError(fmt::format("{}: cannot open for writing", tmp.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CacheError(fmt::format("{}: write failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError(fmt::format("{}: rename failed: {}", path.string(), ec.message()));
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_prime_flags(const PrimeFlags& flags, const std::filesystem::path& path) {
  const std::uint64_t payload_len = (flags.slot_count() + 7) / 8;
  std::vector<std::uint8_t> payload;
  payload.reserve(payload_len);
  for (auto w : flags.words()) put_le(payload, w);
  payload.resize(payload_len);  // padding bytes beyond the last slot are zero

  std::vector<std::uint8_t> out(kFlagsMagic.begin(), kFlagsMagic.end());
  put_le(out, flags.limit());
  put_le(out, payload_len);
  out.insert(out.end(), payload.begin(), payload.end());
  put_le(out, fnv1a64(payload));
  write_file(path, out);
}

PrimeFlags load_prime_flags(const std::filesystem::path& path) {
  Reader r(read_file(path), path);
  r.expect_magic(kFlagsMagic);
  const std::uint64_t limit = r.u64();
  const std::uint64_t payload_len = r.u64();
  if (limit < 2 || limit > kMaxSieveLimit) r.fail("limit out of range");
  const std::uint64_t slots = limit < 3 ? 0 : (limit - 1) / 2;
  if (payload_len != (slots + 7) / 8) r.fail("payload length does not match limit");
  const auto payload = r.take(payload_len);
  if (r.u64() != fnv1a64(payload)) r.fail("checksum mismatch");
  r.expect_end();

  std::vector<std::uint64_t> words((slots + 63) / 64, 0);
  for (std::size_t i = 0; i < payload.size(); ++i)
    words[i / 8] |= static_cast<std::uint64_t>(payload[i]) << (8 * (i % 8));
  try {
    return PrimeFlags::from_words(limit, std::move(words));
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
}

void save_partition_table(const PartitionTable& table, const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload;
  payload.reserve(4 * table.counts().size() + 8);
  for (auto q : table.counts()) {
    if (q > std::numeric_limits<std::uint32_t>::max()) throw CapacityError("partition count exceeds 32 bits");
    put_le(payload, static_cast<std::uint32_t>(q));
  }
  put_le(payload, table.total());

  std::vector<std::uint8_t> out(kTableMagic.begin(), kTableMagic.end());
  put_le(out, table.n());
  out.insert(out.end(), payload.begin(), payload.end());
  put_le(out, fnv1a64(payload));
  write_file(path, out);
}

PartitionTable load_partition_table(const std::filesystem::path& path) {
  Reader r(read_file(path), path);
  r.expect_magic(kTableMagic);
  const std::uint64_t n = r.u64();
  if (n <= 2 || n > kMaxSieveLimit / 2) r.fail("n out of range");
  const auto payload = r.take(4 * (n - 2) + 8);
  if (r.u64() != fnv1a64(payload)) r.fail("checksum mismatch");
  r.expect_end();

  std::vector<std::uint64_t> counts(n - 2);
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = Reader::le<std::uint32_t>(payload.subspan(4 * i, 4));
  const auto total = Reader::le<std::uint64_t>(payload.subspan(4 * (n - 2), 8));
  PartitionTable table(n, std::move(counts));
  if (table.total() != total) r.fail("stored total does not match counts");
  return table;
}

}  // namespace goldbach_lab
