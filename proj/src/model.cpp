#include "goldbach_lab/model.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "goldbach_lab/errors.hpp"

namespace goldbach_lab {

namespace detail {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace detail

KeyedDistribution::KeyedDistribution(std::string name, std::uint64_t n, std::vector<KeyedEntry> entries)
    : name_(std::move(name)), n_(n), entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument(name_ + ": distribution has no entries");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(entries_.size());
  detail::CompensatedSum mass;
  for (const auto& e : entries_) {
    if (e.key <= 2 || e.key > n_) throw std::invalid_argument(fmt::format("{}: key {} outside (2, {}]", name_, e.key, n_));
    if (!seen.insert(e.key).second) throw std::invalid_argument(fmt::format("{}: duplicate key {}", name_, e.key));
    if (!std::isfinite(e.value) || e.value < 0) throw std::invalid_argument(fmt::format("{}: bad value {} at key {}", name_, e.value, e.key));
    if (!std::isfinite(e.prob) || e.prob < 0) throw std::invalid_argument(fmt::format("{}: bad probability {} at key {}", name_, e.prob, e.key));
    mass.add(e.prob);
  }
  if (std::abs(mass.value() - 1.0) > 1e-12)
    throw std::invalid_argument(fmt::format("{}: probabilities sum to {}", name_, mass.value()));
}

ScalingConstant scaling_constant(std::uint64_t n) {
  if (n <= 2) throw std::invalid_argument(fmt::format("scaling constant needs n > 2, got {}", n));
  const double half_log = 0.5 * std::log(static_cast<double>(n));
  return {n, static_cast<double>(n) / (half_log * half_log)};
}

KeyedDistribution dist_Yn(const PartitionTable& table) {
  const std::uint64_t n = table.n();
  const double p = 1.0 / static_cast<double>(n - 2);
  std::vector<KeyedEntry> entries;
  entries.reserve(n - 2);
  for (std::uint64_t k = 3; k <= n; ++k) entries.push_back({k, static_cast<double>(table.q(k)), p});
  return {"Yn", n, std::move(entries)};
}

KeyedDistribution dist_Gn(const PartitionTable& table) {
  if (table.total() == 0) throw DegenerateDistributionError("G_n undefined: no Goldbach partitions");
  const std::uint64_t n = table.n();
  const double total = static_cast<double>(table.total());
  std::vector<KeyedEntry> entries;
  entries.reserve(n - 2);
  for (std::uint64_t k = 3; k <= n; ++k)
    entries.push_back({k, static_cast<double>(2 * k), static_cast<double>(table.q(k)) / total});
  return {"Gn", n, std::move(entries)};
}

KeyedDistribution dist_Gn_over_n(const PartitionTable& table) {
  auto g = dist_Gn(table);
  std::vector<KeyedEntry> entries(g.entries().begin(), g.entries().end());
  const double scale = static_cast<double>(table.n());
  for (auto& e : entries) e.value = static_cast<double>(e.key) / scale;
  return {"Gn_over_n", table.n(), std::move(entries)};
}

KeyedDistribution dist_Xn(std::uint64_t n) {
  if (n <= 2) throw std::invalid_argument(fmt::format("X_n needs n > 2, got {}", n));
  const double p = 1.0 / static_cast<double>(n - 2);
  const double scale = static_cast<double>(n);
  std::vector<KeyedEntry> entries;
  entries.reserve(n - 2);
  for (std::uint64_t k = 3; k <= n; ++k) entries.push_back({k, static_cast<double>(k) / scale, p});
  return {"Xn", n, std::move(entries)};
}

KeyedDistribution dist_Zn(const PartitionTable& table) {
  const double b = scaling_constant(table.n()).b_n;
  auto y = dist_Yn(table);
  std::vector<KeyedEntry> entries(y.entries().begin(), y.entries().end());
  for (auto& e : entries) e.value /= b;
  return {"Zn", table.n(), std::move(entries)};
}

double expected_value(const KeyedDistribution& dist) {
  detail::CompensatedSum s;
  for (const auto& e : dist.entries()) s.add(e.value * e.prob);
  return s.value();
}

KeyedDistribution size_bias(const KeyedDistribution& dist) {
  for (const auto& e : dist.entries())
    if (e.value < 0) throw std::invalid_argument(fmt::format("size_bias: negative value at key {}", e.key));
  const double mu = expected_value(dist);
  if (!(mu > 0)) throw DegenerateDistributionError("size_bias: mean is zero");
  std::vector<KeyedEntry> entries(dist.entries().begin(), dist.entries().end());
  for (auto& e : entries) e.prob = e.value * e.prob / mu;
  return {dist.name() + "*", dist.n(), std::move(entries)};
}

std::string to_csv(const KeyedDistribution& dist) {
  std::string out = fmt::format("# name={}\n# n={}\nk,value,prob\n", dist.name(), dist.n());
  for (const auto& e : dist.entries()) out += fmt::format("{},{},{}\n", e.key, e.value, e.prob);
  return out;
}

std::string to_json(const KeyedDistribution& dist) {
  nlohmann::ordered_json j;
  j["name"] = dist.name();
  j["n"] = dist.n();
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : dist.entries()) arr.push_back({{"k", e.key}, {"value", e.value}, {"prob", e.prob}});
  return j.dump(2) + "\n";
}

}  // namespace goldbach_lab
