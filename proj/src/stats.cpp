#include "goldbach_lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace goldbach_lab {

double StepCdf::operator()(double x) const {
  const auto it = std::upper_bound(points.begin(), points.end(), x);
  if (it == points.begin()) return 0.0;
  return masses[static_cast<std::size_t>(it - points.begin()) - 1];
}

double evaluate(LimitCdf limit, double x) noexcept {
  const double c = std::clamp(x, 0.0, 1.0);
  switch (limit) {
    case LimitCdf::Uniform01:
      return c;
    case LimitCdf::MaxOfTwoUniforms:
      return c * c;
  }
  return c;
}

StepCdf exact_cdf(const KeyedDistribution& dist) {
  std::vector<std::pair<double, double>> mass;
  mass.reserve(dist.size());
  for (const auto& e : dist.entries()) mass.emplace_back(e.value, e.prob);
  std::sort(mass.begin(), mass.end());

  StepCdf cdf;
  detail::CompensatedSum running;
  for (std::size_t i = 0; i < mass.size();) {
    const double x = mass[i].first;
    for (; i < mass.size() && mass[i].first == x; ++i) running.add(mass[i].second);
    cdf.points.push_back(x);
    cdf.masses.push_back(std::min(running.value(), 1.0));
  }
  return cdf;
}

double ks_distance(const StepCdf& cdf, LimitCdf limit) {
  double sup = 0.0;
  double before = 0.0;
  for (std::size_t j = 0; j < cdf.points.size(); ++j) {
    const double l = evaluate(limit, cdf.points[j]);
    sup = std::max({sup, std::abs(before - l), std::abs(cdf.masses[j] - l)});
    before = cdf.masses[j];
  }
  return std::min(sup, 1.0);
}

double moment(const KeyedDistribution& dist, int r) {
  if (r < 1) throw std::invalid_argument(fmt::format("moment order must be >= 1, got {}", r));
  detail::CompensatedSum s;
  for (const auto& e : dist.entries()) s.add(e.prob * std::pow(e.value, r));
  return s.value();
}

std::vector<double> sample(const KeyedDistribution& dist, std::uint64_t seed, std::size_t count) {
  const auto entries = dist.entries();
  std::vector<double> cumulative;
  cumulative.reserve(entries.size());
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    running += entries[i].prob;
    cumulative.push_back(running);
    if (entries[i].prob > 0) last_positive = i;
  }

  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53 * running;
    auto idx = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    out.push_back(entries[std::min(idx, last_positive)].value);
  }
  return out;
}

ConvergenceRecord convergence_record(const PartitionTable& table) {
  const auto z = dist_Zn(table);
  const auto g = dist_Gn_over_n(table);
  const auto x = dist_Xn(table.n());

  ConvergenceRecord rec{};
  rec.n = table.n();
  rec.ks_Zn_uniform = ks_distance(exact_cdf(z), LimitCdf::Uniform01);
  rec.ks_Gn_over_n_max_uniform = ks_distance(exact_cdf(g), LimitCdf::MaxOfTwoUniforms);
  rec.mean_Zn = expected_value(z);
  for (int r = 1; r <= kMomentOrders; ++r)
    rec.moment_gaps[static_cast<std::size_t>(r - 1)] = std::abs(moment(g, r) - 2.0 / (r + 2));
  for (double s : {0.5, 1.0, 5.0}) {
    rec.laplace_Xn_gap = std::max(rec.laplace_Xn_gap, std::abs(laplace(x, s) - phi(s)));
    rec.laplace_Gn_gap = std::max(rec.laplace_Gn_gap, std::abs(laplace(g, s) - laplace_U(s)));
  }
  rec.zero_count = zero_partition_census(table).size();
  return rec;
}

ConvergenceReport convergence_report(const PartitionTable& table, std::span<const std::uint64_t> n_list) {
  if (n_list.size() < 2) throw std::invalid_argument("convergence report needs at least two scales");
  if (n_list.back() > table.n()) throw std::invalid_argument("largest scale exceeds the table");
  std::vector<PartitionTable> tables;
  tables.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw std::invalid_argument("scales must be strictly increasing");
    tables.push_back(table.prefix(n_list[i]));
  }
  ConvergenceReport report;
  for (const auto& t : tables) report.records.push_back(convergence_record(t));
  report.ratios = asymptotic_ratios(tables);
  return report;
}

std::string to_csv(const ConvergenceReport& report) {
  std::string out =
      "n,ks_Zn_uniform,ks_Gn_over_n_max_uniform,mean_Zn,moment_gap_r1,moment_gap_r2,moment_gap_r3,"
      "laplace_Xn_gap,laplace_Gn_gap,zero_count,total_ratio,mean_ratio\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const auto& a = report.ratios[i];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.n, r.ks_Zn_uniform, r.ks_Gn_over_n_max_uniform,
                       r.mean_Zn, r.moment_gaps[0], r.moment_gaps[1], r.moment_gaps[2], r.laplace_Xn_gap,
                       r.laplace_Gn_gap, r.zero_count, a.total_ratio, a.mean_ratio);
  }
  return out;
}

std::string to_json(const ConvergenceReport& report) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const auto& a = report.ratios[i];
    arr.push_back({{"n", r.n},
                   {"ks_Zn_uniform", r.ks_Zn_uniform},
                   {"ks_Gn_over_n_max_uniform", r.ks_Gn_over_n_max_uniform},
                   {"mean_Zn", r.mean_Zn},
                   {"moment_gaps", r.moment_gaps},
                   {"laplace_Xn_gap", r.laplace_Xn_gap},
                   {"laplace_Gn_gap", r.laplace_Gn_gap},
                   {"zero_count", r.zero_count},
                   {"total_ratio", a.total_ratio},
                   {"mean_ratio", a.mean_ratio}});
  }
  return arr.dump(2) + "\n";
}

std::string cdf_overlay(const StepCdf& cdf, LimitCdf limit) {
  std::string out = "# x F_n(x) L(x)\n";
  for (std::size_t j = 0; j < cdf.points.size(); ++j)
    out += fmt::format("{} {} {}\n", cdf.points[j], cdf.masses[j], evaluate(limit, cdf.points[j]));
  return out;
}

}  // namespace goldbach_lab
