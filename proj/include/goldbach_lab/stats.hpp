#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "goldbach_lab/limits.hpp"
#include "goldbach_lab/model.hpp"

namespace goldbach_lab {

/// Exact CDF of a finite distribution: strictly increasing jump points and
/// the cumulative mass reached at each.
struct StepCdf {
  std::vector<double> points;
  std::vector<double> masses;

  /// F(x), right-continuous.
  double operator()(double x) const;
};

enum class LimitCdf {
  Uniform01,         // clamp(x, 0, 1)
  MaxOfTwoUniforms,  // clamp(x, 0, 1)^2, density 2x on (0, 1)
};

double evaluate(LimitCdf limit, double x) noexcept;

/// Builds the CDF from the exact pmf, merging entries with equal values.
StepCdf exact_cdf(const KeyedDistribution& dist);

/// sup_x |F(x) - L(x)| for a continuous L: both one-sided gaps are checked at
/// every jump, which is where the supremum is attained.
double ks_distance(const StepCdf& cdf, LimitCdf limit);

/// sum prob * value^r. Throws std::invalid_argument for r < 1.
double moment(const KeyedDistribution& dist, int r);

/// Inverse-CDF draws over the exact pmf in key order. The stream is a
/// function of the seed alone (mt19937_64, 53-bit uniforms).
std::vector<double> sample(const KeyedDistribution& dist, std::uint64_t seed,
                           std::size_t count);

inline constexpr int kMomentOrders = 3;

struct ConvergenceRecord {
  std::uint64_t n;
  double ks_Zn_uniform;
  double ks_Gn_over_n_max_uniform;
  double mean_Zn;
  std::array<double, kMomentOrders> moment_gaps;  // |E (G_n/n)^r - 2/(r+2)|, r = 1..3
  double laplace_Xn_gap;  // max over s in {0.5, 1, 5} of |E e^{-s X_n} - phi(s)|
  double laplace_Gn_gap;  // same for G_n/n against laplace_U
  std::uint64_t zero_count;
};

ConvergenceRecord convergence_record(const PartitionTable& table);

struct ConvergenceReport {
  std::vector<ConvergenceRecord> records;
  std::vector<AsymptoticRatio> ratios;
};

/// Rows for every n in `n_list` computed from prefixes of `table`
/// (n_list strictly increasing, >= 2 entries, last <= table.n()).
ConvergenceReport convergence_report(const PartitionTable& table,
                                     std::span<const std::uint64_t> n_list);

std::string to_csv(const ConvergenceReport& report);
std::string to_json(const ConvergenceReport& report);

/// Whitespace-separated "x F_n(x) L(x)" lines, one per jump point.
std::string cdf_overlay(const StepCdf& cdf, LimitCdf limit);

}  // namespace goldbach_lab
