#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "goldbach_lab/model.hpp"

namespace goldbach_lab {

/// Below this argument phi and laplace_U use their 4-term Taylor series.
inline constexpr double kSmallLambda = 1e-4;

/// Strictly increasing list of finite, strictly positive transform arguments.
class LambdaGrid {
 public:
  /// Throws std::invalid_argument if points are empty, non-positive,
  /// non-finite or not strictly increasing.
  explicit LambdaGrid(std::vector<double> points);

  /// Parses "0.1,1,10".
  static LambdaGrid parse(std::string_view text);

  std::span<const double> points() const noexcept { return points_; }

 private:
  std::vector<double> points_;
};

struct IdentityRecord {
  double lambda;
  double lhs;
  double rhs;
  double abs_residual;
  double rel_residual;  // abs / max(|lhs|, |rhs|, 1e-300)
};

struct IdentityResidualReport {
  std::string identity;  // "product" or "integrated"
  std::uint64_t n;
  std::vector<IdentityRecord> records;

  double max_rel_residual() const noexcept;
};

/// sum prob * exp(-lambda * value). Throws std::invalid_argument for lambda < 0.
double laplace(const KeyedDistribution& dist, double lambda);

/// Laplace transform of Uniform(0,1): (1 - e^-l) / l, phi(0) = 1.
double phi(double lambda);

/// Laplace transform of max of two uniforms: (2/l^2)(1 - e^-l - l e^-l) = -2 phi'(l).
double laplace_U(double lambda);

/// E(Z_n e^{-l X_n}) against E(Z_n) E(e^{-l G_n/n}), Z_n and X_n coupled
/// through the shared key k. Throws std::invalid_argument for lambda <= 0.
IdentityRecord check_product_identity(const PartitionTable& table, double lambda);

/// E((Z_n/X_n)(1 - e^{-s X_n})) against E(Z_n) E((1 - e^{-s G_n/n}) / (G_n/n)).
/// Throws std::invalid_argument for s <= 0.
IdentityRecord check_integrated_identity(const PartitionTable& table, double s);

IdentityResidualReport product_identity_report(const PartitionTable& table,
                                               const LambdaGrid& grid);
IdentityResidualReport integrated_identity_report(const PartitionTable& table,
                                                  const LambdaGrid& grid);

struct AsymptoticRatio {
  std::uint64_t n;
  double total_ratio;  // total / (2 n^2 / ln^2 n)
  double mean_ratio;   // E(Y_n) / (2 n / ln^2 n)
  double mean_Zn;      // E(Z_n)
};

/// One record per table. Throws std::invalid_argument unless there are at
/// least two tables with strictly increasing n.
std::vector<AsymptoticRatio> asymptotic_ratios(std::span<const PartitionTable> tables);

/// CSV columns identity,n,lambda,lhs,rhs,abs_residual,rel_residual.
std::string to_csv(std::span<const IdentityResidualReport> reports);
std::string to_json(std::span<const IdentityResidualReport> reports);

}  // namespace goldbach_lab
