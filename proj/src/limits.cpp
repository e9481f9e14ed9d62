#include "goldbach_lab/limits.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace goldbach_lab {

LambdaGrid::LambdaGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("lambda grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double x = points_[i];
    if (!std::isfinite(x) || x <= 0) throw std::invalid_argument(fmt::format("lambda grid point {} is not a positive finite real", x));
    if (i > 0 && x <= points_[i - 1]) throw std::invalid_argument("lambda grid must be strictly increasing");
  }
}

LambdaGrid LambdaGrid::parse(std::string_view text) {
  std::vector<double> points;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto item = text.substr(pos, comma - pos);
    double x = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc{} || end != item.data() + item.size())
      throw std::invalid_argument(fmt::format("cannot parse lambda grid item '{}'", item));
    points.push_back(x);
    pos = comma + 1;
  }
  return LambdaGrid(std::move(points));
}

double IdentityResidualReport::max_rel_residual() const noexcept {
  double m = 0;
  for (const auto& r : records) m = std::max(m, r.rel_residual);
  return m;
}

double laplace(const KeyedDistribution& dist, double lambda) {
  if (!(lambda >= 0)) throw std::invalid_argument(fmt::format("laplace: lambda must be >= 0, got {}", lambda));
  detail::CompensatedSum s;
  for (const auto& e : dist.entries()) s.add(e.prob * std::exp(-lambda * e.value));
  return s.value();
}

double phi(double lambda) {
  if (!(lambda >= 0)) throw std::invalid_argument(fmt::format("phi: lambda must be >= 0, got {}", lambda));
  if (lambda < kSmallLambda) {
    const double l = lambda;
    return 1.0 - l / 2.0 + l * l / 6.0 - l * l * l / 24.0;
  }
  return -std::expm1(-lambda) / lambda;
}

double laplace_U(double lambda) {
  if (!(lambda >= 0)) throw std::invalid_argument(fmt::format("laplace_U: lambda must be >= 0, got {}", lambda));
  if (lambda < kSmallLambda) {
    const double l = lambda;
    return 1.0 - 2.0 * l / 3.0 + l * l / 4.0 - l * l * l / 15.0;
  }
  // The numerator is O(l^2) near the threshold; extended precision keeps
  // the cancellation error well below 1e-12 there.
  const long double l = lambda;
  const long double numer = -std::expm1(-l) - l * std::exp(-l);
  return static_cast<double>(2.0L * numer / (l * l));
}

namespace {

IdentityRecord make_record(double lambda, double lhs, double rhs) {
  const double abs_residual = std::abs(lhs - rhs);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return {lambda, lhs, rhs, abs_residual, abs_residual / scale};
}

// Z_n and X_n share the sample point k, so their entries are paired by key.
template <class Term>
double coupled_expectation(const KeyedDistribution& z, const KeyedDistribution& x, Term term) {
  detail::CompensatedSum s;
  const auto ze = z.entries();
  const auto xe = x.entries();
  for (std::size_t i = 0; i < ze.size(); ++i) {
    if (ze[i].key != xe[i].key) throw std::logic_error("Z_n and X_n keys out of step");
    s.add(ze[i].prob * term(ze[i].value, xe[i].value));
  }
  return s.value();
}

template <class Term>
double expectation(const KeyedDistribution& d, Term term) {
  detail::CompensatedSum s;
  for (const auto& e : d.entries()) s.add(e.prob * term(e.value));
  return s.value();
}

}  // namespace

IdentityRecord check_product_identity(const PartitionTable& table, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument(fmt::format("product identity needs lambda > 0, got {}", lambda));
  const auto z = dist_Zn(table);
  const auto x = dist_Xn(table.n());
  const double lhs = coupled_expectation(z, x, [&](double zv, double xv) { return zv * std::exp(-lambda * xv); });
  const double rhs = expected_value(z) * laplace(dist_Gn_over_n(table), lambda);
  return make_record(lambda, lhs, rhs);
}

IdentityRecord check_integrated_identity(const PartitionTable& table, double s) {
  if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument(fmt::format("integrated identity needs s > 0, got {}", s));
  const auto z = dist_Zn(table);
  const auto x = dist_Xn(table.n());
  // X_n >= 3/n and G_n/n >= 3/n, so both divisions are safe.
  const auto kernel = [s](double v) { return -std::expm1(-s * v) / v; };
  const double lhs = coupled_expectation(z, x, [&](double zv, double xv) { return zv * kernel(xv); });
  const double rhs = expected_value(z) * expectation(dist_Gn_over_n(table), kernel);
  return make_record(s, lhs, rhs);
}

IdentityResidualReport product_identity_report(const PartitionTable& table, const LambdaGrid& grid) {
  IdentityResidualReport report{"product", table.n(), {}};
  for (double l : grid.points()) report.records.push_back(check_product_identity(table, l));
  return report;
}

IdentityResidualReport integrated_identity_report(const PartitionTable& table, const LambdaGrid& grid) {
  IdentityResidualReport report{"integrated", table.n(), {}};
  for (double s : grid.points()) report.records.push_back(check_integrated_identity(table, s));
  return report;
}

std::vector<AsymptoticRatio> asymptotic_ratios(std::span<const PartitionTable> tables) {
  if (tables.size() < 2) throw std::invalid_argument("asymptotic ratios need at least two scales");
  std::vector<AsymptoticRatio> out;
  out.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    if (i > 0 && t.n() <= tables[i - 1].n()) throw std::invalid_argument("scales must be strictly increasing");
    const double n = static_cast<double>(t.n());
    const double log_n = std::log(n);
    const double total = static_cast<double>(t.total());
    const double mean_y = total / (n - 2);
    out.push_back({t.n(), total / (2 * n * n / (log_n * log_n)), mean_y / (2 * n / (log_n * log_n)),
                   mean_y / scaling_constant(t.n()).b_n});
  }
  return out;
}

std::string to_csv(std::span<const IdentityResidualReport> reports) {
  std::string out = "identity,n,lambda,lhs,rhs,abs_residual,rel_residual\n";
  for (const auto& rep : reports)
    for (const auto& r : rep.records)
      out += fmt::format("{},{},{},{},{},{},{}\n", rep.identity, rep.n, r.lambda, r.lhs, r.rhs, r.abs_residual, r.rel_residual);
  return out;
}

std::string to_json(std::span<const IdentityResidualReport> reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json j;
    j["identity"] = rep.identity;
    j["n"] = rep.n;
    auto& rows = j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : rep.records)
      rows.push_back({{"lambda", r.lambda}, {"lhs", r.lhs}, {"rhs", r.rhs},
                      {"abs_residual", r.abs_residual}, {"rel_residual", r.rel_residual}});
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace goldbach_lab
