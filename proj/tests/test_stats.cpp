#include <doctest.h>

#include <algorithm>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "goldbach_lab/stats.hpp"

using namespace goldbach_lab;
using doctest::Approx;

namespace {

PartitionTable table_for(std::uint64_t n) { return build_partition_table(build_prime_flags(2 * n), n); }

// Chi-square of seeded draws against the exact pmf over the 20 heaviest keys
// plus one bin for the rest (dropped when it carries no mass).
void check_chi_square(const KeyedDistribution& d, std::uint64_t seed) {
  std::vector<KeyedEntry> by_mass(d.entries().begin(), d.entries().end());
  std::stable_sort(by_mass.begin(), by_mass.end(), [](auto& a, auto& b) { return a.prob > b.prob; });
  const std::size_t top = std::min<std::size_t>(20, by_mass.size());
  // Bins are by value, so values shared by several keys are merged first.
  std::map<double, double> pmf;
  for (const auto& e : d.entries()) pmf[e.value] += e.prob;
  std::map<double, std::size_t> bin_of;
  std::vector<double> bin_prob;
  for (std::size_t i = 0; i < top; ++i) {
    const double v = by_mass[i].value;
    if (bin_of.count(v)) continue;
    bin_of[v] = bin_prob.size();
    bin_prob.push_back(pmf[v]);
  }
  const std::size_t rest = bin_prob.size();
  double covered = 0;
  for (double p : bin_prob) covered += p;
  bin_prob.push_back(std::max(0.0, 1.0 - covered));

  const std::size_t draws = 1000000;
  std::vector<double> observed(bin_prob.size(), 0.0);
  for (double v : sample(d, seed, draws)) {
    const auto it = bin_of.find(v);
    observed[it == bin_of.end() ? rest : it->second] += 1;
  }
  double chi2 = 0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < bin_prob.size(); ++i) {
    const double expected = bin_prob[i] * draws;
    if (expected < 1e-9) {
      CHECK(observed[i] == 0);
      continue;
    }
    chi2 += (observed[i] - expected) * (observed[i] - expected) / expected;
    ++bins;
  }
  REQUIRE(bins >= 2);
  const boost::math::chi_squared law(static_cast<double>(bins - 1));
  CHECK_MESSAGE(chi2 < boost::math::quantile(law, 0.999), d.name() << " chi2=" << chi2);
}

}  // namespace

TEST_CASE("exact CDFs") {
  const auto t = table_for(5);
  const auto y = exact_cdf(dist_Yn(t));
  REQUIRE(y.points == std::vector<double>{1.0, 2.0});
  CHECK(y.masses[0] == Approx(2.0 / 3));
  CHECK(y.masses[1] == Approx(1.0));
  CHECK(y(0.5) == 0.0);
  CHECK(y(1.5) == Approx(2.0 / 3));
  CHECK(y(9.0) == Approx(1.0));

  const auto x = exact_cdf(dist_Xn(5));
  REQUIRE(x.points.size() == 3);
  CHECK(x.points[0] == Approx(0.6));
  CHECK(x.masses[0] == Approx(1.0 / 3));
  CHECK(x.masses[1] == Approx(2.0 / 3));
  CHECK(x.masses[2] == Approx(1.0));

  const auto point = exact_cdf(KeyedDistribution("p", 3, {{3, 0.5, 1.0}}));
  CHECK(point.points == std::vector<double>{0.5});
  CHECK(point.masses == std::vector<double>{1.0});
}

TEST_CASE("limit CDFs") {
  CHECK(evaluate(LimitCdf::Uniform01, -1) == 0.0);
  CHECK(evaluate(LimitCdf::Uniform01, 0.3) == 0.3);
  CHECK(evaluate(LimitCdf::Uniform01, 2) == 1.0);
  CHECK(evaluate(LimitCdf::MaxOfTwoUniforms, 0.5) == 0.25);
  CHECK(evaluate(LimitCdf::MaxOfTwoUniforms, 3) == 1.0);
}

TEST_CASE("KS distance") {
  const auto point = exact_cdf(KeyedDistribution("p", 3, {{3, 0.5, 1.0}}));
  CHECK(ks_distance(point, LimitCdf::Uniform01) == Approx(0.5));

  for (std::uint64_t m : {1ull, 4ull, 10ull, 250ull}) {
    std::vector<KeyedEntry> grid;
    for (std::uint64_t i = 1; i <= m; ++i) grid.push_back({i + 2, static_cast<double>(i) / m, 1.0 / m});
    const auto cdf = exact_cdf(KeyedDistribution("grid", m + 2, grid));
    CHECK(ks_distance(cdf, LimitCdf::Uniform01) == Approx(1.0 / m).epsilon(1e-12));
  }

  // Brute-force sup over a fine grid never exceeds the jump-point value.
  const auto g = exact_cdf(dist_Gn_over_n(table_for(400)));
  const double ks = ks_distance(g, LimitCdf::MaxOfTwoUniforms);
  double grid_sup = 0;
  for (int i = 0; i <= 200000; ++i) {
    const double xv = i / 200000.0;
    grid_sup = std::max(grid_sup, std::abs(g(xv) - evaluate(LimitCdf::MaxOfTwoUniforms, xv)));
  }
  CHECK(grid_sup <= ks + 1e-15);
  CHECK(grid_sup > ks - 1e-3);
  CHECK(ks >= 0);
  CHECK(ks <= 1);
}

TEST_CASE("G_n on the unit scale") {
  const auto g5 = dist_Gn_over_n(table_for(5));
  CHECK(g5.entries()[0].value == Approx(0.6));
  CHECK(g5.entries()[1].value == Approx(0.8));
  CHECK(g5.entries()[2].value == 1.0);
  CHECK(g5.entries()[2].prob == 0.5);
  const auto g3 = dist_Gn_over_n(table_for(3));
  CHECK(g3.entries()[0] == KeyedEntry{3, 1.0, 1.0});
  for (const auto& e : dist_Gn_over_n(table_for(777)).entries()) CHECK(e.value <= 1.0);
}

TEST_CASE("moments") {
  const KeyedDistribution one("one", 3, {{3, 1.0, 1.0}});
  for (int r = 1; r <= 5; ++r) CHECK(moment(one, r) == 1.0);
  CHECK(moment(dist_Xn(5), 2) == Approx((0.36 + 0.64 + 1.0) / 3));
  CHECK_THROWS_AS(moment(one, 0), std::invalid_argument);
}

TEST_CASE("sampling") {
  const auto g = dist_Gn(table_for(5));
  CHECK(sample(g, 1, 0).empty());
  const KeyedDistribution point("p", 3, {{3, 4.5, 1.0}});
  for (double v : sample(point, 99, 1000)) CHECK(v == 4.5);
  CHECK(sample(g, 7, 10) == sample(g, 7, 10));
  CHECK(sample(g, 7, 50) != sample(g, 8, 50));

  const auto draws = sample(g, 2024, 100000);
  const double freq = static_cast<double>(std::count(draws.begin(), draws.end(), 10.0)) / draws.size();
  CHECK(freq == Approx(0.5).epsilon(0.02));
  CHECK(std::abs(freq - 0.5) < 0.01);

  // Zero-probability keys are never drawn.
  const KeyedDistribution holes("h", 6, {{3, 1.0, 0.0}, {4, 2.0, 0.5}, {5, 3.0, 0.0}, {6, 4.0, 0.5}});
  for (double v : sample(holes, 5, 10000)) CHECK((v == 2.0 || v == 4.0));
}

TEST_CASE("sampling is consistent with the exact pmf (chi-square)") {
  const auto t = table_for(1000);
  check_chi_square(dist_Gn(t), 11);
  check_chi_square(dist_Yn(t), 12);
  check_chi_square(dist_Xn(50), 13);
  check_chi_square(dist_Gn(table_for(5)), 14);
}

TEST_CASE("convergence report rows") {
  const auto t = table_for(20000);
  const std::vector<std::uint64_t> ns{200, 2000, 20000};
  const auto rep = convergence_report(t, ns);
  REQUIRE(rep.records.size() == 3);
  REQUIRE(rep.ratios.size() == 3);
  for (const auto& r : rep.records) {
    CHECK(r.ks_Zn_uniform >= 0);
    CHECK(r.ks_Zn_uniform <= 1);
    CHECK(r.zero_count == 0);
  }
  CHECK(rep.records[2].ks_Gn_over_n_max_uniform < rep.records[0].ks_Gn_over_n_max_uniform);
  CHECK(rep.records[2].laplace_Xn_gap < rep.records[0].laplace_Xn_gap);
  const std::vector<std::uint64_t> bad{200};
  CHECK_THROWS_AS(convergence_report(t, bad), std::invalid_argument);
  const std::vector<std::uint64_t> too_big{200, 30000};
  CHECK_THROWS_AS(convergence_report(t, too_big), std::invalid_argument);
  const auto csv = to_csv(rep);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(cdf_overlay(exact_cdf(dist_Xn(5)), LimitCdf::Uniform01).find("1 1 1\n") != std::string::npos);
}
