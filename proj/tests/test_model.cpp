#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "goldbach_lab/errors.hpp"
#include "goldbach_lab/model.hpp"
#include "oracles.hpp"

using namespace goldbach_lab;
using doctest::Approx;

namespace {

PartitionTable table_for(std::uint64_t n) { return build_partition_table(build_prime_flags(2 * n), n); }

double mass(const KeyedDistribution& d) {
  double s = 0;
  for (const auto& e : d.entries()) s += e.prob;
  return s;
}

}  // namespace

TEST_CASE("scaling constant") {
  CHECK(scaling_constant(100).b_n == Approx(18.861170).epsilon(1e-7));
  CHECK(scaling_constant(1000000).b_n == Approx(20956.855224).epsilon(1e-9));
  // ln n = 2 gives b_n = n.
  CHECK(4.0 * std::exp(2.0) / 4.0 == Approx(std::exp(2.0)));
  CHECK_THROWS_AS(scaling_constant(2), std::invalid_argument);
}

TEST_CASE("Y_n, G_n, X_n, Z_n at n=5") {
  const auto t = table_for(5);
  const auto y = dist_Yn(t);
  REQUIRE(y.size() == 3);
  CHECK(y.entries()[0] == KeyedEntry{3, 1.0, 1.0 / 3});
  CHECK(y.entries()[1] == KeyedEntry{4, 1.0, 1.0 / 3});
  CHECK(y.entries()[2] == KeyedEntry{5, 2.0, 1.0 / 3});
  CHECK(expected_value(y) == Approx(4.0 / 3));

  const auto g = dist_Gn(t);
  CHECK(g.entries()[0].prob == 0.25);
  CHECK(g.entries()[1].prob == 0.25);
  CHECK(g.entries()[2].prob == 0.5);
  CHECK(g.entries()[2].value == 10.0);
  CHECK(expected_value(g) == Approx(8.5));

  const auto x = dist_Xn(5);
  CHECK(x.entries()[0].value == Approx(0.6));
  CHECK(x.entries()[1].value == Approx(0.8));
  CHECK(x.entries()[2].value == 1.0);
  CHECK(expected_value(x) == Approx(0.8));

  const auto z = dist_Zn(t);
  const double b5 = scaling_constant(5).b_n;
  CHECK(z.entries()[2].value == Approx(2.0 / b5));
  for (std::size_t i = 0; i < 3; ++i) CHECK(z.entries()[i].prob == y.entries()[i].prob);
}

TEST_CASE("degenerate and tiny distributions") {
  const auto t3 = table_for(3);
  CHECK(dist_Yn(t3).entries()[0] == KeyedEntry{3, 1.0, 1.0});
  CHECK(dist_Gn(t3).entries()[0].prob == 1.0);
  CHECK(dist_Xn(3).entries()[0] == KeyedEntry{3, 1.0, 1.0});
  CHECK_THROWS_AS(dist_Xn(2), std::invalid_argument);

  const auto x10 = dist_Xn(10);
  for (const auto& e : x10.entries()) CHECK(e.prob == 0.125);
  const auto x100 = dist_Xn(100);
  CHECK(x100.size() == 98);
  CHECK(x100.entries().back().value == 1.0);

  const PartitionTable empty(4, {0, 0});
  CHECK_THROWS_AS(dist_Gn(empty), DegenerateDistributionError);
  CHECK_THROWS_AS(size_bias(dist_Yn(empty)), DegenerateDistributionError);
}

TEST_CASE("Z_n at n=100, key 50") {
  const auto z = dist_Zn(table_for(100));
  CHECK(z.entries()[50 - 3].key == 50);
  CHECK(z.entries()[50 - 3].value == Approx(0.31811).epsilon(1e-4));
}

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{2, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{6, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{3, 1.0, 0.5}, {3, 1.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{3, -1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{3, NAN, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{3, 1.0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(KeyedDistribution("d", 5, {{3, 1.0, 1.5}, {4, 1.0, -0.5}}), std::invalid_argument);
  CHECK_NOTHROW(KeyedDistribution("d", 5, {{3, 0.0, 0.5}, {5, 2.0, 0.5}}));
}

TEST_CASE("size bias") {
  const auto sb = size_bias(dist_Yn(table_for(5)));
  CHECK(sb.entries()[0].prob == Approx(0.25));
  CHECK(sb.entries()[1].prob == Approx(0.25));
  CHECK(sb.entries()[2].prob == Approx(0.5));
  CHECK(sb.entries()[2].value == 2.0);

  const KeyedDistribution constant("c", 6, {{3, 7.0, 0.1}, {4, 7.0, 0.2}, {5, 7.0, 0.3}, {6, 7.0, 0.4}});
  const auto same = size_bias(constant);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same.entries()[i].prob == Approx(constant.entries()[i].prob).epsilon(1e-15));

  const KeyedDistribution with_zero("z", 4, {{3, 0.0, 0.5}, {4, 3.0, 0.5}});
  CHECK(size_bias(with_zero).entries()[0].prob == 0.0);
  CHECK(size_bias(with_zero).entries()[1].prob == 1.0);
}

TEST_CASE("size-biased Y_n is G_n key by key") {
  for (std::uint64_t n : {5ull, 100ull, 1000ull, 10000ull}) {
    const auto t = table_for(n);
    const auto sb = size_bias(dist_Yn(t));
    const auto g = dist_Gn(t);
    CHECK(std::abs(mass(sb) - 1.0) < 1e-12);
    CHECK(std::abs(mass(g) - 1.0) < 1e-12);
    CHECK(std::abs(mass(dist_Zn(t)) - 1.0) < 1e-12);
    // Exact rational value of the size-biased pmf: (Q/(n-2)) / (total/(n-2)).
    const oracle::Rational p_key(1, static_cast<std::int64_t>(n - 2));
    oracle::Rational mu = 0;
    for (auto q : t.counts()) mu += static_cast<std::int64_t>(q) * p_key;
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      REQUIRE(sb.entries()[i].key == g.entries()[i].key);
      const oracle::Rational exact = static_cast<std::int64_t>(t.counts()[i]) * p_key / mu;
      CHECK(exact == oracle::Rational(static_cast<std::int64_t>(t.counts()[i]), static_cast<std::int64_t>(t.total())));
      worst = std::max(worst, std::abs(sb.entries()[i].prob - g.entries()[i].prob));
      worst = std::max(worst, std::abs(boost::rational_cast<double>(exact) - g.entries()[i].prob));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("E(Y_n)(n-2) equals the total in rational arithmetic") {
  for (std::uint64_t n : {5ull, 1000ull}) {
    const auto t = table_for(n);
    oracle::Rational e = 0;
    for (auto q : t.counts()) e += oracle::Rational(static_cast<std::int64_t>(q), static_cast<std::int64_t>(n - 2));
    CHECK(e * static_cast<std::int64_t>(n - 2) == oracle::Rational(static_cast<std::int64_t>(t.total())));
    CHECK(expected_value(dist_Yn(t)) * static_cast<double>(n - 2) == Approx(static_cast<double>(t.total())));
  }
}

TEST_CASE("export formats") {
  const auto g = dist_Gn(table_for(5));
  CHECK(to_csv(g) == "# name=Gn\n# n=5\nk,value,prob\n3,6,0.25\n4,8,0.25\n5,10,0.5\n");
  const auto json = to_json(g);
  CHECK(json.find("\"name\": \"Gn\"") != std::string::npos);
  CHECK(json.find("\"k\": 5") != std::string::npos);
  CHECK(json.find("\"prob\": 0.5") != std::string::npos);
}
