#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pda/errors.hpp"
#include "pda/stats.hpp"
#include "support.hpp"

using namespace pda;
using pda::testing::near;

namespace {

Pairs from_differences(const std::vector<double>& d) {
  Pairs p;
  for (double x : d) p.emplace_back(x, 0.0);
  return p;
}

// Straightforward enumeration over every sign mask using floating midranks;
// deliberately shares no code with the library.
double brute_force_p(const std::vector<double>& diffs, Alternative alt) {
  std::vector<double> d;
  for (double x : diffs)
    if (x != 0.0) d.push_back(x);
  const std::size_t n = d.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    ranks[i] = less + (equal + 1) / 2.0;
  }
  double total = 0, observed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += ranks[i];
    if (d[i] > 0) observed += ranks[i];
  }
  const double centre = total / 2;
  long ge = 0, le = 0, far = 0;
  const long patterns = 1L << n;
  for (long mask = 0; mask < patterns; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1L << i)) w += ranks[i];
    if (w >= observed - 1e-9) ++ge;
    if (w <= observed + 1e-9) ++le;
    if (std::abs(w - centre) >= std::abs(observed - centre) - 1e-9) ++far;
  }
  const double denom = static_cast<double>(patterns);
  switch (alt) {
    case Alternative::Greater: return ge / denom;
    case Alternative::Less: return le / denom;
    case Alternative::TwoSided: return far / denom;
  }
  return -1;
}

}  // namespace

TEST_SUITE("wilcoxon") {
  TEST_CASE("five positive differences") {
    const auto r = wilcoxon_signed_rank(from_differences({1, 2, 3, 4, 5}), Alternative::Greater);
    CHECK(r.p_value == 0.03125);
    CHECK(r.exact);
    CHECK(r.n == 5);
    CHECK(r.statistic == 15.0);
    CHECK(r.method == TestMethod::WilcoxonSignedRank);
    CHECK(wilcoxon_signed_rank(from_differences({1, 2, 3, 4, 5}), Alternative::TwoSided).p_value == 0.0625);
    CHECK(wilcoxon_signed_rank(from_differences({1, 2, 3, 4, 5}), Alternative::Less).p_value == 1.0);
  }

  TEST_CASE("symmetric pair") {
    const auto r = wilcoxon_signed_rank(from_differences({1, -1}), Alternative::TwoSided);
    CHECK(r.p_value == 1.0);
    CHECK(r.exact);
  }

  TEST_CASE("zero differences are dropped") {
    const auto r = wilcoxon_signed_rank(from_differences({0, 1, 2, 0, 3, 4, 5}), Alternative::Greater);
    CHECK(r.n == 5);
    CHECK(r.p_value == 0.03125);
    CHECK_THROWS_AS(wilcoxon_signed_rank(from_differences({0, 0, 0}), Alternative::TwoSided), DegenerateInputError);
    CHECK_THROWS_AS(wilcoxon_signed_rank(Pairs{}, Alternative::TwoSided), DegenerateInputError);
  }

  TEST_CASE("pairs are differenced a minus b") {
    const Pairs p{{3.2, 2.9}, {4.1, 3.6}, {2.8, 3.1}, {5.0, 4.2}, {4.4, 4.0}, {3.9, 3.5}, {4.7, 4.9}, {3.3, 2.8}};
    const auto r = wilcoxon_signed_rank(p, Alternative::Greater);
    CHECK(r.statistic == 32.5);
    std::vector<double> d;
    for (const auto& [a, b] : p) d.push_back(a - b);
    CHECK(near(r.p_value, brute_force_p(d, Alternative::Greater), 1e-12));
  }

  TEST_CASE("exact path equals brute-force enumeration") {
    std::mt19937_64 gen(123);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> value(-6, 6);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> d(static_cast<std::size_t>(size(gen)));
      for (auto& x : d) x = value(gen) * 0.5;  // plenty of ties and zeros
      if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) d[0] = 1.0;
      for (auto alt : {Alternative::TwoSided, Alternative::Greater, Alternative::Less}) {
        const auto r = wilcoxon_signed_rank(from_differences(d), alt);
        REQUIRE(r.exact);
        REQUIRE(near(r.p_value, brute_force_p(d, alt), 1e-12));
      }
    }
  }

  TEST_CASE("normal approximation near the exact value at twenty") {
    std::mt19937_64 gen(321);
    std::normal_distribution<double> noise(0.4, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> d(20);
      for (auto& x : d) x = noise(gen);
      for (auto alt : {Alternative::TwoSided, Alternative::Greater, Alternative::Less}) {
        const auto exact = wilcoxon_signed_rank(from_differences(d), alt);
        const auto approx = wilcoxon_signed_rank(from_differences(d), alt, true);
        REQUIRE(exact.exact);
        REQUIRE_FALSE(approx.exact);
        worst = std::max(worst, std::abs(exact.p_value - approx.p_value));
      }
    }
    CHECK(worst <= 0.01);
  }

  TEST_CASE("large samples use the tie-corrected approximation") {
    const std::vector<double> d{0.5, -1.2, 2.0, 2.0, 3.1, -0.4, 1.7, 0.0, 2.2, -2.0, 1.1, 0.9, 3.3,
                                -0.7, 1.5, 2.8, 0.6, -1.1, 1.9, 2.4, 0.3, 1.2, -0.2, 2.6, 1.0, 1.4};
    const auto two = wilcoxon_signed_rank(from_differences(d), Alternative::TwoSided);
    CHECK_FALSE(two.exact);
    CHECK(two.n == 25);
    CHECK(two.statistic == 276.0);
    CHECK(near(two.p_value, 0.0023555365228777733, 1e-9));
    CHECK(near(wilcoxon_signed_rank(from_differences(d), Alternative::Greater).p_value, 0.0011777682614388866, 1e-9));
    CHECK(near(wilcoxon_signed_rank(from_differences(d), Alternative::Less).p_value, 0.9989233136884799, 1e-9));
  }

  TEST_CASE("p-values stay in range") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> size(1, 40);
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> d(static_cast<std::size_t>(size(gen)));
      for (auto& x : d) x = std::round(noise(gen) * 2) / 2;
      if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) continue;
      for (auto alt : {Alternative::TwoSided, Alternative::Greater, Alternative::Less}) {
        const auto r = wilcoxon_signed_rank(from_differences(d), alt);
        REQUIRE(r.p_value >= 0.0);
        REQUIRE(r.p_value <= 1.0);
      }
    }
  }
}

TEST_SUITE("paired t") {
  TEST_CASE("alternating differences") {
    const auto r = paired_t_test(from_differences({1, -1, 1, -1}), Alternative::TwoSided);
    CHECK(r.statistic == 0.0);
    CHECK(near(r.p_value, 1.0, 1e-12));
    CHECK(r.method == TestMethod::PairedT);
  }

  TEST_CASE("one to five") {
    const auto d = from_differences({1, 2, 3, 4, 5});
    const auto r = paired_t_test(d, Alternative::TwoSided);
    CHECK(near(r.statistic, 4.2426, 1e-4));
    CHECK(near(r.p_value, 0.0132, 1e-3));
    CHECK(near(r.statistic, 4.242640687119285, 1e-12));
    CHECK(near(r.p_value, 0.013235599563682695, 1e-10));
    CHECK(near(paired_t_test(d, Alternative::Greater).p_value, 0.0066177997818413475, 1e-10));
    CHECK(r.n == 5);
  }

  TEST_CASE("pairs with mixed signs") {
    const Pairs p{{3.2, 2.9}, {4.1, 3.6}, {2.8, 3.1}, {5.0, 4.2}, {4.4, 4.0}, {3.9, 3.5}, {4.7, 4.9}, {3.3, 2.8}};
    CHECK(near(paired_t_test(p, Alternative::TwoSided).statistic, 2.2912878474779195, 1e-9));
    CHECK(near(paired_t_test(p, Alternative::TwoSided).p_value, 0.05570169666788147, 1e-9));
    CHECK(near(paired_t_test(p, Alternative::Greater).p_value, 0.027850848333940734, 1e-9));
    CHECK(near(paired_t_test(p, Alternative::Less).p_value, 0.9721491516660592, 1e-9));
  }

  TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(paired_t_test(from_differences({2, 2, 2}), Alternative::TwoSided), DegenerateInputError);
    CHECK_THROWS_AS(paired_t_test(from_differences({2}), Alternative::TwoSided), ContractViolation);
  }

  TEST_CASE("t tail") {
    CHECK(near(student_t_sf(0.0, 7), 0.5, 1e-15));
    CHECK(near(student_t_sf(2.0, 1e6), 0.02275013194817921, 1e-5));
    CHECK(near(student_t_sf(-1.0, 3) + student_t_sf(1.0, 3), 1.0, 1e-14));
  }
}

TEST_CASE("summary helpers and names") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(mean(x) == 2.5);
  CHECK(near(sample_sd(x), std::sqrt(5.0 / 3.0), 1e-15));
  CHECK(sample_sd(std::vector<double>{3}) == 0.0);
  CHECK(alternative_from_string("greater") == Alternative::Greater);
  CHECK(alternative_from_string("two-sided") == Alternative::TwoSided);
  CHECK(alternative_from_string("two_sided") == Alternative::TwoSided);
  CHECK_THROWS_AS(alternative_from_string("sideways"), ConfigError);
}
