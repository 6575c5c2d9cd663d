#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "pda/errors.hpp"
#include "pda/health.hpp"
#include "support.hpp"

using namespace pda;
using pda::testing::bundled_table;
using pda::testing::near;

namespace {

const SegmentMomenta kOnePunch{5.83, 0.49, 0.51, 0.38};

void check_vec(const SegmentVector& got, const SegmentVector& want, double tol = 1e-12) {
  for (std::size_t i = 0; i < 4; ++i) CHECK(near(got[i], want[i], tol));
}

SegmentMomenta random_momenta(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 50.0);
  std::bernoulli_distribution zero(0.1);
  SegmentVector v{};
  for (auto& x : v) x = zero(gen) ? 0.0 : u(gen);
  return SegmentMomenta::from_vector(v);
}

}  // namespace

TEST_SUITE("m2mm table") {
  TEST_CASE("bundled rows for measured motions") {
    const auto& t = bundled_table();
    CHECK(t.increments("RIGHT_PUNCH") == SegmentVector{5.83, 0.49, 0.51, 0.38});
    CHECK(t.increments("LEFT_KICK") == SegmentVector{1.47, 1.68, 1.08, 6.42});
    CHECK(t.increments("CROUCH") == SegmentVector{2.25, 2.11, 2.95, 3.04});
  }

  TEST_CASE("mirrored rows swap within each pair") {
    const auto& t = bundled_table();
    CHECK(t.increments("LEFT_PUNCH") == SegmentVector{0.49, 5.83, 0.38, 0.51});
    CHECK(t.increments("RIGHT_KICK") == SegmentVector{1.68, 1.47, 6.42, 1.08});
    CHECK(t.increments("IDLE") == SegmentVector{0, 0, 0, 0});
  }

  TEST_CASE("every bundled roster motion has a row") {
    const auto cfg = default_roster();
    CHECK_NOTHROW(cfg.roster.validate_motions(bundled_table()));
  }

  TEST_CASE("csv parsing") {
    std::istringstream ok("# comment\nmotion,right_arm,left_arm,right_leg,left_leg,note\nA,1,2,3,4,x\n\nB,0,0,0,0,\n");
    const auto t = M2MmTable::parse_csv(ok);
    CHECK(t.size() == 2);
    CHECK(t.increments("A") == SegmentVector{1, 2, 3, 4});
    CHECK(t.row("A").note == "x");

    std::istringstream no_note("motion,right_arm,left_arm,right_leg,left_leg\nA,1,2,3,4\n");
    CHECK(M2MmTable::parse_csv(no_note).size() == 1);
  }

  TEST_CASE("csv errors") {
    std::istringstream bad_header("motion,a,b,c,d\nA,1,2,3,4\n");
    CHECK_THROWS_AS(M2MmTable::parse_csv(bad_header), ConfigError);
    std::istringstream negative("motion,right_arm,left_arm,right_leg,left_leg\nA,1,-2,3,4\n");
    CHECK_THROWS_AS(M2MmTable::parse_csv(negative), ConfigError);
    std::istringstream dup("motion,right_arm,left_arm,right_leg,left_leg\nA,1,2,3,4\nA,1,2,3,4\n");
    CHECK_THROWS_AS(M2MmTable::parse_csv(dup), ConfigError);
    std::istringstream short_row("motion,right_arm,left_arm,right_leg,left_leg\nA,1,2,3\n");
    CHECK_THROWS_AS(M2MmTable::parse_csv(short_row), ConfigError);
    std::istringstream junk("motion,right_arm,left_arm,right_leg,left_leg\nA,1,2,x,4\n");
    CHECK_THROWS_AS(M2MmTable::parse_csv(junk), ConfigError);
    CHECK_THROWS_AS(M2MmTable::load_csv("/nonexistent/m2mm.csv"), ConfigError);
  }

  TEST_CASE("unknown motion lookup") {
    CHECK_THROWS_AS(bundled_table().increments("MOONWALK"), LookupError);
    CHECK_THROWS_AS(accumulate({}, "MOONWALK", bundled_table()), LookupError);
    CHECK_THROWS_AS(dec({}, "MOONWALK", bundled_table()), LookupError);
  }
}

TEST_SUITE("accumulation") {
  TEST_CASE("single motions from zero") {
    CHECK(accumulate({}, "RIGHT_PUNCH", bundled_table()) == kOnePunch);
    CHECK(accumulate({}, "LEFT_KICK", bundled_table()) == SegmentMomenta{1.47, 1.68, 1.08, 6.42});
  }

  TEST_CASE("punch then crouch") {
    const auto m = accumulate(kOnePunch, "CROUCH", bundled_table());
    check_vec(m.as_vector(), {8.08, 2.60, 3.46, 3.42}, 1e-12);
  }

  TEST_CASE("order of a motion multiset does not matter") {
    std::vector<std::string> seq{"RIGHT_PUNCH", "LEFT_KICK", "CROUCH", "RIGHT_PUNCH", "WALK", "LEFT_PUNCH"};
    std::sort(seq.begin(), seq.end());
    SegmentMomenta first;
    for (const auto& m : seq) first = accumulate(first, m, bundled_table());
    int perms = 0;
    while (std::next_permutation(seq.begin(), seq.end())) {
      SegmentMomenta m;
      for (const auto& x : seq) m = accumulate(m, x, bundled_table());
      check_vec(m.as_vector(), first.as_vector(), 1e-12);
      ++perms;
    }
    CHECK(perms > 100);
  }
}

TEST_SUITE("balancedness") {
  TEST_CASE("expected momenta") {
    check_vec(expected_momenta(kOnePunch), {5.83, 5.83, 0.51, 0.51});
    check_vec(expected_momenta({}), {0, 0, 0, 0});
    check_vec(expected_momenta({2, 2, 3, 3}), {2, 2, 3, 3});
  }

  TEST_CASE("gaps") {
    check_vec(gaps(kOnePunch), {0, 5.34, 0, 0.13}, 1e-12);
    check_vec(gaps({0, 4, 0, 0}), {4, 0, 0, 0});
    check_vec(gaps({7, 7, 1.5, 1.5}), {0, 0, 0, 0});
  }

  TEST_CASE("one right punch") {
    CHECK(near(balancedness(kOnePunch), 0.1372, 1e-4));
    CHECK(near(balancedness(kOnePunch), 1.0 - 2.0 * 5.47 / 12.68, 1e-12));
  }

  TEST_CASE("balanced and empty momenta") {
    CHECK(balancedness({}) == 1.0);
    CHECK(balancedness({3, 3, 0.5, 0.5}) == 1.0);
    CHECK(balancedness({4, 0, 0, 0}) == 0.0);
  }

  TEST_CASE("repeating one motion keeps the value") {
    SegmentMomenta m;
    for (int k = 0; k < 25; ++k) m = accumulate(m, "RIGHT_PUNCH", bundled_table());
    CHECK(near(balancedness(m), 0.1372, 1e-4));
  }

  TEST_CASE("snapshot agrees with the parts") {
    const auto s = snapshot(kOnePunch);
    CHECK(s.em == expected_momenta(kOnePunch));
    CHECK(s.gap == gaps(kOnePunch));
    CHECK(s.bal == balancedness(kOnePunch));
  }

  TEST_CASE("random vectors: range, equality, mirror and scale") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int i = 0; i < 10000; ++i) {
      const auto m = random_momenta(gen);
      const double b = balancedness(m);
      REQUIRE(b >= 0.0);
      REQUIRE(b <= 1.0);
      const bool pairwise_equal = m.right_arm == m.left_arm && m.right_leg == m.left_leg;
      REQUIRE((b == 1.0) == pairwise_equal);
      const SegmentMomenta mirror{m.left_arm, m.right_arm, m.left_leg, m.right_leg};
      REQUIRE(near(balancedness(mirror), b, 1e-12));
      const double c = scale(gen);
      const SegmentMomenta scaled{c * m.right_arm, c * m.left_arm, c * m.right_leg, c * m.left_leg};
      REQUIRE(near(balancedness(scaled), b, 1e-9));
    }
  }
}

TEST_SUITE("fitness") {
  TEST_CASE("dec of healthy and unhealthy follow-ups") {
    CHECK(near(dec(kOnePunch, "LEFT_PUNCH", bundled_table()), 3.73, 1e-6));
    CHECK(near(dec(kOnePunch, "LEFT_KICK", bundled_table()), -7.03, 1e-6));
  }

  TEST_CASE("dec with no gaps is minus the motion's total") {
    for (const auto& m : bundled_table().motions()) {
      const auto& mm = bundled_table().increments(m);
      CHECK(near(dec({2, 2, 2, 2}, m, bundled_table()), -(mm[0] + mm[1] + mm[2] + mm[3]), 1e-12));
    }
  }

  TEST_CASE("fbal over two motions") {
    const std::vector<std::string> motions{"LEFT_PUNCH", "LEFT_KICK"};
    const auto f = fbal(kOnePunch, motions, bundled_table());
    CHECK(f.at("LEFT_PUNCH").f_bal == 1.0);
    CHECK(f.at("LEFT_KICK").f_bal == 0.0);
    CHECK(near(f.dec_max, 3.73, 1e-6));
    CHECK(near(f.dec_min, -7.03, 1e-6));
    CHECK_THROWS_AS(f.at("RIGHT_PUNCH"), LookupError);
  }

  TEST_CASE("degenerate and small sets") {
    const std::vector<std::string> one{"LEFT_KICK"};
    CHECK(fbal(kOnePunch, one, bundled_table()).at("LEFT_KICK").f_bal == 0.5);
    const std::vector<double> three{-1.0, 0.0, 1.0};
    CHECK(normalize_fitness(three) == std::vector<double>{0.0, 0.5, 1.0});
    const std::vector<double> same{2.0, 2.0};
    CHECK(normalize_fitness(same) == std::vector<double>{0.5, 0.5});
    CHECK_THROWS_AS(fbal(kOnePunch, std::vector<std::string>{}, bundled_table()), ContractViolation);
  }

  TEST_CASE("normalization is unchanged by an affine map of dec") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> d(6);
      for (auto& x : d) x = u(gen);
      const double a = std::abs(u(gen)) + 0.1;
      const double b = u(gen);
      std::vector<double> t(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) t[i] = a * d[i] + b;
      const auto fd = normalize_fitness(d);
      const auto ft = normalize_fitness(t);
      for (std::size_t i = 0; i < d.size(); ++i) REQUIRE(near(fd[i], ft[i], 1e-9));
    }
  }

  TEST_CASE("random states: dec bound, range, argmax") {
    std::mt19937_64 gen(99);
    const auto motions = bundled_table().motions();
    for (int i = 0; i < 2000; ++i) {
      const auto m = random_momenta(gen);
      const auto f = fbal(m, motions, bundled_table());
      std::size_t arg_dec = 0;
      std::size_t arg_f = 0;
      for (std::size_t k = 0; k < motions.size(); ++k) {
        const auto& mm = bundled_table().increments(motions[k]);
        REQUIRE(std::abs(f.values[k].dec) <= mm[0] + mm[1] + mm[2] + mm[3] + 1e-9);
        REQUIRE(f.values[k].f_bal >= 0.0);
        REQUIRE(f.values[k].f_bal <= 1.0);
        if (f.values[k].dec > f.values[arg_dec].dec) arg_dec = k;
        if (f.values[k].f_bal > f.values[arg_f].f_bal) arg_f = k;
      }
      // Nearly equal dec values may both normalize to the same double.
      if (f.dec_max > f.dec_min) REQUIRE(f.values[arg_dec].f_bal == f.values[arg_f].f_bal);
    }
  }
}
