#include <doctest.h>

#include <cmath>

#include "pda/errors.hpp"
#include "pda/players.hpp"
#include "support.hpp"

using namespace pda;
using pda::testing::bundled_engine;
using pda::testing::id_of;
using pda::testing::idle_at;

namespace {

PlayerParams uniform_params(double alpha = 0.2) {
  PlayerParams p;
  p.model = "uniform";
  p.reinforce_rate = alpha;
  return p;
}

HitEvent landed(ActionId a, int dmg = 10) { return {Side::Player, a, dmg, false}; }

}  // namespace

TEST_CASE("initial weights follow the side bias") {
  const PlayerModel m(bundled_engine(), PlayerParams{});
  CHECK(m.weight(id_of("RIGHT_PUNCH")) == doctest::Approx(1.6));
  CHECK(m.weight(id_of("RIGHT_KICK")) == doctest::Approx(1.6));
  CHECK(m.weight(id_of("LEFT_PUNCH")) == doctest::Approx(0.4));
  CHECK(m.weight(id_of("LEFT_KICK")) == doctest::Approx(0.4));
  CHECK(m.weight(id_of("IDLE")) == 0.25);
  double total = 0;
  for (double p : m.probabilities()) total += p;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("full right bias never picks a left attack") {
  PlayerParams p;
  p.side_bias = 1.0;
  const PlayerModel m(bundled_engine(), p);
  SeededRandom rng(1);
  const auto s = idle_at(350, 450);
  for (int i = 0; i < 10000; ++i) {
    const auto& spec = bundled_engine().roster()[m.act(s, rng)];
    REQUIRE_FALSE(is_left_side(spec));
  }
}

TEST_CASE("scripted draw picks the matching action") {
  const PlayerModel m(bundled_engine(), uniform_params());
  ScriptedRandom rng({0.35}, {});
  CHECK(m.act(idle_at(350, 450), rng).index == 3);
}

TEST_CASE("seeded repeat") {
  const PlayerModel m(bundled_engine(), PlayerParams{});
  SeededRandom a(17), b(17);
  const auto s = idle_at(350, 450);
  for (int i = 0; i < 500; ++i) REQUIRE(m.act(s, a) == m.act(s, b));
}

TEST_CASE("busy player keeps its action") {
  const PlayerModel m(bundled_engine(), PlayerParams{});
  auto s = idle_at(350, 450);
  pda::testing::busy(s.player, id_of("LEFT_KICK"), 3);
  SeededRandom rng(0);
  CHECK(m.act(s, rng) == id_of("LEFT_KICK"));
}

TEST_CASE("out of reach the player walks in") {
  const PlayerModel m(bundled_engine(), PlayerParams{});
  SeededRandom rng(2);
  const auto s = idle_at(100, 600);
  for (int i = 0; i < 1000; ++i) {
    const auto& spec = bundled_engine().roster()[m.act(s, rng)];
    REQUIRE(spec.kind == ActionKind::Move);
    REQUIRE(spec.move_speed > 0);
  }
}

TEST_CASE("reinforcement") {
  PlayerModel m(bundled_engine(), uniform_params());
  const auto rp = id_of("RIGHT_PUNCH");
  m.observe(landed(rp));
  CHECK(m.weight(rp) == doctest::Approx(1.2));
  m.observe({Side::Player, rp, 0, true});
  CHECK(m.weight(rp) == doctest::Approx(1.2));
  m.observe({Side::Ai, rp, 10, false});
  CHECK(m.weight(rp) == doctest::Approx(1.2));
  m.observe(landed(rp));
  CHECK(m.weight(rp) == doctest::Approx(1.44));
}

TEST_CASE("weights stay positive and finite") {
  PlayerModel m(bundled_engine(), PlayerParams{});
  for (int i = 0; i < 100000; ++i) m.observe(landed(ActionId{static_cast<std::uint16_t>(i % 3 == 0 ? 0 : 2)}));
  for (double w : m.weights()) {
    REQUIRE(w > 0.0);
    REQUIRE(std::isfinite(w));
  }
  double total = 0;
  for (double p : m.probabilities()) total += p;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("without reinforcement frequencies match the weights") {
  const PlayerModel m(bundled_engine(), PlayerParams{});
  const auto probs = m.probabilities();
  std::vector<int> counts(probs.size(), 0);
  SeededRandom rng(5);
  const auto s = idle_at(350, 450);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[m.act(s, rng).index];
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double sigma = std::sqrt(n * probs[k] * (1 - probs[k]));
    CHECK(std::abs(counts[k] - n * probs[k]) <= 3 * sigma);
  }
}

TEST_CASE("an always-landing action takes over") {
  for (const char* name : {"RIGHT_PUNCH", "LEFT_PUNCH", "LEFT_KICK"}) {
    CAPTURE(name);
    PlayerModel m(bundled_engine(), PlayerParams{});
    const auto target = id_of(name);
    SeededRandom rng(31);
    const auto s = idle_at(350, 450);
    int decisions = 0;
    while (m.probabilities()[target.index] <= 0.9 && decisions < 200) {
      if (m.act(s, rng) == target) m.observe(landed(target));
      ++decisions;
    }
    CHECK(m.probabilities()[target.index] > 0.9);
  }
}

TEST_CASE("invalid parameters") {
  const auto& e = bundled_engine();
  PlayerParams p;
  p.side_bias = 1.5;
  CHECK_THROWS_AS(PlayerModel(e, p), ConfigError);
  p = {};
  p.reinforce_rate = -0.1;
  CHECK_THROWS_AS(PlayerModel(e, p), ConfigError);
  p = {};
  p.model = "pro";
  CHECK_THROWS_AS(PlayerModel(e, p), ConfigError);
  p = {};
  p.weights["IDLE"] = -1;
  CHECK_THROWS_AS(PlayerModel(e, p), ConfigError);
  p = {};
  p.weights["NOPE"] = 1;
  CHECK_THROWS_AS(PlayerModel(e, p), LookupError);
  p = {};
  p.attack_weight = 0;
  p.other_weight = 0;
  CHECK_THROWS_AS(PlayerModel(e, p), ConfigError);
}
