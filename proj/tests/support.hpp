#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "pda/engine.hpp"
#include "pda/health.hpp"
#include "pda/mcts.hpp"

namespace pda::testing {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline const M2MmTable& bundled_table() {
  static const M2MmTable t = default_m2mm();
  return t;
}

inline const Engine& bundled_engine() {
  static const Engine e = [] {
    auto cfg = default_roster();
    return Engine(cfg.roster, cfg.rules, bundled_table());
  }();
  return e;
}

inline ActionId id_of(std::string_view name) { return bundled_engine().roster().id_of(name); }

/// Both sides idle at the given positions, full HP.
inline GameState idle_at(int player_x, int ai_x, const Engine& e = bundled_engine()) {
  GameState s = e.new_match(0);
  s.player.x = player_x;
  s.ai.x = ai_x;
  return s;
}

/// Puts `c` in the middle of a long action so it makes no decision for a
/// while.
inline void busy(CharacterState& c, ActionId action, int frames = 10000) {
  c.current_action = action;
  c.phase = Phase::Recovery;
  c.phase_frames_left = frames;
  c.contact_made = true;
}

/// One-decision game: the searching side picks an action once, the payoff
/// of that action is the reward, nothing else happens.
struct OnePlyDomain {
  struct State {
    int chosen = -1;
  };
  std::vector<double> payoffs;

  std::size_t action_count() const { return payoffs.size(); }
  bool awaiting_decision(const State& s, Side side) const { return side == Side::Ai && s.chosen < 0; }
  ActionId ongoing_action(const State& s, Side) const {
    return ActionId{static_cast<std::uint16_t>(s.chosen < 0 ? 0 : s.chosen)};
  }
  void advance_frame(State& s, ActionId, ActionId ai) const {
    if (s.chosen < 0) s.chosen = ai.index;
  }
  bool finished(const State& s) const { return s.chosen >= 0; }

  RewardFn<State> reward() const {
    return [this](const State&, const State& after, Side) { return payoffs[static_cast<std::size_t>(after.chosen)]; };
  }
};

}  // namespace pda::testing
