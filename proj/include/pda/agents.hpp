#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pda/engine.hpp"
#include "pda/health.hpp"
#include "pda/mcts.hpp"
#include "pda/rng.hpp"

namespace pda {

/// Opponent policy driven by one match loop. Agents own their random
/// streams, all derived from the seed given at construction.
class Agent {
 public:
  virtual ~Agent() = default;

  /// "mcts", "pda" or "dda".
  virtual std::string_view kind() const = 0;
  /// Name used in reports.
  virtual std::string_view label() const = 0;

  /// The player committed to `motion_id`; `momenta` are the player's
  /// accumulated momenta before that motion is added.
  virtual void on_player_motion(std::string_view motion_id, bool effective,
                                const SegmentMomenta& momenta) {
    (void)motion_id;
    (void)effective;
    (void)momenta;
  }

  /// Picks the AI action; the AI must be at a decision point.
  virtual ActionId act(const GameState& state) = 0;

  virtual std::optional<double> pdr() const { return std::nullopt; }
};

// ---------------------------------------------------------------------------
// Plain MCTS opponent

ActionId act_mcts(const Engine& engine, const GameState& state, const MctsConfig& cfg,
                  RandomSource& rng);

class MctsAgent final : public Agent {
 public:
  MctsAgent(const Engine& engine, MctsConfig cfg, std::uint64_t seed);

  std::string_view kind() const override { return "mcts"; }
  std::string_view label() const override { return "MctsAI"; }
  ActionId act(const GameState& state) override;

 private:
  const Engine& engine_;
  MctsConfig cfg_;
  SeededRandom search_rng_;
};

// ---------------------------------------------------------------------------
// Player dominance adjustment

/// True when the gate lets the strong action through; a draw equal to the
/// dominance rate yields.
constexpr bool gate_is_strong(double r, double pdr) { return r > pdr; }

/// Zero-damage action that keeps the AI approaching and hittable. Outside
/// the player's longest attack reach it picks a move toward the player;
/// inside, any member of `harmless_set`. Throws ConfigError when the set is
/// empty or contains a damaging action.
ActionId harmless_action(const Engine& engine, const GameState& state,
                         const std::vector<ActionId>& harmless_set, RandomSource& rng);

void validate_harmless_set(const Engine& engine, const std::vector<ActionId>& harmless_set);

struct PdaAgentState {
  double pdr = 0.5;
  std::optional<std::string> last_motion;
  MctsConfig mcts_cfg;
  std::vector<ActionId> harmless_set;
};

/// Recomputes the dominance rate as the balancedness fitness of `motion`
/// among `candidate_motions`. Non-effective motions leave the state as is.
PdaAgentState on_player_motion(PdaAgentState agent, std::string_view motion, bool effective,
                               const SegmentMomenta& momenta, const M2MmTable& table,
                               const std::vector<std::string>& candidate_motions);

struct PdaParams {
  double initial_pdr = 0.5;
  std::vector<std::string> harmless_actions{"WALK_FWD", "RUSH", "IDLE"};
  /// Motions F_Bal is normalized over; empty means every damage-dealing
  /// motion of the roster.
  std::vector<std::string> fitness_motions;
  /// Pins the dominance rate (detections are then ignored).
  std::optional<double> forced_pdr;
};

class PdaAgent final : public Agent {
 public:
  PdaAgent(const Engine& engine, const M2MmTable& table, MctsConfig cfg, PdaParams params,
           std::uint64_t seed);
  /// Same, with the gate and harmless draws taken from `gate_rng`.
  PdaAgent(const Engine& engine, const M2MmTable& table, MctsConfig cfg, PdaParams params,
           std::uint64_t seed, std::unique_ptr<RandomSource> gate_rng);

  std::string_view kind() const override { return "pda"; }
  std::string_view label() const override { return "PDAHP-AI"; }
  void on_player_motion(std::string_view motion_id, bool effective,
                        const SegmentMomenta& momenta) override;
  ActionId act(const GameState& state) override;
  std::optional<double> pdr() const override { return state_.pdr; }

  const PdaAgentState& state() const { return state_; }
  /// Whether the most recent act() took the strong branch.
  bool last_was_strong() const { return last_strong_; }

 private:
  const Engine& engine_;
  const M2MmTable& table_;
  PdaAgentState state_;
  std::vector<std::string> candidates_;
  bool forced_ = false;
  bool last_strong_ = false;
  SeededRandom search_rng_;
  std::unique_ptr<RandomSource> gate_rng_;
};

// ---------------------------------------------------------------------------
// DDA-like baseline: MCTS steering the HP difference toward a target.

struct DdaAgentState {
  MctsConfig mcts_cfg;
  int target_hp_gap = 0;
};

/// -|hp_diff(after) - target|, independent of the searching side.
double dda_reward(const GameState& after, int target_hp_gap);

ActionId act_dda(const Engine& engine, const DdaAgentState& agent, const GameState& state,
                 RandomSource& rng);

class DdaAgent final : public Agent {
 public:
  DdaAgent(const Engine& engine, MctsConfig cfg, int target_hp_gap, std::uint64_t seed);

  std::string_view kind() const override { return "dda"; }
  std::string_view label() const override { return "DDA-like"; }
  ActionId act(const GameState& state) override;

 private:
  const Engine& engine_;
  DdaAgentState state_;
  SeededRandom search_rng_;
};

struct AgentSpec {
  std::string kind = "mcts";  // "mcts" | "pda" | "dda"
  MctsConfig mcts;
  PdaParams pda;
  int dda_target_hp_gap = 0;
};

/// Throws ConfigError for unknown kinds or invalid parameters.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const Engine& engine,
                                  const M2MmTable& table, std::uint64_t seed);

}  // namespace pda
