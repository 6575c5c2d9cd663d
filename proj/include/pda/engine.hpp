#pragma once

// Frame-stepped 1-D two-character fighting game.
//
// Both characters share one action roster. A character picks an action only
// when idle; once begun, the action runs through its startup, active and
// recovery frames without interruption.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pda/health.hpp"

namespace pda {

inline constexpr int kMaxHp = 150;

enum class Side : std::uint8_t { Player, Ai };
enum class ActionKind : std::uint8_t { Attack, Move, Guard, Idle };
enum class Height : std::uint8_t { High, Low, None };
enum class Phase : std::uint8_t { Startup, Active, Recovery, Idle };
enum class Winner : std::uint8_t { Player, Ai, Draw };

constexpr Side opponent(Side s) { return s == Side::Player ? Side::Ai : Side::Player; }

std::string_view to_string(Side s);
std::string_view to_string(ActionKind k);
std::string_view to_string(Height h);
std::string_view to_string(Phase p);
std::string_view to_string(Winner w);
Winner winner_from_string(std::string_view s);

/// Index of an action in its roster. Lower index wins tie-breaks.
struct ActionId {
  std::uint16_t index = 0;
  auto operator<=>(const ActionId&) const = default;
};

struct ActionSpec {
  std::string id;
  std::string motion_id;
  ActionKind kind = ActionKind::Idle;
  int damage = 0;
  int reach = 0;
  Height height = Height::None;
  int startup_frames = 0;
  int active_frames = 0;
  int recovery_frames = 0;
  int move_speed = 0;  // positive moves toward the opponent

  int total_frames() const { return startup_frames + active_frames + recovery_frames; }
  bool is_effective() const { return damage > 0; }
};

class ActionRoster {
 public:
  ActionRoster() = default;
  /// Validates the per-action invariants and name uniqueness.
  explicit ActionRoster(std::vector<ActionSpec> actions);

  std::size_t size() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  const ActionSpec& operator[](ActionId id) const { return actions_[id.index]; }
  const std::vector<ActionSpec>& actions() const { return actions_; }

  std::optional<ActionId> find(std::string_view name) const;
  /// Throws LookupError for unknown names.
  ActionId id_of(std::string_view name) const;

  /// Largest reach over damage-dealing actions.
  int max_attack_reach() const;
  /// Motion ids of damage-dealing actions, deduplicated, roster order.
  std::vector<std::string> effective_motions() const;

  /// Throws ConfigError naming the first action whose motion is missing.
  void validate_motions(const M2MmTable& table) const;

 private:
  std::vector<ActionSpec> actions_;
};

struct MatchRules {
  int arena_width = 800;
  int round_frame_limit = 3600;
  int player_spawn = 200;
  int ai_spawn = 600;
  int min_distance = 40;  // bodies cannot overlap closer than this
  /// When positive, a landed hit cuts the defender's startup/active frames
  /// short: it goes straight to recovery for at least this many frames.
  /// The interrupted action stays current, so no decision is requested.
  int hit_recovery_frames = 0;

  void validate() const;
};

struct CharacterState {
  int hp = kMaxHp;
  int x = 0;
  std::optional<ActionId> current_action;
  Phase phase = Phase::Idle;
  int phase_frames_left = 0;
  Height guard_height = Height::None;
  bool contact_made = false;  // the current attack already hit or was blocked

  bool operator==(const CharacterState&) const = default;
};

struct GameState {
  int frame = 0;
  CharacterState player;
  CharacterState ai;
  int round_frame_limit = 0;
  std::uint64_t rng_seed = 0;

  CharacterState& side(Side s) { return s == Side::Player ? player : ai; }
  const CharacterState& side(Side s) const { return s == Side::Player ? player : ai; }
  int distance() const { return ai.x > player.x ? ai.x - player.x : player.x - ai.x; }

  bool operator==(const GameState&) const = default;
};

/// Stable 64-bit digest of every field, for trace comparisons.
std::uint64_t state_hash(const GameState& state);

struct HitEvent {
  Side attacker = Side::Player;
  ActionId action;
  int damage_dealt = 0;
  bool blocked = false;
};

struct RoundOutcome {
  Winner winner = Winner::Draw;
  int hp_diff = 0;
  int end_frame = 0;
  double bal_end = 1.0;
};

struct StepResult {
  GameState state;
  std::vector<HitEvent> events;
};

/// A validated roster and rule set. Immutable once built and safe to share
/// between concurrent matches.
class Engine {
 public:
  /// Throws ConfigError if the roster is empty, the rules are inconsistent,
  /// or an action references a motion missing from `table`.
  Engine(ActionRoster roster, MatchRules rules, const M2MmTable& table);

  const ActionRoster& roster() const { return roster_; }
  const MatchRules& rules() const { return rules_; }

  GameState new_match(std::uint64_t seed) const;

  bool awaiting_decision(const GameState& state, Side side) const {
    return state.side(side).phase == Phase::Idle;
  }

  /// Whole roster when idle, otherwise only the action in progress.
  std::vector<ActionId> legal_actions(const GameState& state, Side side) const;
  bool is_legal(const GameState& state, Side side, ActionId action) const;

  /// Advances exactly one frame. Throws ContractViolation on illegal
  /// actions or when the round is already over.
  StepResult step(const GameState& state, ActionId player_action, ActionId ai_action) const;

  /// In-place form of step used on hot paths; events are appended when
  /// `events` is non-null. Legality is the caller's responsibility.
  void advance(GameState& state, ActionId player_action, ActionId ai_action,
               std::vector<HitEvent>* events) const;

  /// Action a side will execute next frame when it has no choice to make.
  ActionId ongoing_action(const GameState& state, Side side) const {
    return *state.side(side).current_action;
  }

  std::optional<RoundOutcome> is_round_over(const GameState& state) const;

 private:
  void begin_action(CharacterState& c, ActionId action) const;
  void advance_phase(CharacterState& c) const;
  void apply_movement(GameState& state) const;
  void knock_into_recovery(CharacterState& c) const;

  ActionRoster roster_;
  MatchRules rules_;
};

int hp_diff(const GameState& state);

/// Roster and rules from the JSON configuration format described in the
/// README (`{"rules": {...}, "actions": [...]}`).
struct RosterConfig {
  ActionRoster roster;
  MatchRules rules;
};
RosterConfig parse_roster_json(std::string_view text, std::string_view source = "<string>");
RosterConfig load_roster_json(const std::filesystem::path& path);

std::filesystem::path default_data_dir();
/// Bundled roster/rules and M2Mm table.
RosterConfig default_roster();
M2MmTable default_m2mm();

}  // namespace pda
