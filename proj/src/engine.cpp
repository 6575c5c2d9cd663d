#include "pda/engine.hpp"

#include <algorithm>
#include <unordered_set>

#include "pda/errors.hpp"

namespace pda {

std::string_view to_string(Side s) { return s == Side::Player ? "PLAYER" : "AI"; }

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Attack: return "ATTACK";
    case ActionKind::Move: return "MOVE";
    case ActionKind::Guard: return "GUARD";
    case ActionKind::Idle: return "IDLE";
  }
  return "?";
}

std::string_view to_string(Height h) {
  switch (h) {
    case Height::High: return "HIGH";
    case Height::Low: return "LOW";
    case Height::None: return "NONE";
  }
  return "?";
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Startup: return "STARTUP";
    case Phase::Active: return "ACTIVE";
    case Phase::Recovery: return "RECOVERY";
    case Phase::Idle: return "IDLE";
  }
  return "?";
}

std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::Player: return "PLAYER";
    case Winner::Ai: return "AI";
    case Winner::Draw: return "DRAW";
  }
  return "?";
}

Winner winner_from_string(std::string_view s) {
  if (s == "PLAYER") return Winner::Player;
  if (s == "AI") return Winner::Ai;
  if (s == "DRAW") return Winner::Draw;
  throw LookupError("unknown winner '" + std::string(s) + "'");
}

ActionRoster::ActionRoster(std::vector<ActionSpec> actions) : actions_(std::move(actions)) {
  if (actions_.size() > 0xFFFF) throw ConfigError("roster too large");
  std::unordered_set<std::string> seen;
  for (const auto& a : actions_) {
    const std::string where = "action '" + a.id + "': ";
    if (a.id.empty()) throw ConfigError("action with empty id");
    if (!seen.insert(a.id).second) throw ConfigError(where + "duplicate id");
    if (a.motion_id.empty()) throw ConfigError(where + "empty motion_id");
    if (a.damage < 0) throw ConfigError(where + "negative damage");
    if (a.damage > 0 && a.kind != ActionKind::Attack)
      throw ConfigError(where + "only ATTACK actions may deal damage");
    if (a.startup_frames < 0 || a.active_frames < 0 || a.recovery_frames < 0)
      throw ConfigError(where + "negative frame count");
    if (a.total_frames() < 1) throw ConfigError(where + "action must last at least one frame");
    if (a.reach < 0) throw ConfigError(where + "negative reach");
    if (a.move_speed != 0 && a.kind != ActionKind::Move)
      throw ConfigError(where + "only MOVE actions may have a move_speed");
    if (a.kind == ActionKind::Move && a.active_frames < 1)
      throw ConfigError(where + "MOVE actions need active frames");
  }
}

std::optional<ActionId> ActionRoster::find(std::string_view name) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i].id == name) return ActionId{static_cast<std::uint16_t>(i)};
  return std::nullopt;
}

ActionId ActionRoster::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw LookupError("unknown action '" + std::string(name) + "'");
}

int ActionRoster::max_attack_reach() const {
  int reach = 0;
  for (const auto& a : actions_)
    if (a.is_effective()) reach = std::max(reach, a.reach);
  return reach;
}

std::vector<std::string> ActionRoster::effective_motions() const {
  std::vector<std::string> out;
  for (const auto& a : actions_)
    if (a.is_effective() && std::find(out.begin(), out.end(), a.motion_id) == out.end())
      out.push_back(a.motion_id);
  return out;
}

void ActionRoster::validate_motions(const M2MmTable& table) const {
  for (const auto& a : actions_)
    if (!table.contains(a.motion_id))
      throw ConfigError("action '" + a.id + "' references unknown motion_id '" + a.motion_id +
                        "'");
}

void MatchRules::validate() const {
  if (arena_width <= 0) throw ConfigError("arena_width must be positive");
  if (round_frame_limit <= 0) throw ConfigError("round_frame_limit must be positive");
  if (min_distance < 0 || min_distance > arena_width)
    throw ConfigError("min_distance must lie in [0, arena_width]");
  if (player_spawn < 0 || player_spawn > arena_width || ai_spawn < 0 || ai_spawn > arena_width)
    throw ConfigError("spawn positions must lie inside the arena");
  if (std::abs(ai_spawn - player_spawn) < min_distance)
    throw ConfigError("spawn positions closer than min_distance");
}

std::uint64_t state_hash(const GameState& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_char = [&mix](const CharacterState& c) {
    mix(static_cast<std::uint64_t>(c.hp));
    mix(static_cast<std::uint64_t>(c.x));
    mix(c.current_action ? c.current_action->index : 0xFFFFFFFFULL);
    mix(static_cast<std::uint64_t>(c.phase));
    mix(static_cast<std::uint64_t>(c.phase_frames_left));
    mix(static_cast<std::uint64_t>(c.guard_height));
    mix(c.contact_made ? 1 : 0);
  };
  mix(static_cast<std::uint64_t>(s.frame));
  mix_char(s.player);
  mix_char(s.ai);
  mix(static_cast<std::uint64_t>(s.round_frame_limit));
  mix(s.rng_seed);
  return h;
}

Engine::Engine(ActionRoster roster, MatchRules rules, const M2MmTable& table)
    : roster_(std::move(roster)), rules_(rules) {
  if (roster_.empty()) throw ConfigError("action roster is empty");
  rules_.validate();
  roster_.validate_motions(table);
}

GameState Engine::new_match(std::uint64_t seed) const {
  GameState s;
  s.round_frame_limit = rules_.round_frame_limit;
  s.rng_seed = seed;
  s.player.x = rules_.player_spawn;
  s.ai.x = rules_.ai_spawn;
  return s;
}

std::vector<ActionId> Engine::legal_actions(const GameState& state, Side side) const {
  const auto& c = state.side(side);
  if (c.phase != Phase::Idle) return {*c.current_action};
  std::vector<ActionId> out(roster_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ActionId{static_cast<std::uint16_t>(i)};
  return out;
}

bool Engine::is_legal(const GameState& state, Side side, ActionId action) const {
  const auto& c = state.side(side);
  if (c.phase != Phase::Idle) return c.current_action == action;
  return action.index < roster_.size();
}

StepResult Engine::step(const GameState& state, ActionId player_action, ActionId ai_action) const {
  if (state.frame >= state.round_frame_limit || state.player.hp == 0 || state.ai.hp == 0)
    throw ContractViolation("step: round is already over");
  if (!is_legal(state, Side::Player, player_action))
    throw ContractViolation("step: illegal player action");
  if (!is_legal(state, Side::Ai, ai_action)) throw ContractViolation("step: illegal AI action");
  StepResult r{state, {}};
  advance(r.state, player_action, ai_action, &r.events);
  return r;
}

void Engine::begin_action(CharacterState& c, ActionId action) const {
  const auto& spec = roster_[action];
  c.current_action = action;
  c.contact_made = false;
  if (spec.startup_frames > 0) {
    c.phase = Phase::Startup;
    c.phase_frames_left = spec.startup_frames;
  } else if (spec.active_frames > 0) {
    c.phase = Phase::Active;
    c.phase_frames_left = spec.active_frames;
  } else {
    c.phase = Phase::Recovery;
    c.phase_frames_left = spec.recovery_frames;
  }
}

void Engine::advance_phase(CharacterState& c) const {
  if (c.phase == Phase::Idle) return;
  if (--c.phase_frames_left > 0) return;
  const auto& spec = roster_[*c.current_action];
  if (c.phase == Phase::Startup && spec.active_frames > 0) {
    c.phase = Phase::Active;
    c.phase_frames_left = spec.active_frames;
    return;
  }
  if (c.phase != Phase::Recovery && spec.recovery_frames > 0) {
    c.phase = Phase::Recovery;
    c.phase_frames_left = spec.recovery_frames;
    return;
  }
  c.phase = Phase::Idle;
  c.phase_frames_left = 0;
  c.current_action.reset();
  c.contact_made = false;
}

void Engine::knock_into_recovery(CharacterState& c) const {
  const auto& spec = roster_[*c.current_action];
  // +1: the frame counter is decremented at the end of this same frame.
  const int frames = std::max(spec.recovery_frames, rules_.hit_recovery_frames) + 1;
  if (c.phase == Phase::Recovery && c.phase_frames_left >= frames) return;
  c.phase = Phase::Recovery;
  c.phase_frames_left = frames;
  c.guard_height = Height::None;
}

void Engine::apply_movement(GameState& s) const {
  const bool player_left = s.player.x <= s.ai.x;
  auto displacement = [&](const CharacterState& self, bool self_left) {
    if (self.phase != Phase::Active) return 0;
    const auto& spec = roster_[*self.current_action];
    if (spec.kind != ActionKind::Move) return 0;
    return self_left ? spec.move_speed : -spec.move_speed;
  };
  const int dp = displacement(s.player, player_left);
  const int da = displacement(s.ai, !player_left);
  if (dp == 0 && da == 0) return;

  int left = (player_left ? s.player.x : s.ai.x) + (player_left ? dp : da);
  int right = (player_left ? s.ai.x : s.player.x) + (player_left ? da : dp);
  const int w = rules_.arena_width;
  left = std::clamp(left, 0, w);
  right = std::clamp(right, 0, w);
  if (right - left < rules_.min_distance) {
    // Bodies collide: centre the pair on the contact point, then keep it
    // inside the arena.
    const int mid = (left + right) / 2;
    left = mid - rules_.min_distance / 2;
    right = left + rules_.min_distance;
    if (left < 0) {
      left = 0;
      right = rules_.min_distance;
    } else if (right > w) {
      right = w;
      left = w - rules_.min_distance;
    }
  }
  (player_left ? s.player.x : s.ai.x) = left;
  (player_left ? s.ai.x : s.player.x) = right;
}

void Engine::advance(GameState& s, ActionId player_action, ActionId ai_action,
                     std::vector<HitEvent>* events) const {
  if (s.player.phase == Phase::Idle) begin_action(s.player, player_action);
  if (s.ai.phase == Phase::Idle) begin_action(s.ai, ai_action);

  for (CharacterState* c : {&s.player, &s.ai}) {
    const auto& spec = roster_[*c->current_action];
    c->guard_height =
        (spec.kind == ActionKind::Guard && c->phase == Phase::Active) ? spec.height : Height::None;
  }

  apply_movement(s);

  // Resolve both attackers against the pre-hit state so trades are symmetric.
  const int distance = s.distance();
  int damage_to[2] = {0, 0};  // indexed by defender: 0 player, 1 ai
  for (Side attacker : {Side::Player, Side::Ai}) {
    CharacterState& a = s.side(attacker);
    if (a.phase != Phase::Active || a.contact_made) continue;
    const auto& spec = roster_[*a.current_action];
    if (spec.kind != ActionKind::Attack || distance > spec.reach) continue;
    const CharacterState& d = s.side(opponent(attacker));
    const bool blocked = spec.height != Height::None && d.guard_height == spec.height;
    const int dealt = blocked ? 0 : spec.damage;
    a.contact_made = true;
    damage_to[attacker == Side::Player ? 1 : 0] += dealt;
    if (events) events->push_back({attacker, *a.current_action, dealt, blocked});
  }
  s.player.hp = std::max(0, s.player.hp - damage_to[0]);
  s.ai.hp = std::max(0, s.ai.hp - damage_to[1]);
  if (rules_.hit_recovery_frames > 0) {
    if (damage_to[0] > 0) knock_into_recovery(s.player);
    if (damage_to[1] > 0) knock_into_recovery(s.ai);
  }

  advance_phase(s.player);
  advance_phase(s.ai);
  ++s.frame;
}

std::optional<RoundOutcome> Engine::is_round_over(const GameState& s) const {
  const bool ko = s.player.hp == 0 || s.ai.hp == 0;
  if (!ko && s.frame < s.round_frame_limit) return std::nullopt;
  RoundOutcome o;
  o.hp_diff = hp_diff(s);
  o.end_frame = s.frame;
  if (o.hp_diff > 0)
    o.winner = Winner::Player;
  else if (o.hp_diff < 0)
    o.winner = Winner::Ai;
  else
    o.winner = Winner::Draw;
  return o;
}

int hp_diff(const GameState& state) { return state.player.hp - state.ai.hp; }

}  // namespace pda
