#include "pda/agents.hpp"

#include <cmath>

#include "pda/errors.hpp"

namespace pda {

namespace {

constexpr std::string_view kSearchStream = "search";
constexpr std::string_view kGateStream = "gate";

}  // namespace

ActionId act_mcts(const Engine& engine, const GameState& state, const MctsConfig& cfg,
                  RandomSource& rng) {
  return search_engine(engine, state, Side::Ai, cfg, rng).action;
}

MctsAgent::MctsAgent(const Engine& engine, MctsConfig cfg, std::uint64_t seed)
    : engine_(engine), cfg_(cfg), search_rng_(derive_seed(seed, kSearchStream)) {
  cfg_.validate();
}

ActionId MctsAgent::act(const GameState& state) {
  return act_mcts(engine_, state, cfg_, search_rng_);
}

void validate_harmless_set(const Engine& engine, const std::vector<ActionId>& harmless_set) {
  if (harmless_set.empty()) throw ConfigError("harmless action set is empty");
  for (ActionId a : harmless_set) {
    if (a.index >= engine.roster().size()) throw ConfigError("harmless action outside roster");
    if (engine.roster()[a].damage > 0)
      throw ConfigError("harmless action '" + engine.roster()[a].id + "' deals damage");
  }
}

ActionId harmless_action(const Engine& engine, const GameState& state,
                         const std::vector<ActionId>& harmless_set, RandomSource& rng) {
  validate_harmless_set(engine, harmless_set);
  if (state.distance() > engine.roster().max_attack_reach()) {
    std::vector<ActionId> approach;
    for (ActionId a : harmless_set) {
      const auto& spec = engine.roster()[a];
      if (spec.kind == ActionKind::Move && spec.move_speed > 0) approach.push_back(a);
    }
    if (!approach.empty()) return approach[rng.index(approach.size())];
  }
  return harmless_set[rng.index(harmless_set.size())];
}

PdaAgentState on_player_motion(PdaAgentState agent, std::string_view motion, bool effective,
                               const SegmentMomenta& momenta, const M2MmTable& table,
                               const std::vector<std::string>& candidate_motions) {
  if (!table.contains(motion))
    throw LookupError("unknown motion '" + std::string(motion) + "'");
  if (!effective) return agent;
  const auto fitness = fbal(momenta, candidate_motions, table);
  agent.pdr = fitness.at(motion).f_bal;
  agent.last_motion = std::string(motion);
  return agent;
}

PdaAgent::PdaAgent(const Engine& engine, const M2MmTable& table, MctsConfig cfg,
                   PdaParams params, std::uint64_t seed)
    : PdaAgent(engine, table, cfg, std::move(params), seed,
               std::make_unique<SeededRandom>(derive_seed(seed, kGateStream))) {}

PdaAgent::PdaAgent(const Engine& engine, const M2MmTable& table, MctsConfig cfg,
                   PdaParams params, std::uint64_t seed, std::unique_ptr<RandomSource> gate_rng)
    : engine_(engine),
      table_(table),
      search_rng_(derive_seed(seed, kSearchStream)),
      gate_rng_(std::move(gate_rng)) {
  cfg.validate();
  const double initial = params.forced_pdr.value_or(params.initial_pdr);
  if (!(initial >= 0.0 && initial <= 1.0))
    throw ConfigError("pda: dominance rate must lie in [0, 1]");
  state_.pdr = initial;
  state_.mcts_cfg = cfg;
  forced_ = params.forced_pdr.has_value();
  for (const auto& name : params.harmless_actions) {
    const auto id = engine.roster().find(name);
    if (!id) throw ConfigError("pda: unknown harmless action '" + name + "'");
    state_.harmless_set.push_back(*id);
  }
  validate_harmless_set(engine, state_.harmless_set);
  candidates_ = params.fitness_motions.empty() ? engine.roster().effective_motions()
                                               : params.fitness_motions;
  if (candidates_.empty()) throw ConfigError("pda: no candidate motions for fitness");
  for (const auto& m : candidates_)
    if (!table.contains(m)) throw ConfigError("pda: fitness motion '" + m + "' not in M2Mm table");
}

void PdaAgent::on_player_motion(std::string_view motion_id, bool effective,
                                const SegmentMomenta& momenta) {
  if (forced_) return;
  state_ = pda::on_player_motion(std::move(state_), motion_id, effective, momenta, table_,
                                 candidates_);
}

ActionId PdaAgent::act(const GameState& state) {
  const double r = gate_rng_->uniform01();
  last_strong_ = gate_is_strong(r, state_.pdr);
  if (last_strong_) return act_mcts(engine_, state, state_.mcts_cfg, search_rng_);
  return harmless_action(engine_, state, state_.harmless_set, *gate_rng_);
}

double dda_reward(const GameState& after, int target_hp_gap) {
  return -std::abs(static_cast<double>(hp_diff(after) - target_hp_gap));
}

ActionId act_dda(const Engine& engine, const DdaAgentState& agent, const GameState& state,
                 RandomSource& rng) {
  const int target = agent.target_hp_gap;
  const RewardFn<GameState> reward = [target](const GameState&, const GameState& after, Side) {
    return dda_reward(after, target);
  };
  return search_engine(engine, state, Side::Ai, agent.mcts_cfg, rng, reward).action;
}

DdaAgent::DdaAgent(const Engine& engine, MctsConfig cfg, int target_hp_gap, std::uint64_t seed)
    : engine_(engine), state_{cfg, target_hp_gap}, search_rng_(derive_seed(seed, kSearchStream)) {
  cfg.validate();
}

ActionId DdaAgent::act(const GameState& state) {
  return act_dda(engine_, state_, state, search_rng_);
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const Engine& engine,
                                  const M2MmTable& table, std::uint64_t seed) {
  if (spec.kind == "mcts") return std::make_unique<MctsAgent>(engine, spec.mcts, seed);
  if (spec.kind == "pda") return std::make_unique<PdaAgent>(engine, table, spec.mcts, spec.pda, seed);
  if (spec.kind == "dda")
    return std::make_unique<DdaAgent>(engine, spec.mcts, spec.dda_target_hp_gap, seed);
  throw ConfigError("unknown agent kind '" + spec.kind + "'");
}

}  // namespace pda
