#include "pda/players.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pda/errors.hpp"

namespace pda {

namespace {

// Weights are rescaled once their sum leaves this band; positive weights are
// kept above kFloor * sum so they never underflow to zero.
constexpr double kRescaleAbove = 1e100;
constexpr double kFloor = 1e-12;

}  // namespace

bool is_right_side(const ActionSpec& spec) { return spec.id.rfind("RIGHT_", 0) == 0; }
bool is_left_side(const ActionSpec& spec) { return spec.id.rfind("LEFT_", 0) == 0; }

PlayerModel::PlayerModel(const Engine& engine, const PlayerParams& params)
    : engine_(&engine), alpha_(params.reinforce_rate), approach_(params.approach) {
  if (!(params.side_bias >= 0.0 && params.side_bias <= 1.0))
    throw ConfigError("player: side_bias must lie in [0, 1]");
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_))
    throw ConfigError("player: reinforce_rate must be >= 0");
  if (params.model != "biased" && params.model != "uniform")
    throw ConfigError("player: unknown model '" + params.model + "'");

  const auto& roster = engine.roster();
  weights_.assign(roster.size(), 0.0);
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const auto& spec = roster.actions()[i];
    double w = params.other_weight;
    if (params.model == "uniform") {
      w = 1.0;
    } else if (spec.is_effective()) {
      w = params.attack_weight;
      if (is_right_side(spec)) w *= 2.0 * params.side_bias;
      if (is_left_side(spec)) w *= 2.0 * (1.0 - params.side_bias);
    }
    weights_[i] = w;
  }
  for (const auto& [name, w] : params.weights) weights_[roster.id_of(name).index] = w;

  for (double w : weights_)
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("player: weights must be finite and >= 0");
  if (std::accumulate(weights_.begin(), weights_.end(), 0.0) <= 0.0)
    throw ConfigError("player: all weights are zero");
}

std::vector<double> PlayerModel::probabilities() const {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  std::vector<double> p(weights_.size());
  std::transform(weights_.begin(), weights_.end(), p.begin(), [total](double w) { return w / total; });
  return p;
}

ActionId PlayerModel::act(const GameState& state, RandomSource& rng) const {
  if (!engine_->awaiting_decision(state, Side::Player))
    return engine_->ongoing_action(state, Side::Player);

  const auto& roster = engine_->roster();
  std::vector<double> mass = weights_;
  if (approach_ && state.distance() > roster.max_attack_reach()) {
    bool any = false;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      const auto& spec = roster.actions()[i];
      const bool forward = spec.kind == ActionKind::Move && spec.move_speed > 0;
      if (!forward) mass[i] = 0.0;
      any = any || (forward && mass[i] > 0.0);
    }
    if (!any) mass = weights_;
  }

  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  const double u = rng.uniform01() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    last_positive = i;
    cum += mass[i];
    if (u < cum) return ActionId{static_cast<std::uint16_t>(i)};
  }
  return ActionId{static_cast<std::uint16_t>(last_positive)};
}

void PlayerModel::observe(const HitEvent& event) {
  if (event.attacker != Side::Player || event.damage_dealt <= 0) return;
  weights_[event.action.index] *= 1.0 + alpha_;
  renormalize();
}

void PlayerModel::renormalize() {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (total <= kRescaleAbove) return;
  for (double& w : weights_)
    if (w > 0.0) w = std::max(w / total, kFloor);
}

}  // namespace pda
