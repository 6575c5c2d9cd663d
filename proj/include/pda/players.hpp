#pragma once

// Synthetic players: weighted random action choice with a right-side bias,
// plus multiplicative reinforcement of attacks that land.

#include <map>
#include <string>
#include <vector>

#include "pda/engine.hpp"
#include "pda/rng.hpp"

namespace pda {

struct PlayerParams {
  std::string model = "biased";  // "biased" | "uniform"
  double side_bias = 0.8;        // share of attack mass on right-side attacks
  double reinforce_rate = 0.2;
  double attack_weight = 1.0;    // mean initial weight of an attack
  double other_weight = 0.25;    // initial weight of every non-attack action
  std::map<std::string, double> weights;  // explicit per-action overrides
  bool approach = true;  // walk in when farther than the longest attack reach
};

class PlayerModel {
 public:
  /// Throws ConfigError on negative or non-finite weights, β outside
  /// [0, 1], negative α, or when every weight is zero.
  PlayerModel(const Engine& engine, const PlayerParams& params);

  const std::vector<double>& weights() const { return weights_; }
  double weight(ActionId a) const { return weights_[a.index]; }
  double reinforce_rate() const { return alpha_; }

  /// Normalized selection probabilities over the whole roster.
  std::vector<double> probabilities() const;

  /// Action for the next frame: the ongoing action when busy, otherwise a
  /// weighted draw (restricted to forward moves while out of reach).
  ActionId act(const GameState& state, RandomSource& rng) const;

  /// Landed player hits multiply that action's weight by (1 + α).
  void observe(const HitEvent& event);

 private:
  void renormalize();

  const Engine* engine_;
  std::vector<double> weights_;
  double alpha_ = 0.2;
  bool approach_ = true;
};

/// True for actions whose id marks them as right-side ("RIGHT_...").
bool is_right_side(const ActionSpec& spec);
bool is_left_side(const ActionSpec& spec);

}  // namespace pda
