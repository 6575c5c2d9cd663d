#include "pda/mcts.hpp"

namespace pda {

void MctsConfig::validate() const {
  if (!(c >= 0.0)) throw ConfigError("mcts: c must be >= 0");
  if (n_max < 1) throw ConfigError("mcts: n_max must be >= 1");
  if (d_max < 1) throw ConfigError("mcts: d_max must be >= 1");
  if (t_sim < 1) throw ConfigError("mcts: t_sim must be >= 1");
  if (!(budget.value > 0.0)) throw ConfigError("mcts: budget must be positive");
}

double ucb1(double mean_reward, long visits, long parent_visits, double c) {
  if (visits == 0) return std::numeric_limits<double>::infinity();
  return mean_reward +
         c * std::sqrt(2.0 * std::log(static_cast<double>(parent_visits)) /
                       static_cast<double>(visits));
}

SearchResult search_engine(const Engine& engine, const GameState& state, Side side,
                           const MctsConfig& cfg, RandomSource& rng,
                           const RewardFn<GameState>& reward) {
  const EngineDomain domain(engine);
  return Mcts<EngineDomain>(domain, cfg).search(state, side, rng, reward);
}

}  // namespace pda
