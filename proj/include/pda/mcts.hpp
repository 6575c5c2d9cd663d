#pragma once

// Open-loop Monte-Carlo tree search.
//
// Nodes are keyed by the searching side's action sequence only; game states
// are never stored in the tree. Each iteration replays the path from the
// root state, so opponent randomness is averaged into the node statistics.

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pda/engine.hpp"
#include "pda/errors.hpp"
#include "pda/rng.hpp"

namespace pda {

struct MctsBudget {
  enum class Mode { Iterations, WallClockMs };
  Mode mode = Mode::Iterations;
  double value = 1000;
};

struct MctsConfig {
  double c = 0.42;
  int n_max = 7;
  int d_max = 3;
  int t_sim = 60;
  MctsBudget budget{};

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// UCB1 selection value; +inf for unvisited children.
double ucb1(double mean_reward, long visits, long parent_visits, double c);

/// HP-change reward from the searching side's perspective.
constexpr double hp_eval(int before_my_hp, int after_my_hp, int before_opp_hp, int after_opp_hp) {
  return static_cast<double>((after_my_hp - before_my_hp) - (after_opp_hp - before_opp_hp));
}

/// Anything the search can play: a copyable state advanced one frame at a
/// time with one action per side, where a side may only choose when idle.
template <class D>
concept SearchDomain = requires(const D& d, typename D::State& s, const typename D::State& cs,
                                ActionId a, Side side) {
  { d.action_count() } -> std::convertible_to<std::size_t>;
  { d.awaiting_decision(cs, side) } -> std::convertible_to<bool>;
  { d.ongoing_action(cs, side) } -> std::convertible_to<ActionId>;
  { d.advance_frame(s, a, a) };
  { d.finished(cs) } -> std::convertible_to<bool>;
};

template <class State>
using RewardFn = std::function<double(const State& before, const State& after, Side me)>;

/// Reward used by the plain search: my HP change minus the opponent's.
inline double hp_reward(const GameState& before, const GameState& after, Side me) {
  const Side opp = opponent(me);
  return hp_eval(before.side(me).hp, after.side(me).hp, before.side(opp).hp, after.side(opp).hp);
}

struct MctsNode {
  std::optional<ActionId> action;  // none for the root
  long visits = 0;
  double total_reward = 0.0;
  int depth = 0;
  std::size_t first_child = 0;
  std::size_t child_count = 0;
  long visits_at_expansion = 0;  // visits credited before children existed

  double mean_reward() const { return visits > 0 ? total_reward / static_cast<double>(visits) : 0.0; }
  bool expanded() const { return child_count > 0; }
};

/// Flat node storage; siblings are contiguous because expansion creates all
/// children of a node at once.
class MctsTree {
 public:
  std::vector<MctsNode> nodes;

  const MctsNode& root() const { return nodes.front(); }

  /// Every expanded node's visits equal the visits it had at expansion plus
  /// the visits of its children. Returns false on the first mismatch.
  bool conservation_holds() const {
    for (const auto& n : nodes) {
      if (!n.expanded()) continue;
      long sum = 0;
      for (std::size_t i = 0; i < n.child_count; ++i) sum += nodes[n.first_child + i].visits;
      if (n.visits != n.visits_at_expansion + sum) return false;
    }
    return true;
  }
};

struct SearchResult {
  ActionId action;
  long iterations = 0;
  MctsTree tree;
};

template <SearchDomain D>
class Mcts {
 public:
  using State = typename D::State;

  Mcts(const D& domain, MctsConfig cfg) : domain_(domain), cfg_(cfg) { cfg_.validate(); }

  SearchResult search(const State& root_state, Side me, RandomSource& rng,
                      const RewardFn<State>& reward) const {
    const std::size_t k = domain_.action_count();
    if (k == 0) throw ContractViolation("search: no legal actions");
    if (!domain_.awaiting_decision(root_state, me))
      throw ContractViolation("search: side is not at a decision point");

    SearchResult out;
    auto& nodes = out.tree.nodes;
    nodes.reserve(1024);
    nodes.push_back(MctsNode{});
    expand(nodes, 0);

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::size_t> path;
    std::vector<ActionId> plan;
    path.reserve(static_cast<std::size_t>(cfg_.d_max) + 2);
    plan.reserve(static_cast<std::size_t>(cfg_.d_max) + 1);

    while (!budget_exhausted(out.iterations, start)) {
      path.clear();
      plan.clear();
      std::size_t cur = 0;
      path.push_back(cur);
      while (nodes[cur].expanded()) {
        cur = select_child(nodes, cur);
        path.push_back(cur);
        plan.push_back(*nodes[cur].action);
      }
      if (nodes[cur].depth < cfg_.d_max && nodes[cur].visits > cfg_.n_max) {
        expand(nodes, cur);
        cur = nodes[cur].first_child;  // all unvisited; UCB1 picks the first
        path.push_back(cur);
        plan.push_back(*nodes[cur].action);
      }

      const double r = rollout(root_state, me, plan, rng, reward);
      for (std::size_t idx : path) {
        nodes[idx].visits += 1;
        nodes[idx].total_reward += r;
      }
      ++out.iterations;
    }

    out.action = robust_child(nodes);
    return out;
  }

 private:
  void expand(std::vector<MctsNode>& nodes, std::size_t parent) const {
    const std::size_t k = domain_.action_count();
    const std::size_t first = nodes.size();
    const int depth = nodes[parent].depth + 1;
    for (std::size_t i = 0; i < k; ++i) {
      MctsNode child;
      child.action = ActionId{static_cast<std::uint16_t>(i)};
      child.depth = depth;
      nodes.push_back(child);
    }
    nodes[parent].first_child = first;
    nodes[parent].child_count = k;
    nodes[parent].visits_at_expansion = nodes[parent].visits;
  }

  std::size_t select_child(const std::vector<MctsNode>& nodes, std::size_t parent) const {
    const auto& p = nodes[parent];
    std::size_t best = p.first_child;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.child_count; ++i) {
      const auto& c = nodes[p.first_child + i];
      const double v = ucb1(c.mean_reward(), c.visits, p.visits, cfg_.c);
      if (v > best_value) {  // strict: lowest index wins ties
        best_value = v;
        best = p.first_child + i;
      }
    }
    return best;
  }

  ActionId robust_child(const std::vector<MctsNode>& nodes) const {
    const auto& root = nodes.front();
    const MctsNode* best = &nodes[root.first_child];
    for (std::size_t i = 1; i < root.child_count; ++i) {
      const auto& c = nodes[root.first_child + i];
      if (c.visits > best->visits ||
          (c.visits == best->visits && c.mean_reward() > best->mean_reward()))
        best = &c;
    }
    return *best->action;
  }

  double rollout(const State& root_state, Side me, const std::vector<ActionId>& plan,
                 RandomSource& rng, const RewardFn<State>& reward) const {
    State s = root_state;
    const Side opp = opponent(me);
    const std::size_t k = domain_.action_count();
    std::size_t next_planned = 0;
    for (int f = 0; f < cfg_.t_sim && !domain_.finished(s); ++f) {
      ActionId mine;
      if (domain_.awaiting_decision(s, me)) {
        mine = next_planned < plan.size()
                   ? plan[next_planned++]
                   : ActionId{static_cast<std::uint16_t>(rng.index(k))};
      } else {
        mine = domain_.ongoing_action(s, me);
      }
      const ActionId theirs = domain_.awaiting_decision(s, opp)
                                  ? ActionId{static_cast<std::uint16_t>(rng.index(k))}
                                  : domain_.ongoing_action(s, opp);
      if (me == Side::Player)
        domain_.advance_frame(s, mine, theirs);
      else
        domain_.advance_frame(s, theirs, mine);
    }
    return reward(root_state, s, me);
  }

  bool budget_exhausted(long iterations,
                        std::chrono::steady_clock::time_point start) const {
    if (cfg_.budget.mode == MctsBudget::Mode::Iterations)
      return iterations >= static_cast<long>(cfg_.budget.value);
    // Always complete at least one iteration so a root child has data.
    if (iterations == 0) return false;
    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - start);
    return elapsed.count() >= cfg_.budget.value;
  }

  const D& domain_;
  MctsConfig cfg_;
};

/// Adapts the fighting engine to SearchDomain.
class EngineDomain {
 public:
  using State = GameState;

  explicit EngineDomain(const Engine& engine) : engine_(engine) {}

  std::size_t action_count() const { return engine_.roster().size(); }
  bool awaiting_decision(const State& s, Side side) const {
    return engine_.awaiting_decision(s, side);
  }
  ActionId ongoing_action(const State& s, Side side) const {
    return engine_.ongoing_action(s, side);
  }
  void advance_frame(State& s, ActionId player_action, ActionId ai_action) const {
    engine_.advance(s, player_action, ai_action, nullptr);
  }
  bool finished(const State& s) const {
    return s.player.hp == 0 || s.ai.hp == 0 || s.frame >= s.round_frame_limit;
  }

 private:
  const Engine& engine_;
};

/// Search over the fighting engine with the given reward (HP change by default).
SearchResult search_engine(const Engine& engine, const GameState& state, Side side,
                           const MctsConfig& cfg, RandomSource& rng,
                           const RewardFn<GameState>& reward = hp_reward);

}  // namespace pda
