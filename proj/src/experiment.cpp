#include "pda/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pda/errors.hpp"

namespace pda {

namespace {

using nlohmann::json;

MctsConfig mcts_from(const json& j, MctsConfig base) {
  base.c = j.value("c", base.c);
  base.n_max = j.value("n_max", base.n_max);
  base.d_max = j.value("d_max", base.d_max);
  base.t_sim = j.value("t_sim", base.t_sim);
  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    const auto mode = b.value("mode", std::string("iterations"));
    if (mode == "iterations")
      base.budget.mode = MctsBudget::Mode::Iterations;
    else if (mode == "wall_clock_ms")
      base.budget.mode = MctsBudget::Mode::WallClockMs;
    else
      throw ConfigError("mcts.budget.mode must be 'iterations' or 'wall_clock_ms'");
    base.budget.value = b.value("value", base.budget.value);
  }
  return base;
}

PlayerParams player_from(const json& j) {
  PlayerParams p;
  p.model = j.value("model", p.model);
  p.side_bias = j.value("side_bias", p.side_bias);
  p.reinforce_rate = j.value("reinforce_rate", p.reinforce_rate);
  p.attack_weight = j.value("attack_weight", p.attack_weight);
  p.other_weight = j.value("other_weight", p.other_weight);
  p.approach = j.value("approach", p.approach);
  if (j.contains("weights"))
    for (const auto& [k, v] : j.at("weights").items()) p.weights[k] = v.get<double>();
  return p;
}

PdaParams pda_from(const json& j) {
  PdaParams p;
  p.initial_pdr = j.value("initial_pdr", p.initial_pdr);
  if (j.contains("harmless_actions"))
    p.harmless_actions = j.at("harmless_actions").get<std::vector<std::string>>();
  if (j.contains("fitness_motions"))
    p.fitness_motions = j.at("fitness_motions").get<std::vector<std::string>>();
  if (j.contains("forced_pdr") && !j.at("forced_pdr").is_null())
    p.forced_pdr = j.at("forced_pdr").get<double>();
  return p;
}

AgentSpec agent_from(const json& j, const MctsConfig& shared) {
  AgentSpec a;
  a.kind = j.at("agent").get<std::string>();
  a.mcts = j.contains("mcts") ? mcts_from(j.at("mcts"), shared) : shared;
  if (j.contains("pda")) a.pda = pda_from(j.at("pda"));
  if (j.contains("dda")) a.dda_target_hp_gap = j.at("dda").value("target_hp_gap", 0);
  return a;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string label_for(std::string_view kind) {
  if (kind == "mcts") return "MctsAI";
  if (kind == "pda") return "PDAHP-AI";
  if (kind == "dda") return "DDA-like";
  return std::string(kind);
}

double metric_of(const RoundResult& r, const std::string& metric) {
  if (metric == "bal_end") return r.bal_end;
  if (metric == "hp_diff") return r.hp_diff;
  if (metric == "abs_hp_diff") return std::abs(r.hp_diff);
  throw ConfigError("unknown metric '" + metric + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (pairings.empty()) throw ConfigError("no pairings configured");
  std::set<std::string> ids;
  for (const auto& p : pairings) {
    if (p.id.empty()) throw ConfigError("pairing with empty id");
    if (!ids.insert(p.id).second) throw ConfigError("duplicate pairing id '" + p.id + "'");
    if (p.agent.kind != "mcts" && p.agent.kind != "pda" && p.agent.kind != "dda")
      throw ConfigError("pairing '" + p.id + "': unknown agent '" + p.agent.kind + "'");
    p.agent.mcts.validate();
  }
  for (const auto& t : tests) {
    if (!ids.count(t.a) || !ids.count(t.b))
      throw ConfigError("test references unknown pairing '" + (ids.count(t.a) ? t.b : t.a) + "'");
    if (t.metric != "bal_end" && t.metric != "hp_diff" && t.metric != "abs_hp_diff")
      throw ConfigError("unknown test metric '" + t.metric + "'");
  }
}

ExperimentConfig parse_experiment_json(std::string_view text, const std::filesystem::path& base_dir,
                                       std::string_view source) {
  const std::string where(source);
  try {
    const json doc = json::parse(text);
    ExperimentConfig cfg;
    cfg.rounds = doc.value("rounds", cfg.rounds);
    cfg.master_seed = doc.value("master_seed", cfg.master_seed);
    cfg.jobs = doc.value("jobs", cfg.jobs);
    if (doc.contains("roster")) cfg.roster_path = resolve(base_dir, doc.at("roster").get<std::string>());
    if (doc.contains("m2mm")) cfg.m2mm_path = resolve(base_dir, doc.at("m2mm").get<std::string>());
    const MctsConfig shared = doc.contains("mcts") ? mcts_from(doc.at("mcts"), MctsConfig{}) : MctsConfig{};
    if (doc.contains("player")) cfg.player = player_from(doc.at("player"));
    for (const auto& pj : doc.at("pairings")) {
      PairingSpec p;
      p.agent = agent_from(pj, shared);
      p.id = pj.value("id", p.agent.kind);
      cfg.pairings.push_back(std::move(p));
    }
    if (doc.contains("tests")) {
      for (const auto& tj : doc.at("tests")) {
        ComparisonSpec t;
        t.metric = tj.value("metric", t.metric);
        t.a = tj.at("a").get<std::string>();
        t.b = tj.at("b").get<std::string>();
        t.alternative = alternative_from_string(tj.value("alternative", std::string("two_sided")));
        cfg.tests.push_back(std::move(t));
      }
    } else {
      std::vector<std::string> ids;
      for (const auto& p : cfg.pairings) ids.push_back(p.id);
      cfg.tests = default_comparisons(ids);
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

AgentSpec parse_agent_json(std::string_view text, std::string_view source) {
  const std::string where(source);
  try {
    const json doc = text.empty() ? json::object() : json::parse(text);
    if (!doc.is_object()) throw ConfigError("expected a JSON object");
    json j = doc;
    if (!j.contains("agent")) j["agent"] = "mcts";
    AgentSpec a = agent_from(j, MctsConfig{});
    if (a.kind != "mcts" && a.kind != "pda" && a.kind != "dda")
      throw ConfigError("unknown agent '" + a.kind + "'");
    a.mcts.validate();
    return a;
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ExperimentConfig load_experiment_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_json(ss.str(), path.parent_path(), path.string());
}

ExperimentConfig default_experiment() {
  ExperimentConfig cfg;
  PairingSpec mcts;
  mcts.id = "mcts";
  mcts.agent.kind = "mcts";
  PairingSpec pda;
  pda.id = "pda";
  pda.agent.kind = "pda";
  cfg.pairings = {mcts, pda};
  cfg.tests = {{"bal_end", "pda", "mcts", Alternative::Greater},
               {"abs_hp_diff", "pda", "mcts", Alternative::Less},
               {"hp_diff", "pda", "mcts", Alternative::TwoSided}};
  return cfg;
}

std::vector<ComparisonSpec> default_comparisons(const std::vector<std::string>& ids) {
  std::vector<ComparisonSpec> out;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    out.push_back({"bal_end", ids[i], ids[0], Alternative::TwoSided});
    out.push_back({"hp_diff", ids[i], ids[0], Alternative::TwoSided});
  }
  return out;
}

std::vector<PairingLabel> pairing_labels(const ExperimentConfig& cfg) {
  std::vector<PairingLabel> out;
  for (const auto& p : cfg.pairings) out.push_back({p.id, p.agent.kind, label_for(p.agent.kind)});
  return out;
}

std::uint64_t round_seed(std::uint64_t master_seed, int round_index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(round_index));
}

std::uint64_t player_stream_seed(std::uint64_t seed) { return derive_seed(seed, "player"); }
std::uint64_t agent_stream_seed(std::uint64_t seed) { return derive_seed(seed, "agent"); }

RoundResult run_round(const Engine& engine, const M2MmTable& table, const PlayerParams& params,
                      Agent& agent, std::uint64_t seed, const RoundObserver* observer) {
  RoundResult result;
  result.seed = seed;
  {
    SeededRandom probe(player_stream_seed(seed));
    std::uint64_t fp = 0;
    for (int i = 0; i < 4; ++i) fp = derive_seed(fp, probe.next_u64());
    result.player_stream_fingerprint = fp;
  }

  SeededRandom player_rng(player_stream_seed(seed));
  PlayerModel player(engine, params);
  SegmentMomenta momenta;
  GameState state = engine.new_match(seed);
  std::vector<HitEvent> events;
  const auto& roster = engine.roster();

  std::optional<RoundOutcome> outcome;
  while (!(outcome = engine.is_round_over(state))) {
    const ActionId pa = player.act(state, player_rng);
    if (engine.awaiting_decision(state, Side::Player)) {
      const auto& spec = roster[pa];
      agent.on_player_motion(spec.motion_id, spec.is_effective(), momenta);
      momenta = accumulate(momenta, spec.motion_id, table);
    }
    ActionId aa;
    if (engine.awaiting_decision(state, Side::Ai)) {
      aa = agent.act(state);
      if (observer && observer->on_ai_decision) observer->on_ai_decision(agent);
    } else {
      aa = engine.ongoing_action(state, Side::Ai);
    }
    events.clear();
    engine.advance(state, pa, aa, &events);
    for (const auto& e : events) player.observe(e);
    if (observer && observer->on_frame) observer->on_frame(state, events);
  }

  result.bal_end = balancedness(momenta);
  result.hp_diff = outcome->hp_diff;
  result.winner = outcome->winner;
  result.frames = outcome->end_frame;
  return result;
}

RoundResult run_round(const Engine& engine, const M2MmTable& table, const PlayerParams& player,
                      const AgentSpec& agent_spec, const std::string& pairing, int round_index,
                      std::uint64_t seed, const RoundObserver* observer) {
  auto agent = make_agent(agent_spec, engine, table, agent_stream_seed(seed));
  RoundResult r = run_round(engine, table, player, *agent, seed, observer);
  r.pairing = pairing;
  r.round = round_index;
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const RosterConfig roster =
      cfg.roster_path.empty() ? default_roster() : load_roster_json(cfg.roster_path);
  const M2MmTable table = cfg.m2mm_path.empty() ? default_m2mm() : M2MmTable::load_csv(cfg.m2mm_path);
  const Engine engine(roster.roster, roster.rules, table);
  // Surface agent and player configuration errors before any round runs.
  PlayerModel(engine, cfg.player);
  for (const auto& p : cfg.pairings) make_agent(p.agent, engine, table, 0);

  const std::size_t per = static_cast<std::size_t>(cfg.rounds);
  const std::size_t total = cfg.pairings.size() * per;
  std::vector<RoundResult> rounds(total);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(total);

  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const auto& pairing = cfg.pairings[k / per];
      const int i = static_cast<int>(k % per);
      try {
        rounds[k] = run_round(engine, table, cfg.player, pairing.agent, pairing.id, i,
                              round_seed(cfg.master_seed, i));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int jobs = std::min<int>(cfg.jobs, static_cast<int>(total));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  return summarize(std::move(rounds), pairing_labels(cfg), cfg.tests);
}

ExperimentReport summarize(std::vector<RoundResult> rounds, const std::vector<PairingLabel>& labels,
                           const std::vector<ComparisonSpec>& tests) {
  ExperimentReport report;
  report.rounds = std::move(rounds);

  std::vector<std::string> order;
  for (const auto& r : report.rounds)
    if (std::find(order.begin(), order.end(), r.pairing) == order.end()) order.push_back(r.pairing);

  std::map<std::string, std::vector<const RoundResult*>> by_pairing;
  for (const auto& r : report.rounds) by_pairing[r.pairing].push_back(&r);

  for (const auto& id : order) {
    PairingSummary s;
    s.id = id;
    s.agent = id;
    s.label = id;
    for (const auto& l : labels)
      if (l.id == id) {
        s.agent = l.agent;
        s.label = l.label;
      }
    std::vector<double> bal, hp, abs_hp;
    double frames = 0.0;
    for (const RoundResult* r : by_pairing[id]) {
      bal.push_back(r->bal_end);
      hp.push_back(r->hp_diff);
      abs_hp.push_back(std::abs(r->hp_diff));
      frames += r->frames;
      s.player_wins += r->winner == Winner::Player;
      s.ai_wins += r->winner == Winner::Ai;
      s.draws += r->winner == Winner::Draw;
    }
    s.rounds = static_cast<int>(bal.size());
    s.bal_mean = mean(bal);
    s.bal_sd = sample_sd(bal);
    s.hp_diff_mean = mean(hp);
    s.hp_diff_sd = sample_sd(hp);
    s.abs_hp_diff_mean = mean(abs_hp);
    s.mean_frames = s.rounds > 0 ? frames / s.rounds : 0.0;
    report.summaries.push_back(s);
  }

  for (const auto& spec : tests) {
    ComparisonResult c;
    c.spec = spec;
    std::map<int, double> a_vals, b_vals;
    for (const RoundResult* r : by_pairing[spec.a]) a_vals[r->round] = metric_of(*r, spec.metric);
    for (const RoundResult* r : by_pairing[spec.b]) b_vals[r->round] = metric_of(*r, spec.metric);
    Pairs pairs;
    for (const auto& [round, v] : a_vals)
      if (auto it = b_vals.find(round); it != b_vals.end()) pairs.emplace_back(v, it->second);
    c.n = pairs.size();
    try {
      c.wilcoxon = wilcoxon_signed_rank(pairs, spec.alternative);
    } catch (const std::exception& e) {
      c.error = std::string("wilcoxon: ") + e.what();
    }
    try {
      c.paired_t = paired_t_test(pairs, spec.alternative);
    } catch (const std::exception& e) {
      if (!c.error.empty()) c.error += "; ";
      c.error += std::string("paired_t: ") + e.what();
    }
    report.tests.push_back(std::move(c));
  }
  return report;
}

}  // namespace pda
