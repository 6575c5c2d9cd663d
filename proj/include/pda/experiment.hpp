#pragma once

// Seeded round batches pitting one synthetic player model against several
// agents, plus the summary statistics and paired tests over them.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pda/agents.hpp"
#include "pda/engine.hpp"
#include "pda/health.hpp"
#include "pda/players.hpp"
#include "pda/stats.hpp"

namespace pda {

struct RoundResult {
  std::string pairing;
  int round = 0;
  std::uint64_t seed = 0;
  double bal_end = 1.0;
  int hp_diff = 0;
  Winner winner = Winner::Draw;
  int frames = 0;
  /// Digest of the first draws of the player's random stream; not exported.
  std::uint64_t player_stream_fingerprint = 0;

  bool operator==(const RoundResult& o) const {
    return pairing == o.pairing && round == o.round && seed == o.seed && bal_end == o.bal_end &&
           hp_diff == o.hp_diff && winner == o.winner && frames == o.frames;
  }
};

struct PairingSpec {
  std::string id;
  AgentSpec agent;
};

struct ComparisonSpec {
  std::string metric = "bal_end";  // "bal_end" | "hp_diff" | "abs_hp_diff"
  std::string a;                   // pairing ids; differences are a - b
  std::string b;
  Alternative alternative = Alternative::TwoSided;
};

struct ExperimentConfig {
  int rounds = 30;
  std::uint64_t master_seed = 42;
  int jobs = 1;
  std::filesystem::path roster_path;  // empty: bundled
  std::filesystem::path m2mm_path;    // empty: bundled
  PlayerParams player;
  std::vector<PairingSpec> pairings;
  std::vector<ComparisonSpec> tests;

  /// Throws ConfigError on unknown agents, duplicate ids, or tests that
  /// reference missing pairings.
  void validate() const;
};

/// Parses the experiment JSON; relative file paths resolve against
/// `base_dir`.
ExperimentConfig parse_experiment_json(std::string_view text,
                                       const std::filesystem::path& base_dir = {},
                                       std::string_view source = "<string>");
ExperimentConfig load_experiment_json(const std::filesystem::path& path);
/// One agent block as used inside `pairings` (`agent`, `mcts`, `pda`,
/// `dda`); `agent` defaults to "mcts".
AgentSpec parse_agent_json(std::string_view text, std::string_view source = "<string>");
/// Two pairings (mcts, pda) with the bundled data and the directional tests.
ExperimentConfig default_experiment();

struct PairingSummary {
  std::string id;
  std::string agent;
  std::string label;
  int rounds = 0;
  double bal_mean = 0.0;
  double bal_sd = 0.0;
  double hp_diff_mean = 0.0;
  double hp_diff_sd = 0.0;
  double abs_hp_diff_mean = 0.0;
  int player_wins = 0;
  int ai_wins = 0;
  int draws = 0;
  double mean_frames = 0.0;
};

struct ComparisonResult {
  ComparisonSpec spec;
  std::size_t n = 0;
  std::optional<TestResult> wilcoxon;
  std::optional<TestResult> paired_t;
  std::string error;  // set when a test was degenerate
};

struct ExperimentReport {
  std::vector<RoundResult> rounds;  // pairing order, then round index
  std::vector<PairingSummary> summaries;
  std::vector<ComparisonResult> tests;
};

/// Optional per-frame hooks, used by tests to watch a round.
struct RoundObserver {
  std::function<void(const GameState&, const std::vector<HitEvent>&)> on_frame;
  std::function<void(const Agent&)> on_ai_decision;
};

/// Per-round seed shared by every pairing (paired design).
std::uint64_t round_seed(std::uint64_t master_seed, int round_index);
std::uint64_t player_stream_seed(std::uint64_t round_seed);
std::uint64_t agent_stream_seed(std::uint64_t round_seed);

/// Plays one round to completion. Momenta start at zero; each player
/// decision is reported to the agent before it is accumulated and executed.
RoundResult run_round(const Engine& engine, const M2MmTable& table, const PlayerParams& player,
                      Agent& agent, std::uint64_t seed, const RoundObserver* observer = nullptr);

RoundResult run_round(const Engine& engine, const M2MmTable& table, const PlayerParams& player,
                      const AgentSpec& agent, const std::string& pairing, int round_index,
                      std::uint64_t seed, const RoundObserver* observer = nullptr);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Summaries and tests recomputed from round records. `labels` maps pairing
/// ids to (agent kind, label); unknown ids use the id for both.
struct PairingLabel {
  std::string id;
  std::string agent;
  std::string label;
};
ExperimentReport summarize(std::vector<RoundResult> rounds, const std::vector<PairingLabel>& labels,
                           const std::vector<ComparisonSpec>& tests);

std::vector<PairingLabel> pairing_labels(const ExperimentConfig& cfg);
/// Every later pairing against the first, two-sided, on bal_end and hp_diff.
std::vector<ComparisonSpec> default_comparisons(const std::vector<std::string>& pairing_ids);

// Report files --------------------------------------------------------------

inline constexpr std::string_view kRoundsCsvHeader = "pairing,round,seed,bal_end,hp_diff,winner,frames";

std::string rounds_csv(const std::vector<RoundResult>& rounds);
std::string summary_json(const ExperimentReport& report);
std::vector<RoundResult> parse_rounds_csv(std::string_view text, std::string_view source = "<string>");
std::vector<RoundResult> read_rounds_csv(const std::filesystem::path& path);

/// Writes rounds.csv and summary.json into `out_dir` (created if needed).
/// Throws std::runtime_error naming the path on I/O failure, and
/// ContractViolation when the summaries disagree with the round list.
void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace pda
