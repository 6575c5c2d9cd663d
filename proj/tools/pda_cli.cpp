// pda: experiments, single simulated rounds, report recomputation and the
// live play service.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pda/errors.hpp"
#include "pda/experiment.hpp"
#include "pda/http_service.hpp"
#include "pda/session.hpp"

namespace fs = std::filesystem;
using namespace pda;

namespace {

constexpr int kUsage = 2;
constexpr int kFailure = 1;
constexpr const char* kConfigEnv = "PDA_CONFIG";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kConfigEnv); env && *env) return env;
  throw UsageError(std::string("no config given (use --config or set ") + kConfigEnv + ")");
}

ExperimentConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path.string());
  try {
    return load_experiment_json(path);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

struct Tables {
  RosterConfig roster;
  M2MmTable m2mm;
};

Tables load_tables(const fs::path& roster_path, const fs::path& m2mm_path) {
  for (const auto& p : {roster_path, m2mm_path})
    if (!p.empty() && !fs::exists(p)) throw UsageError("file not found: " + p.string());
  try {
    return {roster_path.empty() ? default_roster() : load_roster_json(roster_path),
            m2mm_path.empty() ? default_m2mm() : M2MmTable::load_csv(m2mm_path)};
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

void print_summary(const ExperimentReport& report, std::ostream& out) {
  for (const auto& s : report.summaries)
    out << s.id << " (" << s.label << "): rounds=" << s.rounds << " bal=" << s.bal_mean << " +/- " << s.bal_sd
        << " hp_diff=" << s.hp_diff_mean << " +/- " << s.hp_diff_sd << " player_wins=" << s.player_wins << "\n";
  for (const auto& t : report.tests) {
    out << t.spec.metric << " " << t.spec.a << " vs " << t.spec.b << " (" << to_string(t.spec.alternative) << "):";
    if (t.wilcoxon) out << " wilcoxon p=" << t.wilcoxon->p_value;
    if (t.paired_t) out << " t p=" << t.paired_t->p_value;
    if (!t.error.empty()) out << " " << t.error;
    out << "\n";
  }
}

HttpServer* g_server = nullptr;
extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Player-health-aware fighting game AI: experiments and live play"};
  app.require_subcommand(1);
  app.fallthrough();
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Print summaries to stdout");

  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  auto* exp = app.add_subcommand("experiment", "Run all configured pairings and write rounds.csv and summary.json");
  exp->add_option("--config", config, std::string("Experiment JSON (default: $") + kConfigEnv + ")");
  exp->add_option("--out", out_dir, "Output directory")->required();
  exp->add_option("--seed", seed, "Master seed override")->check(CLI::NonNegativeNumber);
  exp->add_option("--jobs", jobs, "Rounds run in parallel (default: config value, else 1)")->check(CLI::PositiveNumber);

  std::string agent = "pda";
  std::string player = "biased";
  std::uint64_t sim_seed = 0;
  std::string roster_file;
  std::string m2mm_file;
  auto* sim = app.add_subcommand("simulate", "Play one round and print its result");
  sim->add_option("--agent", agent, "mcts | pda | dda")->check(CLI::IsMember({"mcts", "pda", "dda"}));
  sim->add_option("--player", player, "biased | uniform")->check(CLI::IsMember({"biased", "uniform"}));
  sim->add_option("--seed", sim_seed, "Round seed")->required();
  sim->add_option("--config", config, "Experiment JSON supplying data files and player/agent parameters");
  sim->add_option("--roster", roster_file, "Roster JSON");
  sim->add_option("--m2mm", m2mm_file, "M2Mm CSV");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::uint64_t serve_seed = 0;
  auto* serve = app.add_subcommand("serve", "Start the HTTP play service");
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--seed", serve_seed, "Seed for sessions created without one");
  serve->add_option("--roster", roster_file, "Roster JSON");
  serve->add_option("--m2mm", m2mm_file, "M2Mm CSV");

  std::string rounds_file;
  auto* rep = app.add_subcommand("report", "Recompute summary.json from an existing rounds.csv");
  rep->add_option("--rounds", rounds_file, "rounds.csv")->required();
  rep->add_option("--config", config, "Experiment JSON supplying labels and tests");
  rep->add_option("--out", out_dir, "Output directory (default: next to rounds.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*exp) {
      ExperimentConfig cfg = load_config(config_path(config));
      if (seed) cfg.master_seed = *seed;
      if (jobs > 0) cfg.jobs = jobs;
      const auto report = run_experiment(cfg);
      write_report(report, out_dir);
      if (verbosity > 0) print_summary(report, std::cout);
      std::cout << "wrote " << (fs::path(out_dir) / "rounds.csv").string() << " and "
                << (fs::path(out_dir) / "summary.json").string() << "\n";
    } else if (*sim) {
      ExperimentConfig cfg = default_experiment();
      if (!config.empty()) cfg = load_config(config);
      if (!roster_file.empty()) cfg.roster_path = roster_file;
      if (!m2mm_file.empty()) cfg.m2mm_path = m2mm_file;
      const auto tables = load_tables(cfg.roster_path, cfg.m2mm_path);
      const Engine engine(tables.roster.roster, tables.roster.rules, tables.m2mm);
      PlayerParams pp = cfg.player;
      pp.model = player;
      AgentSpec spec;
      spec.kind = agent;
      for (const auto& p : cfg.pairings)
        if (p.agent.kind == agent) {
          spec = p.agent;
          break;
        }
      const auto r = run_round(engine, tables.m2mm, pp, spec, agent, 0, sim_seed);
      std::cout << "agent=" << agent << " player=" << player << " seed=" << r.seed << " bal_end=" << r.bal_end
                << " hp_diff=" << r.hp_diff << " winner=" << to_string(r.winner) << " frames=" << r.frames << "\n";
    } else if (*serve) {
      const auto tables = load_tables(roster_file, m2mm_file);
      const Engine engine(tables.roster.roster, tables.roster.rules, tables.m2mm);
      SessionManager sessions(engine, tables.m2mm, serve_seed);
      HttpServer server(sessions);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving on http://" << host << ":" << bound << std::endl;
      server.listen();
      g_server = nullptr;
    } else if (*rep) {
      if (!fs::exists(rounds_file)) throw UsageError("rounds file not found: " + rounds_file);
      auto rounds = read_rounds_csv(rounds_file);
      std::vector<PairingLabel> labels;
      std::vector<ComparisonSpec> tests;
      if (!config.empty()) {
        const auto cfg = load_config(config);
        labels = pairing_labels(cfg);
        tests = cfg.tests;
      } else {
        std::vector<std::string> ids;
        for (const auto& r : rounds)
          if (std::find(ids.begin(), ids.end(), r.pairing) == ids.end()) ids.push_back(r.pairing);
        tests = default_comparisons(ids);
      }
      const auto report = summarize(std::move(rounds), labels, tests);
      const fs::path dir = out_dir.empty() ? fs::path(rounds_file).parent_path() : fs::path(out_dir);
      write_report(report, dir.empty() ? fs::path(".") : dir);
      if (verbosity > 0) print_summary(report, std::cout);
      std::cout << "wrote " << ((dir.empty() ? fs::path(".") : dir) / "summary.json").string() << "\n";
    }
  } catch (const UsageError& e) {
    std::cerr << "pda: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pda: " << e.what() << "\n";
    return kFailure;
  }
  return 0;
}
