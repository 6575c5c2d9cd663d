#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pda/errors.hpp"
#include "pda/experiment.hpp"

namespace pda {

namespace {

using ojson = nlohmann::ordered_json;

// Shortest text that parses back to the same double.
std::string exact_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

ojson test_json(const TestResult& t) {
  ojson j;
  j["method"] = to_string(t.method);
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  j["n"] = t.n;
  j["alternative"] = to_string(t.alternative);
  j["exact"] = t.exact;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string rounds_csv(const std::vector<RoundResult>& rounds) {
  std::ostringstream out;
  out << kRoundsCsvHeader << '\n';
  for (const auto& r : rounds) {
    out << r.pairing << ',' << r.round << ',' << r.seed << ',' << exact_double(r.bal_end) << ','
        << r.hp_diff << ',' << to_string(r.winner) << ',' << r.frames << '\n';
  }
  return out.str();
}

std::string summary_json(const ExperimentReport& report) {
  ojson doc;
  doc["pairings"] = ojson::array();
  for (const auto& s : report.summaries) {
    ojson p;
    p["id"] = s.id;
    p["agent"] = s.agent;
    p["label"] = s.label;
    p["rounds"] = s.rounds;
    p["bal_end"] = {{"mean", s.bal_mean}, {"sd", s.bal_sd}};
    p["hp_diff"] = {{"mean", s.hp_diff_mean}, {"sd", s.hp_diff_sd}};
    p["abs_hp_diff_mean"] = s.abs_hp_diff_mean;
    p["wins"] = {{"player", s.player_wins}, {"ai", s.ai_wins}, {"draw", s.draws}};
    p["mean_frames"] = s.mean_frames;
    doc["pairings"].push_back(p);
  }
  doc["tests"] = ojson::array();
  for (const auto& c : report.tests) {
    ojson t;
    t["metric"] = c.spec.metric;
    t["a"] = c.spec.a;
    t["b"] = c.spec.b;
    t["alternative"] = to_string(c.spec.alternative);
    t["n"] = c.n;
    t["wilcoxon"] = c.wilcoxon ? test_json(*c.wilcoxon) : ojson(nullptr);
    t["paired_t"] = c.paired_t ? test_json(*c.paired_t) : ojson(nullptr);
    if (!c.error.empty()) t["error"] = c.error;
    doc["tests"].push_back(t);
  }
  return doc.dump(2) + "\n";
}

std::vector<RoundResult> parse_rounds_csv(std::string_view text, std::string_view source) {
  const std::string where(source);
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kRoundsCsvHeader)
    throw ConfigError(where + ": expected header '" + std::string(kRoundsCsvHeader) + "'");
  std::vector<RoundResult> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 7) throw ConfigError(where + ":" + std::to_string(line_no) + ": expected 7 fields");
    try {
      RoundResult r;
      r.pairing = f[0];
      r.round = std::stoi(f[1]);
      r.seed = std::stoull(f[2]);
      r.bal_end = std::stod(f[3]);
      r.hp_diff = std::stoi(f[4]);
      r.winner = winner_from_string(f[5]);
      r.frames = std::stoi(f[6]);
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ConfigError(where + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<RoundResult> read_rounds_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open rounds file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rounds_csv(ss.str(), path.string());
}

void write_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::vector<PairingLabel> labels;
  for (const auto& s : report.summaries) labels.push_back({s.id, s.agent, s.label});
  std::vector<ComparisonSpec> tests;
  for (const auto& t : report.tests) tests.push_back(t.spec);
  const std::string summary = summary_json(report);
  if (summary_json(summarize(report.rounds, labels, tests)) != summary)
    throw ContractViolation("write_report: summary does not match the round list");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "rounds.csv", rounds_csv(report.rounds));
  write_file(out_dir / "summary.json", summary);
}

}  // namespace pda
