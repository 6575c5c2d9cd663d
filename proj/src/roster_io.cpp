#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pda/engine.hpp"
#include "pda/errors.hpp"

namespace pda {

namespace {

using nlohmann::json;

ActionKind kind_from(const std::string& s) {
  if (s == "ATTACK") return ActionKind::Attack;
  if (s == "MOVE") return ActionKind::Move;
  if (s == "GUARD") return ActionKind::Guard;
  if (s == "IDLE") return ActionKind::Idle;
  throw ConfigError("unknown action kind '" + s + "'");
}

Height height_from(const std::string& s) {
  if (s == "HIGH") return Height::High;
  if (s == "LOW") return Height::Low;
  if (s == "NONE") return Height::None;
  throw ConfigError("unknown height '" + s + "'");
}

ActionSpec action_from(const json& j) {
  ActionSpec a;
  a.id = j.at("id").get<std::string>();
  a.motion_id = j.at("motion_id").get<std::string>();
  a.kind = kind_from(j.at("kind").get<std::string>());
  a.damage = j.value("damage", 0);
  a.reach = j.value("reach", 0);
  a.height = height_from(j.value("height", std::string("NONE")));
  a.startup_frames = j.value("startup_frames", 0);
  a.active_frames = j.value("active_frames", 0);
  a.recovery_frames = j.value("recovery_frames", 0);
  a.move_speed = j.value("move_speed", 0);
  return a;
}

MatchRules rules_from(const json& j) {
  MatchRules r;
  r.arena_width = j.value("arena_width", r.arena_width);
  r.round_frame_limit = j.value("round_frame_limit", r.round_frame_limit);
  r.player_spawn = j.value("player_spawn", r.player_spawn);
  r.ai_spawn = j.value("ai_spawn", r.ai_spawn);
  r.min_distance = j.value("min_distance", r.min_distance);
  r.hit_recovery_frames = j.value("hit_recovery_frames", r.hit_recovery_frames);
  return r;
}

}  // namespace

RosterConfig parse_roster_json(std::string_view text, std::string_view source) {
  const std::string where(source);
  try {
    const json doc = json::parse(text);
    std::vector<ActionSpec> actions;
    for (const auto& a : doc.at("actions")) actions.push_back(action_from(a));
    RosterConfig cfg{ActionRoster(std::move(actions)),
                     doc.contains("rules") ? rules_from(doc.at("rules")) : MatchRules{}};
    cfg.rules.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

RosterConfig load_roster_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open roster file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_roster_json(ss.str(), path.string());
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("PDA_DATA_DIR"); env && *env) return env;
  return PDA_DATA_DIR;
}

RosterConfig default_roster() { return load_roster_json(default_data_dir() / "roster.json"); }

M2MmTable default_m2mm() { return M2MmTable::load_csv(default_data_dir() / "m2mm.csv"); }

}  // namespace pda
