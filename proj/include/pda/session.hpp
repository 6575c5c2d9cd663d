#pragma once

// Live play sessions: a human submits one action per decision point and the
// match advances until the next one, reporting every intermediate frame.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "pda/agents.hpp"
#include "pda/engine.hpp"
#include "pda/errors.hpp"
#include "pda/health.hpp"

namespace pda {

class SessionNotFound : public LookupError {
 public:
  using LookupError::LookupError;
};

/// Request not allowed in the session's current phase.
class SessionStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unknown or currently illegal action; the message says why.
class IllegalActionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SessionPhase : std::uint8_t { AwaitingInput, Advancing, Finished };
std::string_view to_string(SessionPhase p);

struct FighterView {
  int hp = 0;
  int x = 0;
  Phase phase = Phase::Idle;
};

struct FrameRecord {
  int frame = 0;
  FighterView player;
  FighterView ai;
  std::vector<HitEvent> events;
};

struct FrameBatch {
  std::vector<FrameRecord> frames;
  double bal = 1.0;
  SegmentMomenta momenta;
  std::optional<double> pdr;  // debug sessions only
  std::optional<RoundOutcome> outcome;
  SessionPhase phase = SessionPhase::AwaitingInput;
};

struct SessionSnapshot {
  std::string id;
  std::string agent;
  std::string label;
  int frame = 0;
  FighterView player;
  FighterView ai;
  double bal = 1.0;
  SegmentMomenta momenta;
  std::optional<double> pdr;
  std::optional<RoundOutcome> outcome;
  SessionPhase phase = SessionPhase::AwaitingInput;
  std::vector<std::string> actions;  // legal player actions right now
};

struct SessionConfig {
  AgentSpec agent;
  std::optional<std::uint64_t> seed;  // default: derived from the manager seed
  bool debug = false;                 // expose the dominance rate
};

/// Owns every live session. Requests for one session are serialized; reads
/// return the last committed state without waiting for a pending step.
class SessionManager {
 public:
  SessionManager(const Engine& engine, const M2MmTable& table, std::uint64_t master_seed = 0);
  ~SessionManager();

  const Engine& engine() const { return engine_; }
  const M2MmTable& table() const { return table_; }

  /// Throws ConfigError for invalid agent settings.
  std::string create(const SessionConfig& cfg);
  /// Same, with a caller-built agent (for scripted opponents).
  std::string create(std::unique_ptr<Agent> agent, std::uint64_t seed, bool debug = false);

  FrameBatch submit(const std::string& id, std::string_view action);
  SessionSnapshot state(const std::string& id) const;
  void close(const std::string& id);

  std::size_t size() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  std::string insert(std::shared_ptr<Session> s);
  FrameBatch advance_session(Session& s, ActionId first);

  const Engine& engine_;
  const M2MmTable& table_;
  std::uint64_t master_seed_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace pda
