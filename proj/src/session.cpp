#include "pda/session.hpp"

#include <condition_variable>

#include "pda/experiment.hpp"
#include "pda/rng.hpp"

namespace pda {

std::string_view to_string(SessionPhase p) {
  switch (p) {
    case SessionPhase::AwaitingInput: return "AWAITING_INPUT";
    case SessionPhase::Advancing: return "ADVANCING";
    case SessionPhase::Finished: return "FINISHED";
  }
  return "?";
}

namespace {

FighterView view_of(const CharacterState& c) { return {c.hp, c.x, c.phase}; }

// FIFO mutual exclusion: waiters are admitted strictly in arrival order.
class TicketLock {
 public:
  void lock() {
    std::unique_lock lk(mu_);
    const std::uint64_t mine = next_++;
    cv_.wait(lk, [&] { return serving_ == mine; });
  }
  void unlock() {
    {
      std::lock_guard lk(mu_);
      ++serving_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::uint64_t next_ = 0;
  std::uint64_t serving_ = 0;
};

}  // namespace

struct SessionManager::Session {
  std::string id;
  std::unique_ptr<Agent> agent;
  bool debug = false;

  TicketLock step_lock;  // guards the fields below
  GameState state;
  SegmentMomenta momenta;
  SessionPhase phase = SessionPhase::AwaitingInput;
  std::optional<RoundOutcome> outcome;

  mutable std::mutex view_mu;
  SessionSnapshot committed;

  SessionSnapshot make_snapshot(const Engine& engine) const {
    SessionSnapshot s;
    s.id = id;
    s.agent = std::string(agent->kind());
    s.label = std::string(agent->label());
    s.frame = state.frame;
    s.player = view_of(state.player);
    s.ai = view_of(state.ai);
    s.momenta = momenta;
    s.bal = balancedness(momenta);
    if (debug) s.pdr = agent->pdr();
    s.outcome = outcome;
    s.phase = phase;
    if (phase == SessionPhase::AwaitingInput)
      for (const auto& a : engine.legal_actions(state, Side::Player)) s.actions.push_back(engine.roster()[a].id);
    return s;
  }

  void publish(SessionSnapshot s) {
    std::lock_guard lk(view_mu);
    committed = std::move(s);
  }
};

SessionManager::SessionManager(const Engine& engine, const M2MmTable& table, std::uint64_t master_seed)
    : engine_(engine), table_(table), master_seed_(master_seed) {}

SessionManager::~SessionManager() = default;

std::string SessionManager::create(const SessionConfig& cfg) {
  std::uint64_t seed;
  if (cfg.seed) {
    seed = *cfg.seed;
  } else {
    std::lock_guard lk(mu_);
    seed = derive_seed(master_seed_, next_id_);
  }
  return create(make_agent(cfg.agent, engine_, table_, agent_stream_seed(seed)), seed, cfg.debug);
}

std::string SessionManager::create(std::unique_ptr<Agent> agent, std::uint64_t seed, bool debug) {
  if (!agent) throw ConfigError("session needs an agent");
  auto s = std::make_shared<Session>();
  s->agent = std::move(agent);
  s->debug = debug;
  s->state = engine_.new_match(seed);
  return insert(std::move(s));
}

std::string SessionManager::insert(std::shared_ptr<Session> s) {
  std::unique_lock lk(mu_);
  s->id = "s" + std::to_string(next_id_++);
  s->publish(s->make_snapshot(engine_));
  const std::string id = s->id;
  sessions_.emplace(id, std::move(s));
  return id;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lk(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionNotFound("no session '" + id + "'");
  return it->second;
}

FrameBatch SessionManager::submit(const std::string& id, std::string_view action) {
  const auto s = find(id);
  std::lock_guard guard(s->step_lock);

  if (s->phase == SessionPhase::Finished) throw SessionStateError("session '" + id + "' is finished");
  const auto& roster = engine_.roster();
  const auto pa0 = roster.find(action);
  if (!pa0) throw IllegalActionError("unknown action '" + std::string(action) + "'");
  if (!engine_.is_legal(s->state, Side::Player, *pa0))
    throw IllegalActionError("action '" + std::string(action) + "' is not legal now");

  {
    std::lock_guard lk(s->view_mu);
    s->committed.phase = SessionPhase::Advancing;
  }

  try {
    return advance_session(*s, *pa0);
  } catch (...) {
    s->publish(s->make_snapshot(engine_));  // drop the ADVANCING marker
    throw;
  }
}

FrameBatch SessionManager::advance_session(Session& session, ActionId first) {
  Session* s = &session;
  GameState state = s->state;
  const auto& roster = engine_.roster();
  const auto& spec = roster[first];
  s->agent->on_player_motion(spec.motion_id, spec.is_effective(), s->momenta);
  const SegmentMomenta momenta = accumulate(s->momenta, spec.motion_id, table_);

  FrameBatch batch;
  std::optional<RoundOutcome> outcome;
  ActionId pa = first;
  std::vector<HitEvent> events;
  for (;;) {
    const ActionId aa = engine_.awaiting_decision(state, Side::Ai) ? s->agent->act(state)
                                                                   : engine_.ongoing_action(state, Side::Ai);
    events.clear();
    engine_.advance(state, pa, aa, &events);
    batch.frames.push_back({state.frame, view_of(state.player), view_of(state.ai), events});
    if ((outcome = engine_.is_round_over(state))) break;
    if (engine_.awaiting_decision(state, Side::Player)) break;
    pa = engine_.ongoing_action(state, Side::Player);
  }

  s->state = state;
  s->momenta = momenta;
  if (outcome) {
    outcome->bal_end = balancedness(momenta);
    s->outcome = outcome;
    s->phase = SessionPhase::Finished;
  } else {
    s->phase = SessionPhase::AwaitingInput;
  }

  batch.bal = balancedness(momenta);
  batch.momenta = momenta;
  if (s->debug) batch.pdr = s->agent->pdr();
  batch.outcome = s->outcome;
  batch.phase = s->phase;
  s->publish(s->make_snapshot(engine_));
  return batch;
}

SessionSnapshot SessionManager::state(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lk(s->view_mu);
  return s->committed;
}

void SessionManager::close(const std::string& id) {
  std::unique_lock lk(mu_);
  if (sessions_.erase(id) == 0) throw SessionNotFound("no session '" + id + "'");
}

std::size_t SessionManager::size() const {
  std::shared_lock lk(mu_);
  return sessions_.size();
}

}  // namespace pda
