#include "pda/http_service.hpp"

#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "pda/experiment.hpp"

namespace pda {

namespace {

using nlohmann::ordered_json;

ordered_json fighter_json(const FighterView& f) {
  return {{"hp", f.hp}, {"x", f.x}, {"phase", to_string(f.phase)}};
}

ordered_json momenta_json(const SegmentMomenta& m) {
  return {{"right_arm", m.right_arm}, {"left_arm", m.left_arm}, {"right_leg", m.right_leg}, {"left_leg", m.left_leg}};
}

ordered_json outcome_json(const RoundOutcome& o) {
  return {{"winner", to_string(o.winner)}, {"hp_diff", o.hp_diff}, {"frame", o.end_frame}, {"bal_end", o.bal_end}};
}

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ApiResponse error(int status, std::string_view kind, std::string_view message) {
  return {status, ordered_json{{"error", kind}, {"message", message}}.dump()};
}

}  // namespace

std::string frame_batch_json(const FrameBatch& batch, const ActionRoster& roster) {
  ordered_json frames = ordered_json::array();
  for (const auto& f : batch.frames) {
    ordered_json events = ordered_json::array();
    for (const auto& e : f.events)
      events.push_back({{"attacker", to_string(e.attacker)},
                        {"action", roster[e.action].id},
                        {"damage", e.damage_dealt},
                        {"blocked", e.blocked}});
    frames.push_back({{"frame", f.frame},
                      {"player", fighter_json(f.player)},
                      {"ai", fighter_json(f.ai)},
                      {"events", std::move(events)}});
  }
  ordered_json j{{"frames", std::move(frames)}, {"bal", batch.bal}, {"momenta", momenta_json(batch.momenta)}};
  if (batch.pdr) j["pdr"] = *batch.pdr;
  if (batch.outcome) j["outcome"] = outcome_json(*batch.outcome);
  j["phase"] = to_string(batch.phase);
  return j.dump();
}

std::string snapshot_json(const SessionSnapshot& s) {
  ordered_json j{{"id", s.id},
                 {"agent", s.agent},
                 {"label", s.label},
                 {"phase", to_string(s.phase)},
                 {"frame", s.frame},
                 {"player", fighter_json(s.player)},
                 {"ai", fighter_json(s.ai)},
                 {"bal", s.bal},
                 {"momenta", momenta_json(s.momenta)},
                 {"actions", s.actions}};
  if (s.pdr) j["pdr"] = *s.pdr;
  if (s.outcome) j["outcome"] = outcome_json(*s.outcome);
  return j.dump();
}

template <class F>
ApiResponse PlayApi::guarded(F&& f) {
  try {
    return f();
  } catch (const SessionNotFound& e) {
    return error(404, "not_found", e.what());
  } catch (const SessionStateError& e) {
    return error(409, "state", e.what());
  } catch (const IllegalActionError& e) {
    return error(422, "illegal_action", e.what());
  } catch (const ConfigError& e) {
    return error(400, "config", e.what());
  } catch (const nlohmann::json::exception& e) {
    return error(400, "bad_request", e.what());
  } catch (const BadRequest& e) {
    return error(400, "bad_request", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

ApiResponse PlayApi::create(const std::string& body) {
  return guarded([&] {
    const auto doc = body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
    if (!doc.is_object()) throw ConfigError("session config must be a JSON object");
    SessionConfig cfg;
    cfg.agent = parse_agent_json(body, "session config");
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.debug = doc.value("debug", false);
    const auto id = sessions_.create(cfg);
    return ApiResponse{201, snapshot_json(sessions_.state(id))};
  });
}

ApiResponse PlayApi::submit(const std::string& id, const std::string& body) {
  return guarded([&] {
    const auto doc = nlohmann::json::parse(body.empty() ? std::string("{}") : body);
    if (!doc.is_object() || !doc.contains("action") || !doc.at("action").is_string())
      throw BadRequest("body must be {\"action\": \"<action id>\"}");
    const auto batch = sessions_.submit(id, doc.at("action").get<std::string>());
    return ApiResponse{200, frame_batch_json(batch, sessions_.engine().roster())};
  });
}

ApiResponse PlayApi::state(const std::string& id) {
  return guarded([&] { return ApiResponse{200, snapshot_json(sessions_.state(id))}; });
}

ApiResponse PlayApi::close(const std::string& id) {
  return guarded([&] {
    sessions_.close(id);
    return ApiResponse{200, ordered_json{{"id", id}, {"closed", true}}.dump()};
  });
}

struct HttpServer::Impl {
  explicit Impl(SessionManager& s) : api(s) {}
  PlayApi api;
  httplib::Server server;
};

HttpServer::HttpServer(SessionManager& sessions) : impl_(std::make_unique<Impl>(sessions)) {
  auto& srv = impl_->server;
  auto& api = impl_->api;
  const auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  // The browser console is served from a different origin.
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.Post("/sessions", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.create(req.body));
  });
  srv.Post(R"(/sessions/([^/]+)/action)", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.submit(req.matches[1], req.body));
  });
  srv.Get(R"(/sessions/([^/]+))", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.state(req.matches[1]));
  });
  srv.Delete(R"(/sessions/([^/]+))", [&api, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.close(req.matches[1]));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  if (port == 0) {
    const int p = srv.bind_to_any_port(host);
    if (p < 0) throw std::runtime_error("cannot bind " + host + ":0");
    return p;
  }
  if (!srv.bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace pda
