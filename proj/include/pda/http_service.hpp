#pragma once

// JSON-over-HTTP front end for SessionManager.
//
//   POST   /sessions               body: agent block, optional "seed", "debug"
//   POST   /sessions/{id}/action   body: {"action": "<roster id>"}
//   GET    /sessions/{id}
//   DELETE /sessions/{id}
//
// Errors come back as {"error": <kind>, "message": ...} with status 400
// (config or malformed body), 404 (not_found), 409 (state) or 422 (illegal_action).

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "pda/session.hpp"

namespace pda {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Route handlers without the transport, so they can be driven directly.
class PlayApi {
 public:
  explicit PlayApi(SessionManager& sessions) : sessions_(sessions) {}

  ApiResponse create(const std::string& body);
  ApiResponse submit(const std::string& id, const std::string& body);
  ApiResponse state(const std::string& id);
  ApiResponse close(const std::string& id);

 private:
  template <class F>
  ApiResponse guarded(F&& f);

  SessionManager& sessions_;
};

std::string frame_batch_json(const FrameBatch& batch, const ActionRoster& roster);
std::string snapshot_json(const SessionSnapshot& snap);

class HttpServer {
 public:
  explicit HttpServer(SessionManager& sessions);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port` (port 0 picks a free one) and returns the port.
  /// Throws std::runtime_error when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pda
