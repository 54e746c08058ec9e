#pragma once

#include <memory>
#include <string>

#include "collex/service/session.hpp"

namespace httplib {
class Server;
}

namespace collex::service {

/// JSON-over-HTTP front end for a SessionManager.
///
///   POST /sessions                      create a session
///   GET  /sessions/{id}                 status
///   POST /sessions/{id}/experts         register an expert, returns a token
///   GET  /sessions/{id}/poll            ?expert=..&token=..
///   POST /sessions/{id}/answers         answer a query or combine prompt
///   GET  /sessions/{id}/result          report once done
///
/// Errors are {"error": code, "message": text} with a matching status.
class HttpService {
 public:
  explicit HttpService(SessionManager& manager);
  ~HttpService();

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();

 private:
  SessionManager& manager_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace collex::service
