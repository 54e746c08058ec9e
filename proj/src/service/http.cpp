#include "collex/service/http.hpp"

#include "httplib.h"

namespace collex::service {

namespace {

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
httplib::Server::Handler handle(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      send(res, 200, f(req));
    } catch (const ServiceError& e) {
      send(res, e.status(), {{"error", e.code()}, {"message", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      send(res, 400, {{"error", "bad_request"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", "internal"}, {"message", e.what()}});
    }
  };
}

Json body_of(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::exception&) {
    throw ServiceError(400, "bad_request", "body is not JSON");
  }
}

std::string param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) throw ServiceError(400, "bad_request", std::string("missing parameter '") + key + "'");
  return req.get_param_value(key);
}

}  // namespace

HttpService::HttpService(SessionManager& manager) : manager_(manager), server_(std::make_unique<httplib::Server>()) {
  auto& m = manager_;
  server_->Post("/sessions", handle([&m](const auto& req) { return m.create(spec_from_json(body_of(req))); }));
  server_->Get(R"(/sessions/([^/]+))", handle([&m](const auto& req) { return m.status(req.matches[1]); }));
  server_->Post(R"(/sessions/([^/]+)/experts)", handle([&m](const auto& req) {
                  const auto body = body_of(req);
                  if (!body.is_object() || !body.contains("expert") || !body.at("expert").is_string())
                    throw ServiceError(400, "bad_request", "expected {\"expert\": id}");
                  return m.register_expert(req.matches[1], body.at("expert").template get<std::string>());
                }));
  server_->Get(R"(/sessions/([^/]+)/poll)", handle([&m](const auto& req) {
                 return m.poll(req.matches[1], param(req, "expert"), param(req, "token"));
               }));
  server_->Post(R"(/sessions/([^/]+)/answers)",
                handle([&m](const auto& req) { return m.answer(req.matches[1], answer_from_json(body_of(req))); }));
  server_->Get(R"(/sessions/([^/]+)/result)", handle([&m](const auto& req) { return m.result(req.matches[1]); }));
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) return -1;
  return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

void HttpService::stop() { server_->stop(); }

}  // namespace collex::service
