#pragma once

// Scripted experts that talk to a session over the wire protocol, either
// in-process through a SessionManager or over HTTP.

#include <functional>
#include <map>
#include <string>

#include "collex/consortium.hpp"
#include "collex/service/session.hpp"
#include "httplib.h"

namespace testing_support {

using collex::service::Json;
using collex::service::ServiceError;

struct Transport {
  virtual ~Transport() = default;
  virtual Json create(const Json& spec) = 0;
  virtual Json register_expert(const std::string& sid, const std::string& expert) = 0;
  virtual Json poll(const std::string& sid, const std::string& expert, const std::string& token) = 0;
  virtual Json answer(const std::string& sid, const Json& answer) = 0;
  virtual Json status(const std::string& sid) = 0;
  virtual Json result(const std::string& sid) = 0;
};

struct LocalTransport : Transport {
  explicit LocalTransport(collex::service::SessionManager& m) : manager(m) {}
  Json create(const Json& spec) override { return manager.create(collex::service::spec_from_json(spec)); }
  Json register_expert(const std::string& sid, const std::string& expert) override {
    return manager.register_expert(sid, expert);
  }
  Json poll(const std::string& sid, const std::string& expert, const std::string& token) override {
    return manager.poll(sid, expert, token);
  }
  Json answer(const std::string& sid, const Json& a) override {
    return manager.answer(sid, collex::service::answer_from_json(a));
  }
  Json status(const std::string& sid) override { return manager.status(sid); }
  Json result(const std::string& sid) override { return manager.result(sid); }

  collex::service::SessionManager& manager;
};

// Every exchange is appended to `transcript` when set.
struct HttpTransport : Transport {
  explicit HttpTransport(int port) : client("127.0.0.1", port) {}

  Json call(const std::string& method, const std::string& path, const Json* body) {
    httplib::Result r = method == "GET" ? client.Get(path)
                                        : client.Post(path, body ? body->dump() : "{}", "application/json");
    if (!r) throw std::runtime_error("http request failed");
    Json response = Json::parse(r->body);
    if (transcript) {
      Json line{{"method", method}, {"path", path}};
      if (body) line["body"] = *body;
      line["status"] = r->status;
      line["response"] = response;
      transcript->push_back(line);
    }
    if (r->status != 200)
      throw ServiceError(r->status, response.value("error", ""), response.value("message", ""));
    return response;
  }

  Json create(const Json& spec) override { return call("POST", "/sessions", &spec); }
  Json register_expert(const std::string& sid, const std::string& expert) override {
    Json body{{"expert", expert}};
    return call("POST", "/sessions/" + sid + "/experts", &body);
  }
  Json poll(const std::string& sid, const std::string& expert, const std::string& token) override {
    return call("GET", "/sessions/" + sid + "/poll?expert=" + expert + "&token=" + token, nullptr);
  }
  Json answer(const std::string& sid, const Json& a) override {
    return call("POST", "/sessions/" + sid + "/answers", &a);
  }
  Json status(const std::string& sid) override { return call("GET", "/sessions/" + sid, nullptr); }
  Json result(const std::string& sid) override { return call("GET", "/sessions/" + sid + "/result", nullptr); }

  httplib::Client client;
  std::vector<Json>* transcript = nullptr;
};

inline collex::Implication implication_of(const collex::Universe& m, const Json& q) {
  return {m.set_of(q.at("premise").get<std::vector<std::string>>()),
          m.set_of(q.at("conclusion").get<std::vector<std::string>>())};
}

inline Json wire_example(const collex::Universe& m, const collex::PartialExample& e) {
  return {{"name", e.name}, {"present", m.names_of(e.present)}, {"absent", m.names_of(e.absent)}};
}

// What expert i of `truth` replies to a poll, or null when there is nothing to do.
inline Json scripted_reply(const collex::Consortium& truth, std::size_t i, const Json& poll, const std::string& token) {
  const auto& m = *truth.universe();
  const auto& spec = truth.expert(i);
  Json a{{"expert", spec.id}, {"token", token}, {"query_id", poll.at("query_id")}};
  const auto kind = poll.at("kind").get<std::string>();
  if (kind == "query") {
    auto ans = collex::local_answer(spec, implication_of(m, poll.at("query")));
    if (ans.verdict == collex::Verdict::Accept) {
      a["verdict"] = "accept";
    } else {
      a["verdict"] = "refute";
      a.update(wire_example(m, ans.example));
    }
    return a;
  }
  if (kind == "combine") {
    if (auto d = collex::describe_object(spec, poll.at("name").get<std::string>())) {
      a["verdict"] = "refute";
      a.update(wire_example(m, *d));
    } else {
      a["verdict"] = "unknown";
    }
    return a;
  }
  return Json();
}

// Registers every expert and answers, one reply at a time in block order,
// until the session is done. Returns the result body.
inline Json drive(Transport& t, const std::string& sid, const collex::Consortium& truth,
                  const std::function<void(std::size_t, const Json&)>& on_poll = {}) {
  std::map<std::size_t, std::string> tokens;
  for (std::size_t i = 0; i < truth.domain().size(); ++i)
    tokens[i] = t.register_expert(sid, truth.domain().id(i)).at("token").get<std::string>();
  for (int guard = 0; guard < 100000; ++guard) {
    if (t.status(sid).at("phase") == "done") return t.result(sid);
    bool acted = false;
    for (std::size_t i = 0; i < truth.domain().size() && !acted; ++i) {
      const auto p = t.poll(sid, truth.domain().id(i), tokens[i]);
      if (on_poll) on_poll(i, p);
      auto reply = scripted_reply(truth, i, p, tokens[i]);
      if (reply.is_null()) continue;
      t.answer(sid, reply);
      acted = true;
    }
    if (!acted) throw std::runtime_error("session stalled");
  }
  throw std::runtime_error("session did not finish");
}

}  // namespace testing_support
