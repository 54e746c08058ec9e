#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "collex/consortium.hpp"
#include "collex/errors.hpp"
#include "collex/exploration.hpp"
#include "json.hpp"

namespace collex::service {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

/// Error with an HTTP status and a stable machine-readable code.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& what)
      : Error(what), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

struct SessionOptions {
  bool combine = false;
  bool accept_on_null = false;
  ConsortiumMode mode = ConsortiumMode::Strong;
  SelectionStrategy strategy;
  bool simulate = false;  // every expert is answered from the target
  std::optional<std::size_t> max_queries;
  std::int64_t combine_timeout_ms = 30000;
};

struct RandomTarget {
  std::size_t m = 4;
  double density = 0.3;
  std::uint64_t seed = 0;
};

/// What a session is created from. The universe comes from the context, the
/// random target, the attribute list or, failing those, the domain file.
struct SessionSpec {
  std::string context;  // Burmeister text
  std::optional<RandomTarget> random_target;
  std::vector<std::string> attributes;
  std::string domain;  // consortial-domain file text
  SessionOptions options;
};

Json spec_to_json(const SessionSpec& spec);
SessionSpec spec_from_json(const Json& j);

enum class Phase { AwaitingAnswers, AwaitingCombine, Done };
std::string phase_name(Phase p);

struct WireAnswer {
  std::string expert;
  std::string token;
  std::uint64_t query_id = 0;
  std::string verdict;  // accept | refute | unknown
  std::string name;
  std::vector<std::string> present;
  std::vector<std::string> absent;
};

Json answer_to_json(const WireAnswer& a);
WireAnswer answer_from_json(const Json& j);

class Session {
 public:
  Session(std::string id, SessionSpec spec);

  const std::string& id() const noexcept { return id_; }
  const SessionSpec& spec() const noexcept { return spec_; }
  Phase phase() const noexcept { return phase_; }
  std::uint64_t query_id() const noexcept { return query_id_; }

  // Returns the block as attribute names. Re-registering replaces the token.
  Json register_expert(const std::string& expert, const std::string& token);
  Json poll(const std::string& expert, const std::string& token) const;
  Json answer(const WireAnswer& a);
  Json status() const;
  // ServiceError "not_ready" until the phase is Done.
  Json result() const;
  ExplorationReport report() const;

  void start(Clock::time_point now);
  // Expires a combine prompt whose deadline has passed; true if it did.
  bool tick(Clock::time_point now);
  // Expires the current combine prompt regardless of time.
  void expire_combine();

 private:
  struct Assignment {
    Implication query;
    std::vector<std::size_t> selected;
    std::map<std::size_t, ExpertAnswer> answers;
  };
  struct CombinePrompt {
    std::string name;
    std::set<std::size_t> waiting;
    Clock::time_point deadline;
  };

  std::size_t expert_index(const std::string& expert, const std::string& token) const;
  void advance();
  void open_assignment();
  void run_simulated();
  void record(std::size_t expert, ExpertAnswer answer);
  void conclude(ExpertAnswer aggregate);
  void finish_combine();
  PartialExample example_from_wire(const WireAnswer& a, std::size_t expert) const;
  Json query_json(std::size_t expert) const;

  std::string id_;
  SessionSpec spec_;
  std::optional<TargetDomain> target_;
  std::optional<Consortium> consortium_;
  std::map<std::string, std::string> tokens_;  // expert id -> token
  Explorer explorer_;
  ExampleRegistry registry_;
  Phase phase_ = Phase::AwaitingAnswers;
  std::uint64_t query_id_ = 0;
  std::optional<Assignment> assignment_;
  std::optional<CombinePrompt> combine_;
  Clock::time_point now_{};
};

/// All sessions, each behind its own mutex, plus the event log.
class SessionManager {
 public:
  struct Config {
    std::optional<std::filesystem::path> log;
    std::optional<std::uint64_t> token_seed;  // deterministic tokens for tests
    std::function<Clock::time_point()> clock = [] { return Clock::now(); };
  };

  explicit SessionManager(Config config);

  Json create(const SessionSpec& spec);
  Json register_expert(const std::string& session, const std::string& expert);
  Json poll(const std::string& session, const std::string& expert, const std::string& token);
  Json answer(const std::string& session, const WireAnswer& a);
  Json status(const std::string& session);
  Json result(const std::string& session);

  std::vector<std::string> session_ids() const;

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };

  std::shared_ptr<Entry> find(const std::string& session) const;
  void replay(const std::filesystem::path& path);
  void append(const Json& event);
  std::string next_token();
  void tick_locked(Session& s);

  Config config_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_session_ = 1;
  std::uint64_t token_counter_ = 0;
  std::mutex log_mutex_;
  std::ofstream log_;
};

}  // namespace collex::service
