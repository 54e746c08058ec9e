#include "collex/service/session.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "collex/domain_io.hpp"
#include "collex/harness.hpp"
#include "collex/random.hpp"
#include "collex/text_io.hpp"

namespace collex::service {

namespace {

ServiceError bad_request(const std::string& what) { return ServiceError(400, "bad_request", what); }
ServiceError invalid(const std::string& what) { return ServiceError(422, "invalid_answer", what); }

void require_known_keys(const Json& j, std::initializer_list<std::string_view> keys, const char* where) {
  if (!j.is_object()) throw bad_request(std::string(where) + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw bad_request("unknown key '" + k + "' in " + where);
}

template <class T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw bad_request(std::string("bad value for '") + key + "'");
  }
}

Json names_json(const Universe& m, const AttributeSet& s) { return Json(m.names_of(s)); }

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::AwaitingAnswers:
      return "awaiting_answers";
    case Phase::AwaitingCombine:
      return "awaiting_combine";
    case Phase::Done:
      return "done";
  }
  return "done";
}

Json spec_to_json(const SessionSpec& spec) {
  Json j;
  if (!spec.context.empty()) j["context"] = spec.context;
  if (spec.random_target)
    j["random_target"] = {{"m", spec.random_target->m},
                          {"density", spec.random_target->density},
                          {"seed", spec.random_target->seed}};
  if (!spec.attributes.empty()) j["attributes"] = spec.attributes;
  j["domain"] = spec.domain;
  const auto& o = spec.options;
  Json opts;
  opts["combine"] = o.combine;
  opts["accept_on_null"] = o.accept_on_null;
  opts["mode"] = o.mode == ConsortiumMode::Strong ? "strong" : "sampled";
  opts["strategy"] = policy_name(o.strategy.policy);
  opts["sample_size"] = o.strategy.sample_size;
  opts["strategy_seed"] = o.strategy.seed;
  opts["simulate"] = o.simulate;
  opts["max_queries"] = o.max_queries ? Json(*o.max_queries) : Json();
  opts["combine_timeout_ms"] = o.combine_timeout_ms;
  j["options"] = opts;
  return j;
}

SessionSpec spec_from_json(const Json& j) {
  require_known_keys(j, {"context", "random_target", "attributes", "domain", "options"}, "session");
  SessionSpec spec;
  spec.context = field<std::string>(j, "context", "");
  if (j.contains("random_target")) {
    const auto& r = j.at("random_target");
    require_known_keys(r, {"m", "density", "seed"}, "random_target");
    spec.random_target = RandomTarget{field<std::size_t>(r, "m", 4), field<double>(r, "density", 0.3),
                                      field<std::uint64_t>(r, "seed", 0)};
  }
  spec.attributes = field<std::vector<std::string>>(j, "attributes", {});
  spec.domain = field<std::string>(j, "domain", "");
  if (j.contains("options")) {
    const auto& o = j.at("options");
    require_known_keys(o,
                       {"combine", "accept_on_null", "mode", "strategy", "sample_size", "strategy_seed", "simulate",
                        "max_queries", "combine_timeout_ms"},
                       "options");
    auto& out = spec.options;
    out.combine = field<bool>(o, "combine", false);
    out.accept_on_null = field<bool>(o, "accept_on_null", false);
    const auto mode = field<std::string>(o, "mode", "strong");
    if (mode == "strong")
      out.mode = ConsortiumMode::Strong;
    else if (mode == "sampled")
      out.mode = ConsortiumMode::Sampled;
    else
      throw bad_request("mode must be 'strong' or 'sampled'");
    const auto policy = parse_policy(field<std::string>(o, "strategy", "all"));
    if (!policy) throw bad_request("unknown strategy");
    out.strategy.policy = *policy;
    out.strategy.sample_size = field<std::size_t>(o, "sample_size", 1);
    out.strategy.seed = field<std::uint64_t>(o, "strategy_seed", 0);
    out.simulate = field<bool>(o, "simulate", false);
    if (o.contains("max_queries") && !o.at("max_queries").is_null())
      out.max_queries = field<std::size_t>(o, "max_queries", 0);
    out.combine_timeout_ms = field<std::int64_t>(o, "combine_timeout_ms", 30000);
    if (out.combine_timeout_ms < 0) throw bad_request("combine_timeout_ms must not be negative");
  }
  return spec;
}

Json answer_to_json(const WireAnswer& a) {
  Json j{{"expert", a.expert}, {"token", a.token}, {"query_id", a.query_id}, {"verdict", a.verdict}};
  if (!a.name.empty()) j["name"] = a.name;
  if (!a.present.empty()) j["present"] = a.present;
  if (!a.absent.empty()) j["absent"] = a.absent;
  return j;
}

WireAnswer answer_from_json(const Json& j) {
  require_known_keys(j, {"expert", "token", "query_id", "verdict", "name", "present", "absent", "session_id"},
                     "answer");
  WireAnswer a;
  a.expert = field<std::string>(j, "expert", "");
  a.token = field<std::string>(j, "token", "");
  if (!j.contains("query_id")) throw bad_request("answer without query_id");
  a.query_id = field<std::uint64_t>(j, "query_id", 0);
  a.verdict = field<std::string>(j, "verdict", "");
  a.name = field<std::string>(j, "name", "");
  a.present = field<std::vector<std::string>>(j, "present", {});
  a.absent = field<std::vector<std::string>>(j, "absent", {});
  return a;
}

// --- Session ----------------------------------------------------------------

namespace {

struct Built {
  UniversePtr universe;
  std::optional<TargetDomain> target;
  Consortium consortium;
};

Built build(const SessionSpec& spec) {
  std::optional<TargetDomain> target;
  UniversePtr universe;
  if (!spec.context.empty()) {
    target = TargetDomain::from_context(parse_burmeister(spec.context));
  } else if (spec.random_target) {
    const auto& r = *spec.random_target;
    if (r.density < 0.0 || r.density > 1.0) throw bad_request("density must lie in [0,1]");
    target = TargetDomain::from_closure_system(random_closure_system(r.m, r.density, r.seed));
  } else if (!spec.attributes.empty()) {
    universe = make_universe(spec.attributes);
  }
  if (target) universe = target->universe();
  const bool empty_universe = universe && universe->size() == 0;
  if (spec.domain.empty() && !empty_universe) throw bad_request("session without a domain");
  auto file = spec.domain.empty() ? DomainFile{ConsortialDomain(universe, std::vector<AttributeSet>{}), {}, {}}
                                  : parse_domain(spec.domain, universe);
  universe = file.domain.universe();
  if (spec.options.simulate && !target) throw bad_request("simulated experts need a context or random target");

  const auto& o = spec.options;
  std::optional<Consortium> c;
  if (target) {
    c = build_consortium(file, *target, o.mode, o.strategy);
  } else {
    std::vector<LocalExpertSpec> experts;
    for (std::size_t i = 0; i < file.domain.size(); ++i) {
      auto e = LocalExpertSpec::pre_expert(file.domain.id(i), file.domain.block(i), *universe, {});
      if (auto it = file.costs.find(file.domain.id(i)); it != file.costs.end()) e.cost = it->second;
      experts.push_back(std::move(e));
    }
    c = Consortium(file.domain, std::move(experts), o.mode, o.strategy);
  }
  c->accept_on_null = o.accept_on_null;
  return Built{universe, std::move(target), std::move(*c)};
}

}  // namespace

Session::Session(std::string id, SessionSpec spec)
    : id_(std::move(id)), spec_(std::move(spec)), explorer_(make_universe({})) {
  auto b = build(spec_);
  target_ = std::move(b.target);
  consortium_ = std::move(b.consortium);
  explorer_ = Explorer(b.universe, spec_.options.max_queries);
}

std::size_t Session::expert_index(const std::string& expert, const std::string& token) const {
  auto it = tokens_.find(expert);
  if (it == tokens_.end() || it->second != token) throw ServiceError(401, "unauthorized", "unknown expert or token");
  return *consortium_->domain().find(expert);
}

Json Session::register_expert(const std::string& expert, const std::string& token) {
  const auto& d = consortium_->domain();
  auto i = d.find(expert);
  if (!i) throw ServiceError(404, "unknown_expert", "no block labelled '" + expert + "'");
  tokens_[expert] = token;
  return {{"session_id", id_}, {"expert", expert}, {"token", token}, {"block", names_json(*d.universe(), d.block(*i))}};
}

Json Session::query_json(std::size_t i) const {
  const auto& m = *consortium_->universe();
  const auto r = restrict_query(assignment_->query, consortium_->domain().block(i)).normalized();
  return {{"premise", names_json(m, r.premise)},
          {"conclusion", names_json(m, r.conclusion)},
          {"text", format_implication(m, r)}};
}

Json Session::poll(const std::string& expert, const std::string& token) const {
  const auto i = expert_index(expert, token);
  Json j{{"session_id", id_}, {"query_id", query_id_}, {"phase", phase_name(phase_)}, {"kind", "none"}};
  if (phase_ == Phase::AwaitingAnswers && assignment_) {
    const auto& sel = assignment_->selected;
    if (std::find(sel.begin(), sel.end(), i) != sel.end() && !assignment_->answers.count(i)) {
      j["kind"] = "query";
      j["query"] = query_json(i);
    }
  } else if (phase_ == Phase::AwaitingCombine && combine_->waiting.count(i)) {
    j["kind"] = "combine";
    j["name"] = combine_->name;
  }
  return j;
}

PartialExample Session::example_from_wire(const WireAnswer& a, std::size_t expert) const {
  const auto& m = *consortium_->universe();
  PartialExample e;
  try {
    e = PartialExample{a.name, m.set_of(a.present), m.set_of(a.absent)};
    e.validate();
  } catch (const Error& err) {
    throw invalid(err.what());
  }
  const auto& block = consortium_->domain().block(expert);
  if (!(e.present | e.absent).is_subset_of(block)) throw invalid("attributes outside the expert's block");
  return e;
}

Json Session::answer(const WireAnswer& a) {
  const auto i = expert_index(a.expert, a.token);
  if (phase_ == Phase::Done) throw ServiceError(409, "session_done", "the exploration has finished");
  if (a.query_id != query_id_)
    throw ServiceError(409, "stale_query", "query " + std::to_string(a.query_id) + " is no longer open");

  if (phase_ == Phase::AwaitingCombine) {
    if (!combine_->waiting.count(i)) throw ServiceError(409, "not_expected", "no combine prompt for this expert");
    if (a.verdict == "refute") {
      if (!a.name.empty() && a.name != combine_->name) throw invalid("contribution names a different object");
      WireAnswer named = a;
      named.name = combine_->name;
      auto e = example_from_wire(named, i);
      try {
        registry_.combine(e);
      } catch (const ConflictingEvidenceError& err) {
        throw ServiceError(422, "conflicting_evidence", err.what());
      }
    } else if (a.verdict != "unknown") {
      throw invalid("combine prompts take 'refute' or 'unknown'");
    }
    combine_->waiting.erase(i);
  } else {
    const auto& sel = assignment_->selected;
    if (std::find(sel.begin(), sel.end(), i) == sel.end() || assignment_->answers.count(i))
      throw ServiceError(409, "not_expected", "no open query for this expert");
    ExpertAnswer ans;
    if (a.verdict == "accept") {
      ans = ExpertAnswer::accept();
    } else if (a.verdict == "refute") {
      if (a.name.empty()) throw invalid("a counterexample needs a name");
      ans = ExpertAnswer::refute(example_from_wire(a, i), i);
      const auto r = restrict_query(assignment_->query, consortium_->domain().block(i));
      if (!refutes(ans.example, r)) throw invalid("the example does not refute the query");
    } else {
      throw invalid("queries take 'accept' or 'refute'");
    }
    record(i, std::move(ans));
  }
  advance();
  return {{"session_id", id_}, {"ack", true}, {"query_id", query_id_}, {"phase", phase_name(phase_)}};
}

void Session::record(std::size_t i, ExpertAnswer ans) {
  auto& as = *assignment_;
  as.answers[i] = ans;
  if (consortium_->mode() == ConsortiumMode::Sampled && ans.verdict == Verdict::Refute) {
    conclude(aggregate_answers(*consortium_, as.query, {i}, {ans}));
    return;
  }
  if (as.answers.size() < as.selected.size()) return;
  std::vector<ExpertAnswer> aligned;
  for (auto k : as.selected) aligned.push_back(as.answers.at(k));
  conclude(aggregate_answers(*consortium_, as.query, as.selected, aligned));
}

void Session::start(Clock::time_point now) {
  now_ = now;
  advance();
}

bool Session::tick(Clock::time_point now) {
  now_ = now;
  if (phase_ != Phase::AwaitingCombine || now < combine_->deadline) return false;
  expire_combine();
  return true;
}

void Session::expire_combine() {
  if (phase_ != Phase::AwaitingCombine) throw ProtocolError("no combine prompt to expire");
  combine_->waiting.clear();
  advance();
}

void Session::open_assignment() {
  const Implication f = *explorer_.pending();
  std::vector<std::size_t> selected;
  try {
    selected = select_experts(*consortium_, f);
  } catch (const QualificationError&) {
    conclude(aggregate_answers(*consortium_, f, {}, {}));
    return;
  }
  assignment_ = Assignment{f, std::move(selected), {}};
  ++query_id_;
}

void Session::run_simulated() {
  if (!spec_.options.simulate) return;
  if (phase_ == Phase::AwaitingCombine) {
    for (auto j : combine_->waiting)
      if (auto d = describe_object(consortium_->expert(j), combine_->name)) registry_.combine(*d);
    combine_->waiting.clear();
    return;
  }
  while (assignment_) {
    const auto& as = *assignment_;
    auto next = std::find_if(as.selected.begin(), as.selected.end(), [&](auto i) { return !as.answers.count(i); });
    if (next == as.selected.end()) return;
    const auto i = *next;
    auto ans = local_answer(consortium_->expert(i), restrict_query(as.query, consortium_->domain().block(i)));
    if (ans.verdict == Verdict::Refute) ans.expert = i;
    record(i, std::move(ans));
  }
}

void Session::conclude(ExpertAnswer aggregate) {
  assignment_.reset();
  switch (aggregate.verdict) {
    case Verdict::Accept:
      explorer_.accept();
      return;
    case Verdict::Null:
      if (spec_.options.accept_on_null)
        explorer_.accept();
      else
        explorer_.defer();
      return;
    case Verdict::Refute:
      break;
  }
  const auto& name = aggregate.example.name;
  if (!spec_.options.combine || name.empty()) {
    explorer_.refute(std::move(aggregate.example), false);
    return;
  }
  validate_answer(*explorer_.pending(), aggregate);
  registry_.combine(aggregate.example);
  if (aggregate.expert) registry_.mark_asked(name, *aggregate.expert);
  CombinePrompt prompt{name, {}, now_ + std::chrono::milliseconds(spec_.options.combine_timeout_ms)};
  const auto& d = consortium_->domain();
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (registry_.asked(name, j)) continue;
    registry_.mark_asked(name, j);
    // experts who never registered cannot be asked
    if (spec_.options.simulate || tokens_.count(d.id(j))) prompt.waiting.insert(j);
  }
  combine_ = std::move(prompt);
  phase_ = Phase::AwaitingCombine;
  ++query_id_;
}

void Session::finish_combine() {
  const PartialExample merged = *registry_.find(combine_->name);
  combine_.reset();
  phase_ = Phase::AwaitingAnswers;
  explorer_.refute(merged, true);
}

void Session::advance() {
  while (phase_ != Phase::Done) {
    if (phase_ == Phase::AwaitingCombine) {
      run_simulated();
      if (!combine_->waiting.empty()) return;
      finish_combine();
      continue;
    }
    if (!assignment_) {
      if (explorer_.done()) {
        phase_ = Phase::Done;
        return;
      }
      open_assignment();
      continue;
    }
    run_simulated();
    if (assignment_) return;
  }
}

Json Session::status() const {
  const auto& d = consortium_->domain();
  const auto& m = *d.universe();
  Json experts = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i)
    experts.push_back({{"id", d.id(i)}, {"registered", tokens_.count(d.id(i)) > 0}});
  Json awaiting = Json::array();
  Json pending;
  if (phase_ == Phase::AwaitingAnswers && assignment_) {
    pending = {{"premise", names_json(m, assignment_->query.premise)},
               {"conclusion", names_json(m, assignment_->query.conclusion)}};
    for (auto i : assignment_->selected)
      if (!assignment_->answers.count(i)) awaiting.push_back(d.id(i));
  } else if (phase_ == Phase::AwaitingCombine) {
    pending = {{"combine", combine_->name}};
    for (auto i : combine_->waiting) awaiting.push_back(d.id(i));
  }
  const auto& st = explorer_.state();
  return {{"session_id", id_},
          {"phase", phase_name(phase_)},
          {"query_id", query_id_},
          {"queries", st.queries},
          {"repairs", st.repairs},
          {"examples", st.examples.size()},
          {"pending", pending},
          {"awaiting", awaiting},
          {"experts", experts}};
}

ExplorationReport Session::report() const { return explorer_.report(); }

Json Session::result() const {
  if (phase_ != Phase::Done) throw ServiceError(409, "not_ready", "the exploration is still running");
  const auto r = report();
  const auto& m = *r.base.universe();
  Json base = Json::array(), deferred = Json::array(), examples = Json::array();
  for (const auto& f : r.base) base.push_back(format_implication(m, f));
  for (const auto& f : r.deferred) deferred.push_back(format_implication(m, f));
  for (const auto& e : r.examples)
    examples.push_back({{"name", e.name}, {"present", names_json(m, e.present)}, {"absent", names_json(m, e.absent)}});
  return {{"session_id", id_},
          {"phase", phase_name(phase_)},
          {"query_id", query_id_},
          {"base", base},
          {"examples", examples},
          {"deferred", deferred},
          {"interval_note", r.interval_note},
          {"queries", r.queries},
          {"repairs", r.repairs},
          {"budget_exhausted", r.budget_exhausted},
          {"report", r.serialize()}};
}

// --- SessionManager -----------------------------------------------------------

SessionManager::SessionManager(Config config) : config_(std::move(config)) {
  if (!config_.log) return;
  if (std::filesystem::exists(*config_.log)) replay(*config_.log);
  log_.open(*config_.log, std::ios::app);
  if (!log_) throw Error("cannot open event log " + config_.log->string());
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& session) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(session);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + session + "'");
  return it->second;
}

std::vector<std::string> SessionManager::session_ids() const {
  std::lock_guard lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

void SessionManager::append(const Json& event) {
  if (!log_.is_open()) return;
  std::lock_guard lock(log_mutex_);
  log_ << event.dump() << '\n';
  log_.flush();
}

std::string SessionManager::next_token() {
  std::lock_guard lock(sessions_mutex_);
  ++token_counter_;
  if (config_.token_seed) return hex64(splitmix64(*config_.token_seed + token_counter_));
  std::random_device rd;
  return hex64((std::uint64_t{rd()} << 32) ^ rd()) + hex64((std::uint64_t{rd()} << 32) ^ rd());
}

void SessionManager::tick_locked(Session& s) {
  const auto q = s.query_id();
  if (s.tick(config_.clock())) append({{"event", "combine_timeout"}, {"session", s.id()}, {"query_id", q}});
}

namespace {

// Library errors raised by bad input become client errors.
template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const ServiceError&) {
    throw;
  } catch (const ParseError& e) {
    throw ServiceError(400, "parse_error", e.what());
  } catch (const CapacityError& e) {
    throw ServiceError(400, "capacity", e.what());
  } catch (const UniverseError& e) {
    throw ServiceError(422, "unknown_attribute", e.what());
  } catch (const ConflictingEvidenceError& e) {
    throw ServiceError(422, "conflicting_evidence", e.what());
  } catch (const ProtocolError& e) {
    throw ServiceError(422, "protocol", e.what());
  } catch (const InvariantError& e) {
    throw ServiceError(400, "invalid", e.what());
  }
}

}  // namespace

Json SessionManager::create(const SessionSpec& spec) {
  std::string id;
  {
    std::lock_guard lock(sessions_mutex_);
    id = "s" + std::to_string(next_session_++);
  }
  auto session = guarded([&] {
    auto s = std::make_unique<Session>(id, spec);
    s->start(config_.clock());
    return s;
  });
  auto entry = std::make_shared<Entry>();
  entry->session = std::move(session);
  Json out = {{"session_id", id},
              {"phase", phase_name(entry->session->phase())},
              {"query_id", entry->session->query_id()}};
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_[id] = entry;
  }
  append({{"event", "create"}, {"session", id}, {"spec", spec_to_json(spec)}});
  return out;
}

Json SessionManager::register_expert(const std::string& session, const std::string& expert) {
  auto e = find(session);
  std::lock_guard lock(e->mutex);
  tick_locked(*e->session);
  const auto token = next_token();
  auto out = e->session->register_expert(expert, token);
  append({{"event", "register"}, {"session", session}, {"expert", expert}, {"token", token}});
  return out;
}

Json SessionManager::poll(const std::string& session, const std::string& expert, const std::string& token) {
  auto e = find(session);
  std::lock_guard lock(e->mutex);
  tick_locked(*e->session);
  return e->session->poll(expert, token);
}

Json SessionManager::answer(const std::string& session, const WireAnswer& a) {
  auto e = find(session);
  std::lock_guard lock(e->mutex);
  tick_locked(*e->session);
  try {
    auto out = guarded([&] { return e->session->answer(a); });
    append({{"event", "answer"}, {"session", session}, {"answer", answer_to_json(a)}});
    return out;
  } catch (const ServiceError& err) {
    // kept for the audit trail; replay skips it
    append({{"event", "rejected"}, {"session", session}, {"answer", answer_to_json(a)}, {"error", err.code()}});
    throw;
  }
}

Json SessionManager::status(const std::string& session) {
  auto e = find(session);
  std::lock_guard lock(e->mutex);
  tick_locked(*e->session);
  return e->session->status();
}

Json SessionManager::result(const std::string& session) {
  auto e = find(session);
  std::lock_guard lock(e->mutex);
  tick_locked(*e->session);
  return e->session->result();
}

void SessionManager::replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    Json ev;
    try {
      ev = Json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw ParseError(line_number, "event log line is not JSON");
    }
    const auto kind = ev.value("event", "");
    const auto id = ev.value("session", "");
    if (kind == "create") {
      auto entry = std::make_shared<Entry>();
      entry->session = std::make_unique<Session>(id, spec_from_json(ev.at("spec")));
      entry->session->start(config_.clock());
      sessions_[id] = entry;
      if (id.size() > 1 && id[0] == 's')
        next_session_ = std::max<std::uint64_t>(next_session_, std::stoull(id.substr(1)) + 1);
      continue;
    }
    if (kind == "rejected") continue;
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ParseError(line_number, "event for unknown session '" + id + "'");
    auto& s = *it->second->session;
    if (kind == "register") {
      ++token_counter_;
      s.register_expert(ev.at("expert").get<std::string>(), ev.at("token").get<std::string>());
    } else if (kind == "answer") {
      s.answer(answer_from_json(ev.at("answer")));
    } else if (kind == "combine_timeout") {
      s.expire_combine();
    } else {
      throw ParseError(line_number, "unknown event '" + kind + "'");
    }
  }
}

}  // namespace collex::service
