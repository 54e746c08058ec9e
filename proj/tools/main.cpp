#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "collex/domain_io.hpp"
#include "collex/errors.hpp"
#include "collex/harness.hpp"
#include "collex/reconstruct.hpp"
#include "collex/service/http.hpp"
#include "collex/terminal.hpp"
#include "collex/text_io.hpp"

using namespace collex;

namespace {

constexpr int kInputError = 2;
constexpr int kCapacityError = 3;

service::HttpService* running = nullptr;

void on_signal(int) {
  if (running) running->stop();
}

struct ExploreArgs {
  std::string context;
  std::string consortium;
  std::string strategy = "all";
  std::string mode = "strong";
  std::size_t sample_size = 1;
  std::uint64_t seed = 0;
  bool combine = false;
  bool accept_on_null = false;
  bool interactive = false;
  std::size_t max_queries = 0;
};

int run_explore(const ExploreArgs& a) {
  const auto ctx = load_burmeister(a.context);
  const auto target = TargetDomain::from_context(ctx);
  ExploreOptions options{a.combine, a.accept_on_null, std::nullopt};
  if (a.max_queries > 0) options.max_queries = a.max_queries;

  ExplorationReport report{ImplicationTheory(ctx.attributes()), {}, {}, false, 0, 0, false};
  if (a.consortium.empty()) {
    if (a.interactive) {
      TerminalAnswerer human(std::cin, std::cerr, ctx.attributes());
      report = explore(human, ctx.attributes(), options);
    } else {
      DomainExpertAnswerer oracle(target);
      report = explore(oracle, ctx.attributes(), options);
    }
  } else {
    auto policy = parse_policy(a.strategy);
    if (!policy) throw std::invalid_argument("unknown strategy '" + a.strategy + "'");
    SelectionStrategy strategy{*policy, a.sample_size, a.seed};
    const auto mode = a.mode == "sampled" ? ConsortiumMode::Sampled : ConsortiumMode::Strong;
    auto consortium = build_consortium(load_domain(a.consortium, ctx.attributes()), target, mode, strategy);
    consortium.accept_on_null = a.accept_on_null;
    if (a.interactive) {
      TerminalAnswerer human(std::cin, std::cerr, consortium);
      report = explore(human, ctx.attributes(), options);
    } else {
      ConsortiumAnswerer answerer(consortium);
      report = explore(answerer, ctx.attributes(), options);
    }
  }
  std::cout << report.serialize();
  return 0;
}

int run_cover_check(const std::string& path, int k) {
  const auto file = load_domain(path);
  const auto r = can_reconstruct_class(file.domain, k);
  if (r.covered)
    std::cout << "covered\n";
  else
    std::cout << "not covered: " << file.domain.universe()->format(*r.witness) << '\n';
  return 0;
}

int run_steiner_check(const std::string& path, int t) {
  const auto file = load_domain(path);
  const bool yes = is_steiner_system(file.domain, t);
  std::cout << "Steiner system S(" << t << ',' << file.domain.block(0).count() << ','
            << file.domain.universe()->size() << "): " << (yes ? "yes" : "no") << '\n';
  return 0;
}

int run_serve(const std::string& host, int port, const std::string& log, std::optional<std::uint64_t> token_seed) {
  service::SessionManager::Config config;
  if (!log.empty()) config.log = log;
  config.token_seed = token_seed;
  service::SessionManager manager(std::move(config));
  service::HttpService http(manager);
  const int bound = http.bind(host, port);
  if (bound < 0) throw std::invalid_argument("cannot bind " + host + ":" + std::to_string(port));
  std::cout << "listening on " << host << ':' << bound << std::endl;
  running = &http;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  http.listen();
  running = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collaborative attribute exploration"};
  app.require_subcommand(1);

  ExploreArgs ex;
  auto* explore_cmd = app.add_subcommand("explore", "explore a context and print the report");
  explore_cmd->add_option("context", ex.context, "Burmeister .cxt file")->required();
  explore_cmd->add_option("--consortium", ex.consortium, "consortial-domain .dom file");
  explore_cmd->add_option("--strategy", ex.strategy, "all | first | max-block | cost | random");
  explore_cmd->add_option("--mode", ex.mode, "strong | sampled")->check(CLI::IsMember({"strong", "sampled"}));
  explore_cmd->add_option("--sample-size", ex.sample_size, "experts drawn by the random strategy");
  explore_cmd->add_option("--seed", ex.seed, "seed for the random strategy");
  explore_cmd->add_flag("--combine", ex.combine, "merge counterexamples by name across experts");
  explore_cmd->add_flag("--accept-on-null", ex.accept_on_null, "accept queries nobody can judge");
  explore_cmd->add_flag("--interactive", ex.interactive, "answer the queries on the terminal");
  explore_cmd->add_option("--max-queries", ex.max_queries, "query budget, 0 for none");

  std::string config_path;
  bool json = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a simulation config");
  simulate_cmd->add_option("config", config_path, "key = value config file")->required();
  simulate_cmd->add_flag("--json", json, "print JSON instead of text");

  std::string dom_path;
  int k = 0;
  auto* cover_cmd = app.add_subcommand("cover-check", "does every (k+1)-subset lie in some block");
  cover_cmd->add_option("domain", dom_path, ".dom file")->required();
  cover_cmd->add_option("--k", k, "premise complexity")->required();

  int t = 0;
  auto* steiner_cmd = app.add_subcommand("steiner-check", "is the block family a Steiner system");
  steiner_cmd->add_option("domain", dom_path, ".dom file")->required();
  steiner_cmd->add_option("--t", t, "subset size")->required();

  std::string base_path;
  auto* base_cmd = app.add_subcommand("base", "print the canonical base of a context");
  base_cmd->add_option("context", base_path, "Burmeister .cxt file")->required();

  std::string host = "127.0.0.1", log;
  int port = 8080;
  std::optional<std::uint64_t> token_seed;
  auto* serve_cmd = app.add_subcommand("serve", "run the session service");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port, "0 picks a free port");
  serve_cmd->add_option("--log", log, "append-only event log, replayed on start");
  serve_cmd->add_option("--token-seed", token_seed, "deterministic expert tokens");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*explore_cmd) return run_explore(ex);
    if (*simulate_cmd) {
      const auto report = run_simulation(load_config(config_path));
      std::cout << (json ? report.to_json() + "\n" : report.serialize());
      return 0;
    }
    if (*cover_cmd) return run_cover_check(dom_path, k);
    if (*steiner_cmd) return run_steiner_check(dom_path, t);
    if (*base_cmd) {
      const auto ctx = load_burmeister(base_path);
      std::cout << write_implications(canonical_base(all_intents(ctx)));
      return 0;
    }
    if (*serve_cmd) return run_serve(host, port, log, token_seed);
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacityError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
