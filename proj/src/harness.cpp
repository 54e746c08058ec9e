#include "collex/harness.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <random>

#include "collex/domain_io.hpp"
#include "collex/errors.hpp"
#include "collex/random.hpp"
#include "collex/text_io.hpp"
#include "json.hpp"

namespace collex {

namespace {

std::vector<std::string> letter_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("m" + std::to_string(i + 1));
  return names;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& value, std::size_t line) {
  T out{};
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size())
    throw ParseError(line, "invalid number '" + value + "'");
  return out;
}

bool parse_bool(const std::string& value, std::size_t line) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw ParseError(line, "invalid boolean '" + value + "'");
}

double parse_fraction(const std::string& value, std::size_t line) {
  const auto d = parse_number<double>(value, line);
  if (d < 0.0 || d > 1.0) throw ParseError(line, "value '" + value + "' outside [0, 1]");
  return d;
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t repetition, std::uint64_t salt) {
  return splitmix64(splitmix64(seed ^ salt) + repetition);
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

ClosureSystem random_closure_system(const UniversePtr& universe, double density, std::uint64_t seed) {
  const auto m = universe->size();
  if (m > kRandomSystemCap)
    throw CapacityError("random closure systems are limited to |M| <= " + std::to_string(kRandomSystemCap));
  std::mt19937_64 rng(seed);
  const std::uint32_t top = (std::uint32_t{1} << m) - 1;
  // meet[s]: intersection of every chosen set containing s (top if none).
  std::vector<std::uint32_t> meet(std::size_t{top} + 1, top);
  for (std::uint32_t s = 0; s <= top; ++s)
    if (bernoulli(rng, density)) meet[s] = s;
  for (std::uint32_t s = top + 1; s-- > 0;)
    for (std::size_t i = 0; i < m; ++i)
      if (!((s >> i) & 1U)) meet[s] &= meet[s | (std::uint32_t{1} << i)];
  std::vector<AttributeSet> sets;
  for (std::uint32_t s = 0; s <= top; ++s)
    if (meet[s] == s) sets.push_back(AttributeSet::from_mask(m, s));
  return ClosureSystem(universe, std::move(sets), ClosureSystem::Unchecked{});
}

ClosureSystem random_closure_system(std::size_t m, double density, std::uint64_t seed) {
  return random_closure_system(make_universe(letter_names(m)), density, seed);
}

ConsortialDomain random_cover(const UniversePtr& universe, std::size_t blocks, std::uint64_t seed) {
  if (blocks == 0) throw InvariantError("random cover needs at least one block");
  const auto n = universe->size();
  std::mt19937_64 rng(seed);
  std::vector<AttributeSet> out(blocks, AttributeSet(n));
  for (auto& b : out)
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1U) b.insert(i);
  AttributeSet covered(n);
  for (const auto& b : out) covered |= b;
  for (std::size_t i = 0; i < n; ++i)
    if (!covered.contains(i)) out[rng() % blocks].insert(i);
  if (n > 0)
    for (auto& b : out)
      if (b.empty()) b.insert(rng() % n);
  return ConsortialDomain(universe, std::move(out));
}

SimulationConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  SimulationConfig cfg;
  cfg.base_dir = base_dir;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(strip_comment(text.substr(start, end - start)));
    start = end + 1;
    ++line_number;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_number, "expected 'key = value'");
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) throw ParseError(line_number, "missing value for '" + key + "'");

    if (key == "m") {
      cfg.m = parse_number<std::size_t>(value, line_number);
    } else if (key == "target") {
      cfg.target = value;
    } else if (key == "density") {
      cfg.density = parse_fraction(value, line_number);
    } else if (key == "domain") {
      cfg.domain = value;
    } else if (key == "experts") {
      if (value == "expert")
        cfg.experts = ExpertKind::Expert;
      else if (value == "pre-expert")
        cfg.experts = ExpertKind::PreExpert;
      else
        throw ParseError(line_number, "experts must be 'expert' or 'pre-expert'");
    } else if (key == "knowledge") {
      cfg.knowledge = parse_fraction(value, line_number);
    } else if (key == "mode") {
      if (value == "strong")
        cfg.mode = ConsortiumMode::Strong;
      else if (value == "sampled")
        cfg.mode = ConsortiumMode::Sampled;
      else
        throw ParseError(line_number, "mode must be 'strong' or 'sampled'");
    } else if (key == "strategy") {
      auto policy = parse_policy(value);
      if (!policy) throw ParseError(line_number, "unknown strategy '" + value + "'");
      cfg.strategy.policy = *policy;
    } else if (key == "sample_size") {
      cfg.strategy.sample_size = parse_number<std::size_t>(value, line_number);
    } else if (key == "combine") {
      cfg.combine = parse_bool(value, line_number);
    } else if (key == "accept_on_null") {
      cfg.accept_on_null = parse_bool(value, line_number);
    } else if (key == "repetitions") {
      cfg.repetitions = parse_number<std::size_t>(value, line_number);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, line_number);
    } else if (key == "max_queries") {
      cfg.max_queries = parse_number<std::size_t>(value, line_number);
    } else {
      throw ParseError(line_number, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

SimulationSetup build_setup(const SimulationConfig& cfg, std::size_t repetition) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() ? cfg.base_dir / path : path;
  };

  std::optional<TargetDomain> target;
  if (cfg.target == "random") {
    target = TargetDomain::from_closure_system(
        random_closure_system(cfg.m, cfg.density, repetition_seed(cfg.seed, repetition, 0x7a56e7)));
  } else {
    target = TargetDomain::from_context(load_burmeister(resolve(cfg.target)));
  }
  const auto& m = target->universe();

  const auto space = cfg.domain.find(' ');
  const auto kind = cfg.domain.substr(0, space);
  const auto arg = space == std::string::npos ? std::string{} : trim(cfg.domain.substr(space + 1));
  DomainFile file{ConsortialDomain(m, {AttributeSet::full(m->size())}), {}, {}};
  if (kind == "k-subsets") {
    file.domain = all_k_subsets(m, std::stoul(arg));
  } else if (kind == "random") {
    file.domain = random_cover(m, std::stoul(arg), repetition_seed(cfg.seed, repetition, 0xd0ba1));
  } else {
    file = load_domain(resolve(cfg.domain), m);
  }

  auto consortium = build_consortium(file, *target, cfg.mode, cfg.strategy);
  if (cfg.experts == ExpertKind::PreExpert) {
    std::mt19937_64 rng(repetition_seed(cfg.seed, repetition, 0x9e0e));
    std::vector<LocalExpertSpec> experts;
    for (std::size_t i = 0; i < file.domain.size(); ++i) {
      std::vector<std::string> known;
      for (const auto& o : target->objects())
        if (bernoulli(rng, cfg.knowledge)) known.push_back(o.name);
      auto spec = LocalExpertSpec::pre_expert(file.domain.id(i), file.domain.block(i), *target, known);
      spec.cost = consortium.expert(i).cost;
      experts.push_back(std::move(spec));
    }
    consortium = Consortium(file.domain, std::move(experts), cfg.mode, cfg.strategy);
  }
  consortium.accept_on_null = cfg.accept_on_null;
  return SimulationSetup{std::move(*target), std::move(consortium)};
}

SimulationRun score_run(std::size_t index, const ClosureSystem& target, const ExplorationReport& report) {
  SimulationRun run;
  run.index = index;
  const auto result = models_of(report.base);
  std::size_t common = 0;
  for (const auto& s : target.sets())
    if (result.contains(s)) ++common;
  const auto joined = target.size() + result.size() - common;
  run.jaccard = joined == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(joined);
  run.exact = result == target;
  run.deferred = report.deferred.size();
  run.repairs = report.repairs;
  run.queries = report.queries;
  run.target_size = target.size();
  run.result_size = result.size();
  for (const auto& f : report.base)
    if (!holds_in(f, target)) ++run.false_accepts;
  return run;
}

SimulationReport run_simulation(const SimulationConfig& cfg) {
  SimulationReport report;
  for (std::size_t r = 0; r < cfg.repetitions; ++r) {
    auto setup = build_setup(cfg, r);
    ConsortiumAnswerer answerer(setup.consortium);
    ExploreOptions options{cfg.combine, cfg.accept_on_null, std::nullopt};
    if (cfg.max_queries > 0) options.max_queries = cfg.max_queries;
    auto result = explore(answerer, setup.target.universe(), options);
    report.runs.push_back(score_run(r, setup.target.system(), result));
  }
  return report;
}

namespace {

template <class F>
double mean_of(const std::vector<SimulationRun>& runs, F f) {
  if (runs.empty()) return 0.0;
  double sum = 0;
  for (const auto& r : runs) sum += static_cast<double>(f(r));
  return sum / static_cast<double>(runs.size());
}

}  // namespace

double SimulationReport::exact_rate() const { return mean_of(runs, [](const auto& r) { return r.exact ? 1 : 0; }); }
double SimulationReport::mean_jaccard() const { return mean_of(runs, [](const auto& r) { return r.jaccard; }); }
double SimulationReport::mean_deferred() const { return mean_of(runs, [](const auto& r) { return r.deferred; }); }
double SimulationReport::mean_repairs() const { return mean_of(runs, [](const auto& r) { return r.repairs; }); }
double SimulationReport::mean_false_accepts() const {
  return mean_of(runs, [](const auto& r) { return r.false_accepts; });
}
double SimulationReport::mean_queries() const { return mean_of(runs, [](const auto& r) { return r.queries; }); }

std::string SimulationReport::serialize() const {
  std::string out;
  for (const auto& r : runs) {
    out += "run " + std::to_string(r.index) + ": exact=" + (r.exact ? "true" : "false") +
           " jaccard=" + fixed(r.jaccard) + " deferred=" + std::to_string(r.deferred) +
           " repairs=" + std::to_string(r.repairs) + " false_accepts=" + std::to_string(r.false_accepts) +
           " queries=" + std::to_string(r.queries) + " target=" + std::to_string(r.target_size) +
           " result=" + std::to_string(r.result_size) + "\n";
  }
  out += "runs = " + std::to_string(runs.size()) + "\n";
  out += "exact_rate = " + fixed(exact_rate()) + "\n";
  out += "mean_jaccard = " + fixed(mean_jaccard()) + "\n";
  out += "mean_deferred = " + fixed(mean_deferred()) + "\n";
  out += "mean_repairs = " + fixed(mean_repairs()) + "\n";
  out += "mean_false_accepts = " + fixed(mean_false_accepts()) + "\n";
  out += "mean_queries = " + fixed(mean_queries()) + "\n";
  return out;
}

std::string SimulationReport::to_json() const {
  nlohmann::ordered_json j;
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    j["runs"].push_back({{"index", r.index},
                         {"exact", r.exact},
                         {"jaccard", r.jaccard},
                         {"deferred", r.deferred},
                         {"repairs", r.repairs},
                         {"false_accepts", r.false_accepts},
                         {"queries", r.queries},
                         {"target_size", r.target_size},
                         {"result_size", r.result_size}});
  }
  j["aggregate"] = {{"runs", runs.size()},
                    {"exact_rate", exact_rate()},
                    {"mean_jaccard", mean_jaccard()},
                    {"mean_deferred", mean_deferred()},
                    {"mean_repairs", mean_repairs()},
                    {"mean_false_accepts", mean_false_accepts()},
                    {"mean_queries", mean_queries()}};
  return j.dump(2) + "\n";
}

}  // namespace collex
