#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collex/consortium.hpp"
#include "collex/exploration.hpp"

namespace collex {

inline constexpr std::size_t kRandomSystemCap = 20;

/// Intersection closure of a random family of subsets of M (each subset kept
/// with probability `density`) plus M. Deterministic in the seed.
ClosureSystem random_closure_system(std::size_t m, double density, std::uint64_t seed);
ClosureSystem random_closure_system(const UniversePtr& universe, double density, std::uint64_t seed);

// `blocks` random blocks (each attribute with probability 1/2); attributes left
// uncovered are then added to a random block, and an empty block gets one
// random attribute.
ConsortialDomain random_cover(const UniversePtr& universe, std::size_t blocks, std::uint64_t seed);

/// Simulation configuration, read from `key = value` lines:
///
///   m = 5                  universe size for random targets
///   target = random        or a path to a .cxt context
///   density = 0.3          random target density
///   domain = k-subsets 2   or `random 4` (blocks) or a path to a .dom file
///   experts = expert       or pre-expert
///   knowledge = 0.5        pre-expert chance of knowing each object
///   mode = strong          or sampled
///   strategy = all         first | max-block | cost | random
///   sample_size = 1
///   combine = true
///   accept_on_null = false
///   repetitions = 10
///   seed = 42
///   max_queries = 0        0 means unlimited
struct SimulationConfig {
  std::size_t m = 4;
  std::string target = "random";
  double density = 0.3;
  std::string domain = "k-subsets 2";
  ExpertKind experts = ExpertKind::Expert;
  double knowledge = 1.0;
  ConsortiumMode mode = ConsortiumMode::Strong;
  SelectionStrategy strategy;
  bool combine = false;
  bool accept_on_null = false;
  std::size_t repetitions = 1;
  std::uint64_t seed = 0;
  std::size_t max_queries = 0;
  std::filesystem::path base_dir;  // relative paths are resolved against this
};

SimulationConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path);

struct SimulationRun {
  std::size_t index = 0;
  bool exact = false;
  double jaccard = 0.0;
  std::size_t deferred = 0;
  std::size_t repairs = 0;
  std::size_t false_accepts = 0;  // base implications not valid in X
  std::size_t queries = 0;
  std::size_t target_size = 0;
  std::size_t result_size = 0;
};

struct SimulationReport {
  std::vector<SimulationRun> runs;

  double exact_rate() const;
  double mean_jaccard() const;
  double mean_deferred() const;
  double mean_repairs() const;
  double mean_false_accepts() const;
  double mean_queries() const;

  std::string serialize() const;
  std::string to_json() const;
};

// Per-repetition inputs, shared by run_simulation and the session service.
struct SimulationSetup {
  TargetDomain target;
  Consortium consortium;
};
SimulationSetup build_setup(const SimulationConfig& cfg, std::size_t repetition);

SimulationRun score_run(std::size_t index, const ClosureSystem& target, const ExplorationReport& report);

SimulationReport run_simulation(const SimulationConfig& cfg);

}  // namespace collex
