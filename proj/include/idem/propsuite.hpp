#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "idem/maxplus.hpp"
#include "idem/measure.hpp"
#include "idem/tower.hpp"

namespace idem::suite {

enum class SpaceModel { GridL1, GraphShortestPath };

std::string to_string(SpaceModel model);
// Accepts "grid-l1" and "graph". Throws Error(Parse).
SpaceModel parse_space_model(const std::string& text);

struct GenConfig {
  std::uint64_t seed = 1;
  int space_size = 5;  // largest generated space; sizes are drawn from 2..space_size
  SpaceModel space_model = SpaceModel::GridL1;
  int max_support = 3;
  int weight_denominator_bound = 4;
  int tower_level = 3;  // top level for checks over arbitrary levels
  int branching = 3;
  int cases = 100;

  // Throws Error(InvalidLevel) or Error(Parse) naming the bad field.
  void validate() const;
};

/// Deterministic generator; identical seeds give identical streams on every
/// platform (no std::*_distribution involved).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool chance(int numerator, int denominator) { return uniform(1, denominator) <= numerator; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name, std::uint64_t index);

// Generators.  The cfg-only overloads seed a fresh Rng from cfg.seed.
SpacePtr gen_space(const GenConfig& cfg);
SpacePtr gen_space(const GenConfig& cfg, Rng& rng, int size);
IdempotentMeasure gen_measure(const GenConfig& cfg, const SpacePtr& space);
IdempotentMeasure gen_measure(const GenConfig& cfg, const SpacePtr& space, Rng& rng,
                              int min_support = 1);
TowerElement gen_tower(const GenConfig& cfg, const SpacePtr& space);
TowerElement gen_tower(const GenConfig& cfg, const SpacePtr& space, Rng& rng, int level);
// A random weight in [-3, 0] with denominator at most weight_denominator_bound.
Rational gen_weight(const GenConfig& cfg, Rng& rng);
/// A random map into a fresh space whose metric is scaled so that the map is
/// 1-Lipschitz.
PointMap gen_lipschitz_map(const GenConfig& cfg, const SpacePtr& source, Rng& rng);

struct Failure {
  std::uint64_t case_seed = 0;
  std::string message;
  nlohmann::json input;  // minimal instance after shrinking
};

struct CheckResult {
  std::string name;
  int cases = 0;
  int failure_count = 0;
  std::vector<Failure> failures;  // the first few, shrunk
  std::vector<std::string> notes;
  double elapsed_ms = 0;
};

struct SuiteReport {
  GenConfig config;
  std::vector<CheckResult> checks;  // sorted by name

  int failure_count() const;
  bool ok() const { return failure_count() == 0; }
};

/// Replaceable pieces of the library under test.  The suite calls through
/// these so a harness can inject a broken solver and watch it get caught.
struct SuiteHooks {
  std::function<Rational(const IdempotentMeasure&, const IdempotentMeasure&)> distance;
};

std::vector<std::string> check_names();

/// Runs one named check for cfg.cases cases.  Throws Error(Parse) for an
/// unknown name.
CheckResult run_check(const std::string& name, const GenConfig& cfg, const SuiteHooks& hooks = {});
/// Re-runs a single case from a failure's case seed.
CheckResult replay_case(const std::string& name, const GenConfig& cfg, std::uint64_t case_seed,
                        const SuiteHooks& hooks = {});

SuiteReport run_suite(const GenConfig& cfg, const SuiteHooks& hooks = {});

// The body excludes timings so equal seeds render byte-identical bodies.
std::string render_text(const SuiteReport& report, bool with_timing = false);
nlohmann::json render_json(const SuiteReport& report, bool with_timing = false);

}  // namespace idem::suite
