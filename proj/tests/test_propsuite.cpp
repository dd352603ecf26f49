#include <doctest.h>

#include "idem/error.hpp"
#include "idem/propsuite.hpp"
#include "idem/transport.hpp"

using namespace idem;
using namespace idem::suite;

namespace {

GenConfig small(std::uint64_t seed = 1) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.cases = 10;
  return cfg;
}

}  // namespace

TEST_CASE("generated spaces are valid and deterministic") {
  GenConfig cfg = small();
  cfg.space_size = 3;
  for (auto model : {SpaceModel::GridL1, SpaceModel::GraphShortestPath}) {
    cfg.space_model = model;
    const auto s = gen_space(cfg);
    CHECK(s->size() == 3);
    std::vector<std::vector<Rational>> d(3, std::vector<Rational>(3));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) d[i][j] = s->dist(i, j);
    }
    CHECK_NOTHROW(validate_metric("again", s->labels(), d));
    const auto again = gen_space(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(again->dist(i, j) == s->dist(i, j));
    }
  }
  cfg.seed = 2;
  cfg.space_size = 2;
  CHECK(gen_space(cfg)->dist(0, 1) > 0);
}

TEST_CASE("generated measures and towers respect the configuration") {
  GenConfig cfg = small();
  cfg.max_support = 2;
  cfg.tower_level = 3;
  cfg.branching = 2;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto space = gen_space(cfg, rng, 5);
    const auto mu = gen_measure(cfg, space, rng);
    CHECK(support(mu).size() <= 2);
    CHECK_NOTHROW(IdempotentMeasure::from_density(space, mu.density()));
    for (const auto& w : mu.density()) CHECK((w.is_bottom() || (w.value() >= -3 && w.value() <= 0)));
    const auto t = gen_tower(cfg, space, rng, cfg.tower_level);
    CHECK(t.level() == 3);
    CHECK(t.child_count() <= 2);
  }
  cfg.seed = 9;
  const auto space = gen_space(cfg);
  CHECK(gen_measure(cfg, space) == gen_measure(cfg, space));
  CHECK(gen_tower(cfg, space) == gen_tower(cfg, space));
}

TEST_CASE("configuration bounds are enforced") {
  GenConfig cfg;
  cfg.space_size = 9;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GenConfig{};
  cfg.tower_level = 5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GenConfig{};
  cfg.branching = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK_THROWS_AS(run_check("no_such_check", GenConfig{}), Error);
}

TEST_CASE("the default suite passes") {
  const auto report = run_suite(GenConfig{});
  CHECK(report.ok());
  CHECK(report.checks.size() == check_names().size());
  for (const auto& c : report.checks) CHECK(c.cases == GenConfig{}.cases);
}

TEST_CASE("reports are byte-identical for the same seed") {
  const auto a = render_text(run_suite(small(5)));
  const auto b = render_text(run_suite(small(5)));
  CHECK(a == b);
  CHECK(render_json(run_suite(small(5))).dump() == render_json(run_suite(small(5))).dump());
  CHECK(render_text(run_suite(small(6))) != a);
}

TEST_CASE("a broken solver is caught, named, shrunk and replayable") {
  SuiteHooks broken;
  // Off by one whenever the measures differ.
  broken.distance = [](const IdempotentMeasure& a, const IdempotentMeasure& b) -> Rational {
    const Rational d = distance(a, b).value;
    return d == 0 ? d : Rational(d + 1);
  };
  GenConfig cfg = small();
  const auto report = run_suite(cfg, broken);
  CHECK_FALSE(report.ok());
  std::vector<std::string> failing;
  for (const auto& c : report.checks) {
    if (c.failure_count) failing.push_back(c.name);
  }
  const auto has = [&](const std::string& n) {
    return std::find(failing.begin(), failing.end(), n) != failing.end();
  };
  CHECK(has("dirac_isometry"));
  CHECK(has("solver_oracle"));
  CHECK(has("diameter"));
  CHECK(render_text(report).find("FAIL  dirac_isometry") != std::string::npos);

  const auto solver = run_check("solver_oracle", cfg, broken);
  REQUIRE(!solver.failures.empty());
  const auto& f = solver.failures.front();
  // Shrinking should reach single-point supports: the bug needs only two distinct Diracs.
  for (const auto& mj : f.input["measures"]) {
    int finite = 0;
    for (const auto& [label, w] : mj["density"].items()) finite += w != "-inf";
    CHECK(finite == 1);
  }
  const auto replay = replay_case("solver_oracle", cfg, f.case_seed, broken);
  REQUIRE(replay.failures.size() == 1);
  CHECK(replay.failures.front().message == f.message);
  CHECK(replay.failures.front().input == f.input);
}

TEST_CASE("a solver that ignores weights breaks the metric checks") {
  SuiteHooks support_only;
  support_only.distance = [](const IdempotentMeasure& a, const IdempotentMeasure& b) -> Rational {
    std::vector<MaxPlus> fa, fb;
    for (const auto& w : a.density()) fa.push_back(w.is_finite() ? MaxPlus::one() : w);
    for (const auto& w : b.density()) fb.push_back(w.is_finite() ? MaxPlus::one() : w);
    return distance(IdempotentMeasure::from_density(a.space(), fa), IdempotentMeasure::from_density(b.space(), fb)).value;
  };
  GenConfig cfg = small();
  cfg.cases = 50;
  CHECK(run_check("solver_oracle", cfg, support_only).failure_count > 0);
  CHECK(run_check("metric_axioms", cfg, support_only).failure_count > 0);
  CHECK(run_check("dirac_isometry", cfg, support_only).failure_count == 0);
}

TEST_CASE("identity convergence reports a diagnostic sequence") {
  GenConfig cfg = small();
  cfg.tower_level = 3;
  const auto r = run_check("identity_convergence", cfg);
  CHECK(r.failure_count == 0);
  CHECK_FALSE(r.notes.empty());
}
