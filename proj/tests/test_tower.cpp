#include <doctest.h>

#include "fixtures.hpp"
#include "idem/error.hpp"
#include "idem/propsuite.hpp"
#include "oracles.hpp"

using namespace idem;
using fx::lift;
using fx::m;
using fx::node;
using fx::pt;

namespace {

ErrorKind kind_of_failure(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

const auto kX3 = fx::x3();
const auto kTwo = fx::two();

TowerElement d1(const char* label) { return eta(pt(kX3, label)); }

}  // namespace

TEST_CASE("canonical form merges, drops and sorts children") {
  const auto a = pt(kX3, "a");
  const auto b = pt(kX3, "b");
  const auto e1 = node(kX3, {{-1, b}, {0, a}, {-3, a}});
  const auto e2 = node(kX3, {{0, a}, {-1, b}});
  CHECK(e1 == e2);
  CHECK(e1.child_count() == 2);
  std::vector<std::pair<MaxPlus, TowerElement>> with_bottom{{MaxPlus(0), a}, {MaxPlus::bottom(), b}};
  CHECK(TowerElement::from_children(kX3, with_bottom) == eta(a));
  CHECK(kind_of_failure([&] { node(kX3, {{-1, a}}); }) == ErrorKind::NotNormalized);
  CHECK(kind_of_failure([&] { node(kX3, {}); }) == ErrorKind::EmptySupport);
  CHECK(kind_of_failure([&] { node(kX3, {{0, a}, {0, d1("b")}}); }) == ErrorKind::LevelMismatch);
}

TEST_CASE("eta") {
  CHECK(eta(pt(kX3, "a")).to_measure() == dirac(kX3, "a"));
  const auto mu = m(kX3, {"0", "-1", "-inf"});
  const auto dm = eta(lift(mu));
  CHECK(dm.level() == 2);
  CHECK(dm.child_count() == 1);
  CHECK(dm.child(0) == lift(mu));
  CHECK(eta(eta(pt(kX3, "a"))) == node(kX3, {{0, d1("a")}}));
}

TEST_CASE("eta_nm") {
  CHECK(eta_nm(pt(kX3, "a"), 2) == eta(eta(pt(kX3, "a"))));
  const auto mu = lift(m(kX3, {"0", "-1", "-inf"}));
  CHECK(eta_nm(mu, 1) == mu);
  CHECK(level_distance(eta_nm(pt(kX3, "a"), 1), eta_nm(pt(kX3, "b"), 1)) == 1);
  CHECK(kind_of_failure([&] { eta_nm(mu, 0); }) == ErrorKind::LevelTooLow);
}

TEST_CASE("psi") {
  const auto big = node(kTwo, {{0, eta(pt(kTwo, "a"))}, {-1, eta(pt(kTwo, "b"))}});
  CHECK(psi(big).to_measure() == m(kTwo, {"0", "-1"}));
  CHECK(psi(big).to_measure() == oracle::flatten_by_evaluation(big));
  const auto mu = lift(m(kX3, {"0", "-1", "-inf"}));
  CHECK(psi(eta(mu)) == mu);
  const auto second = node(kTwo, {{0, lift(m(kTwo, {"0", "-inf"}))}, {-1, lift(m(kTwo, {"-inf", "0"}))}});
  CHECK(psi(second).to_measure() == m(kTwo, {"0", "-1"}));

  const auto mixed = node(kX3, {{0, lift(m(kX3, {"0", "-2", "-inf"}))}, {-1, lift(m(kX3, {"-inf", "0", "-1"}))}});
  CHECK(psi(mixed).to_measure() == m(kX3, {"0", "-1", "-2"}));
  CHECK(psi(mixed).to_measure() == oracle::flatten_by_evaluation(mixed));
  CHECK(kind_of_failure([&] { psi(mu); }) == ErrorKind::LevelTooLow);
}

TEST_CASE("psi_mn") {
  const auto ddd = eta_nm(pt(kX3, "a"), 3);
  CHECK(psi_mn(ddd, 1) == d1("a"));
  const auto e = node(kX3, {{0, d1("a")}, {-1, lift(m(kX3, {"0", "0", "-inf"}))}});
  for (int k = 2; k <= 4; ++k) CHECK(psi_mn(eta_nm(e, k), 2) == e);
  CHECK(psi_mn(e, 2) == e);
  CHECK(kind_of_failure([&] { psi_mn(e, 0); }) == ErrorKind::LevelTooLow);
  CHECK(kind_of_failure([&] { psi_mn(e, 3); }) == ErrorKind::LevelTooLow);
}

TEST_CASE("level_distance") {
  CHECK(level_distance(node(kX3, {{0, d1("a")}}), node(kX3, {{0, d1("c")}})) == 2);
  const auto mu = m(kX3, {"0", "-1", "-inf"});
  const auto nu = m(kX3, {"-1", "0", "-1"});
  CHECK(level_distance(lift(mu), lift(nu)) == distance(mu, nu).value);
  const auto big = node(kX3, {{0, d1("a")}, {0, d1("b")}});
  const auto small = node(kX3, {{0, d1("a")}});
  CHECK(level_distance(big, small) == 1);
  CHECK(oracle::union_level_distance(big, small) == 1);
  CHECK(kind_of_failure([&] { level_distance(big, d1("a")); }) == ErrorKind::LevelMismatch);
  CHECK(kind_of_failure([&] { level_distance(d1("a"), eta(pt(kTwo, "a"))); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("level_distance matches the union-space construction on random towers") {
  suite::GenConfig cfg;
  for (int k = 0; k < 40; ++k) {
    suite::Rng rng(static_cast<std::uint64_t>(500 + k));
    cfg.space_model = k % 2 ? suite::SpaceModel::GraphShortestPath : suite::SpaceModel::GridL1;
    const auto space = suite::gen_space(cfg, rng, 4);
    const int level = 1 + k % 3;
    const auto a = suite::gen_tower(cfg, space, rng, level);
    const auto b = suite::gen_tower(cfg, space, rng, level);
    CHECK(level_distance(a, b) == oracle::union_level_distance(a, b));
  }
}

TEST_CASE("flattening matches the functional definition on random level-2 elements") {
  suite::GenConfig cfg;
  for (int k = 0; k < 40; ++k) {
    suite::Rng rng(static_cast<std::uint64_t>(900 + k));
    const auto space = suite::gen_space(cfg, rng, 5);
    const auto e = suite::gen_tower(cfg, space, rng, 2);
    CHECK(psi(e).to_measure() == oracle::flatten_by_evaluation(e));
  }
}

TEST_CASE("d_plus") {
  CHECK(d_plus(LimitPoint(pt(kX3, "a")), LimitPoint(pt(kX3, "c"))) == 2);
  const auto mu = lift(m(kX3, {"0", "-1", "-inf"}));
  CHECK(d_plus(LimitPoint(pt(kX3, "a")), LimitPoint(mu)) == 1);
  CHECK(oracle::brute_distance(dirac(kX3, "a"), mu.to_measure()) == 1);
  CHECK(d_plus(LimitPoint(mu), LimitPoint(mu)) == 0);
  CHECK(LimitPoint(eta_nm(mu, 3)) == LimitPoint(mu));
  CHECK(LimitPoint(eta_nm(pt(kX3, "b"), 2)).level() == 0);
}

TEST_CASE("theta") {
  const auto e3 = node(kX3, {{0, node(kX3, {{0, d1("a")}, {-1, d1("c")}})}, {-2, eta(d1("b"))}});
  CHECK(theta(LimitPoint(e3), 1) == psi_mn(e3, 1));
  CHECK(theta(LimitPoint(pt(kX3, "a")), 2) == eta_nm(pt(kX3, "a"), 2));
  CHECK(theta(LimitPoint(e3), 1) == psi_mn(theta(LimitPoint(e3), 2), 1));
  CHECK(theta(LimitPoint(e3), 3) == e3);
  CHECK(kind_of_failure([&] { theta(LimitPoint(e3), 0); }) == ErrorKind::InvalidLevel);
}

TEST_CASE("q_embed") {
  const auto mu = m(kX3, {"0", "-1", "-inf"});
  CHECK(q_embed(mu, 1) == lift(mu));
  CHECK(q_embed(dirac(kX3, "a"), 2) == eta_nm(pt(kX3, "a"), 2));
  CHECK(q_embed(m(kX3, {"0", "0", "-inf"}), 2) == node(kX3, {{0, d1("a")}, {0, d1("b")}}));
  CHECK(q_embed(mu, 3).level() == 3);
  CHECK(kind_of_failure([&] { q_embed(mu, 0); }) == ErrorKind::InvalidLevel);
}

TEST_CASE("dirac_set_distance") {
  CHECK(dirac_set_distance(node(kX3, {{0, d1("a")}, {0, d1("b")}})) == 1);
  CHECK(oracle::brute_chebyshev({dirac(kX3, "a"), dirac(kX3, "b")}) == 1);
  CHECK(dirac_set_distance(eta(lift(m(kX3, {"0", "-1", "-inf"})))) == 0);
  CHECK(dirac_set_distance(node(kX3, {{0, d1("a")}, {0, d1("c")}})) == 1);
  CHECK(kind_of_failure([] { dirac_set_distance(d1("a")); }) == ErrorKind::LevelMismatch);
}

TEST_CASE("p7_check") {
  const auto r1 = p7_check(m(kX3, {"0", "0", "-inf"}), 1);
  CHECK(r1.epsilon == 1);
  CHECK(r1.lhs == 1);
  REQUIRE(r1.set_variant);
  CHECK(*r1.set_variant == 1);
  CHECK(r1.holds);

  const auto r2 = p7_check(dirac(kX3, "a"), 1);
  CHECK(r2.epsilon == 0);
  CHECK(r2.holds);

  const auto flat = m(kX3, {"0", "0", "0"});
  const auto r3 = p7_check(flat, 1);
  CHECK(r3.epsilon == 1);
  CHECK(r3.lhs == oracle::union_level_distance(q_embed(flat, 2), eta(q_embed(flat, 1))));
  CHECK(r3.holds);
  for (int i = 2; i <= 3; ++i) {
    const auto r = p7_check(flat, i);
    CHECK_FALSE(r.set_variant);
    CHECK(r.lhs == oracle::union_level_distance(q_embed(flat, i + 1), eta(q_embed(flat, i))));
    CHECK(r.holds);
  }
  CHECK(kind_of_failure([&] { p7_check(flat, 0); }) == ErrorKind::InvalidLevel);
}

TEST_CASE("monad laws on a hand-built level-3 element") {
  const auto a = node(kX3, {{0, node(kX3, {{0, d1("a")}, {-1, lift(m(kX3, {"0", "-2", "0"}))}})},
                            {-1, node(kX3, {{0, d1("c")}})}});
  CHECK(psi(psi(a)) == psi(map_children(a, [](const TowerElement& x) { return psi(x); })));
  CHECK(psi(map_children(a, [](const TowerElement& x) { return eta(x); })) == a);
  CHECK(psi(eta(a)) == a);
}
