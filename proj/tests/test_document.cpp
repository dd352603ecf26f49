#include <doctest.h>

#include "fixtures.hpp"
#include "idem/document.hpp"
#include "idem/error.hpp"
#include "idem/propsuite.hpp"

using namespace idem;
using nlohmann::json;

namespace {

const auto kX3 = fx::x3();

SpacePtr resolve(const std::string& name) {
  if (name == "X3") return kX3;
  throw Error(ErrorKind::Parse, "unknown space " + name);
}

ErrorKind kind_of_failure(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("rationals encode as integers or p/q strings") {
  CHECK(doc::rational_to_json(Rational(3)) == json(3));
  CHECK(doc::rational_to_json(Rational(-1, 2)) == json("-1/2"));
  CHECK(doc::rational_from_json(json("6/4"), "w") == Rational(3, 2));
  CHECK(doc::maxplus_to_json(MaxPlus::bottom()) == json("-inf"));
  CHECK(kind_of_failure([] { doc::rational_from_json(json(0.5), "w"); }) == ErrorKind::Parse);
  CHECK(kind_of_failure([] { doc::rational_from_json(json("NaN"), "w"); }) == ErrorKind::Parse);
  CHECK(kind_of_failure([] { doc::maxplus_from_json(json(nullptr), "w"); }) == ErrorKind::Parse);
}

TEST_CASE("space documents round-trip") {
  const json j = doc::space_to_json(*kX3);
  CHECK(j["kind"] == "space");
  const auto back = doc::space_from_json(j);
  CHECK(back->labels() == kX3->labels());
  CHECK(doc::space_to_json(*back) == j);
  json bad = j;
  bad["dist"][0][2] = 3;
  bad["dist"][2][0] = 3;
  CHECK(kind_of_failure([&] { doc::space_from_json(bad); }) == ErrorKind::TriangleViolation);
  json extra = j;
  extra["colour"] = "red";
  CHECK(kind_of_failure([&] { doc::space_from_json(extra); }) == ErrorKind::Parse);
}

TEST_CASE("measure documents round-trip and validate") {
  const auto mu = fx::m(kX3, {"0", "-1/2", "-inf"});
  const json j = doc::measure_to_json(mu);
  CHECK(j == json::parse(R"({"kind":"measure","space":"X3","density":{"a":0,"b":"-1/2","c":"-inf"}})"));
  CHECK(doc::measure_from_json(j, resolve) == mu);
  CHECK(doc::measure_to_json(doc::measure_from_json(j, resolve)) == j);

  const json inl = doc::measure_to_json(mu, true);
  CHECK(inl["space"]["kind"] == "space");
  CHECK(doc::measure_from_json(inl, resolve).density() == mu.density());

  const json bad = json::parse(R"({"kind":"measure","space":"X3","density":{"a":-1,"b":-2}})");
  CHECK(kind_of_failure([&] { doc::measure_from_json(bad, resolve); }) == ErrorKind::NotNormalized);
  const json unknown = json::parse(R"({"kind":"measure","space":"X3","density":{"z":0}})");
  CHECK(kind_of_failure([&] { doc::measure_from_json(unknown, resolve); }) == ErrorKind::UnknownPoint);
  const json extra = json::parse(R"({"kind":"measure","space":"X3","density":{"a":0},"note":1})");
  CHECK(kind_of_failure([&] { doc::measure_from_json(extra, resolve); }) == ErrorKind::Parse);
  const json floaty = json::parse(R"({"kind":"measure","space":"X3","density":{"a":0.0}})");
  CHECK(kind_of_failure([&] { doc::measure_from_json(floaty, resolve); }) == ErrorKind::Parse);
  const json wrong = json::parse(R"({"kind":"space","space":"X3","density":{"a":0}})");
  CHECK(kind_of_failure([&] { doc::measure_from_json(wrong, resolve); }) == ErrorKind::Parse);
}

TEST_CASE("tower and coupling documents round-trip") {
  suite::GenConfig cfg;
  for (int k = 0; k < 30; ++k) {
    suite::Rng rng(static_cast<std::uint64_t>(k));
    const auto space = suite::gen_space(cfg, rng, 4);
    const auto e = suite::gen_tower(cfg, space, rng, k % 4);
    const json j = doc::tower_to_json(e, true);
    const auto back = doc::tower_from_json(j, resolve);
    CHECK(doc::tower_to_json(back, true) == j);
    CHECK(back.level() == e.level());
    CHECK(to_string(back) == to_string(e));

    const auto a = suite::gen_measure(cfg, space, rng);
    const auto b = suite::gen_measure(cfg, space, rng);
    const auto xi = distance(a, b).witness;
    const json cj = doc::coupling_to_json(xi, true);
    const auto cback = doc::coupling_from_json(cj, resolve);
    CHECK(doc::coupling_to_json(cback, true) == cj);
    CHECK(cback.weights() == xi.weights());
  }
  const json lvl = json::parse(R"({"kind":"tower","space":"X3","level":2,"element":[{"weight":0,"child":"a"}]})");
  CHECK(kind_of_failure([&] { doc::tower_from_json(lvl, resolve); }) == ErrorKind::Parse);
}
