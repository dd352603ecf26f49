#include <doctest.h>

#include "fixtures.hpp"
#include "idem/error.hpp"
#include "oracles.hpp"

using namespace idem;
using fx::m;

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

TestFunction fn(std::vector<long> v) {
  TestFunction f;
  for (long x : v) f.values.emplace_back(x);
  return f;
}

}  // namespace

TEST_CASE("make_measure") {
  const auto x3 = fx::x3();
  CHECK(make_measure(x3, {{"a", MaxPlus(0)}, {"b", MaxPlus(-1)}}) == m(x3, {"0", "-1", "-inf"}));
  CHECK(kind_of_failure([&] { make_measure(x3, {{"a", MaxPlus(-1)}, {"b", MaxPlus(-2)}}); }) ==
        ErrorKind::NotNormalized);
  CHECK(make_measure(x3, {{"a", MaxPlus(0)}, {"a", MaxPlus(-5)}}) == m(x3, {"0", "-inf", "-inf"}));
  CHECK(kind_of_failure([&] { make_measure(x3, {}); }) == ErrorKind::EmptySupport);
  CHECK(kind_of_failure([&] { make_measure(x3, {{"z", MaxPlus(0)}}); }) == ErrorKind::UnknownPoint);
  CHECK(kind_of_failure([&] { make_measure(x3, {{"a", MaxPlus(1)}}); }) == ErrorKind::NotNormalized);
}

TEST_CASE("evaluate") {
  const auto x3 = fx::x3();
  const auto mu = m(x3, {"0", "-1", "-inf"});
  CHECK(evaluate(mu, fn({3, 3, 3})) == MaxPlus(3));
  CHECK(evaluate(mu, fn({5, 7, 100})) == MaxPlus(6));
  CHECK(evaluate(dirac(x3, "a"), fn({5, 7, 100})) == MaxPlus(5));
  CHECK(kind_of_failure([&] { evaluate(mu, fn({1, 2})); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("support") {
  const auto x3 = fx::x3();
  CHECK(support(m(x3, {"0", "-1", "-inf"})) == std::vector<std::size_t>{0, 1});
  CHECK(support(dirac(x3, "b")) == std::vector<std::size_t>{1});
  CHECK(support(m(x3, {"0", "0", "0"})) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("dirac") {
  const auto x3 = fx::x3();
  CHECK(dirac(x3, "a") == m(x3, {"0", "-inf", "-inf"}));
  CHECK(dirac(x3, "c") == m(x3, {"-inf", "-inf", "0"}));
  CHECK(evaluate(dirac(x3, "b"), fn({1, 2, 3})) == MaxPlus(2));
  CHECK(kind_of_failure([&] { dirac(x3, "q"); }) == ErrorKind::UnknownPoint);
}

TEST_CASE("pushforward") {
  const auto x3 = fx::x3();
  const auto ac = fx::line("AC", {"a", "c"}, {{0, 2}, {2, 0}});
  const auto f = make_point_map(x3, ac, {{"a", "a"}, {"b", "a"}, {"c", "c"}});
  const auto mu = m(x3, {"-1", "0", "-2"});
  const auto pushed = pushforward(f, mu);
  CHECK(pushed == m(ac, {"0", "-2"}));
  CHECK(pushed == oracle::push_by_evaluation(f, mu));

  const auto id = make_point_map(x3, x3, {{"a", "a"}, {"b", "b"}, {"c", "c"}});
  CHECK(pushforward(id, mu) == mu);

  const auto single = fx::line("pt", {"p"}, {{0}});
  const auto constant = make_point_map(x3, single, {{"a", "p"}, {"b", "p"}, {"c", "p"}});
  CHECK(pushforward(constant, mu) == dirac(single, "p"));

  CHECK(kind_of_failure([&] { make_point_map(x3, ac, {{"a", "a"}}); }) == ErrorKind::PartialMap);
  CHECK(kind_of_failure([&] { pushforward(f, m(ac, {"0", "0"})); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("pushforward composes") {
  const auto x3 = fx::x3();
  const auto ac = fx::line("AC", {"a", "c"}, {{0, 2}, {2, 0}});
  const auto single = fx::line("pt", {"p"}, {{0}});
  const auto f = make_point_map(x3, ac, {{"a", "c"}, {"b", "a"}, {"c", "c"}});
  const auto g = make_point_map(ac, single, {{"a", "p"}, {"c", "p"}});
  const auto mu = m(x3, {"-1", "0", "-2"});
  CHECK(pushforward(compose(g, f), mu) == pushforward(g, pushforward(f, mu)));
  CHECK(pushforward(f, mu) == m(ac, {"0", "-1"}));
}
