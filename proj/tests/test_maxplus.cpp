#include <doctest.h>

#include "fixtures.hpp"
#include "idem/error.hpp"

using namespace idem;

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

std::string message_of_failure(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an error");
  return {};
}

}  // namespace

TEST_CASE("oplus is max with bottom least") {
  CHECK(oplus(MaxPlus(3), MaxPlus(5)) == MaxPlus(5));
  CHECK(oplus(MaxPlus::bottom(), MaxPlus(2)) == MaxPlus(2));
  CHECK(oplus(MaxPlus(4), MaxPlus(4)) == MaxPlus(4));
  CHECK(oplus(MaxPlus::bottom(), MaxPlus::bottom()).is_bottom());
}

TEST_CASE("odot is addition with absorbing bottom") {
  CHECK(odot(MaxPlus(3), MaxPlus(5)) == MaxPlus(8));
  CHECK(odot(MaxPlus::bottom(), MaxPlus(2)).is_bottom());
  CHECK(odot(MaxPlus(0), MaxPlus(7)) == MaxPlus(7));
}

TEST_CASE("scalars print and parse exactly") {
  CHECK(MaxPlus::parse("-inf").is_bottom());
  CHECK(MaxPlus::parse("-3/6") == MaxPlus(Rational(-1, 2)));
  CHECK(MaxPlus(Rational(7, 3)).to_string() == "7/3");
  CHECK(MaxPlus::bottom().to_string() == "-inf");
  CHECK(kind_of_failure([] { MaxPlus::parse("1.5"); }) == ErrorKind::Parse);
  CHECK(kind_of_failure([] { MaxPlus::parse("inf"); }) == ErrorKind::Parse);
  CHECK(kind_of_failure([] { parse_rational("1/0"); }) == ErrorKind::Parse);
  CHECK(MaxPlus::bottom() < MaxPlus(-1000000));
}

TEST_CASE("validate_metric accepts the line metric") {
  const auto x3 = fx::x3();
  CHECK(x3->name() == "X3");
  CHECK(x3->size() == 3);
  CHECK(x3->dist(0, 2) == 2);
}

TEST_CASE("validate_metric names the violated axiom") {
  CHECK(kind_of_failure([] { fx::line("m", {"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}); }) ==
        ErrorKind::TriangleViolation);
  CHECK(message_of_failure([] { fx::line("m", {"a", "b", "c"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}); })
            .find("(a,b,c)") != std::string::npos);
  CHECK(kind_of_failure([] { fx::line("m", {"a", "b"}, {{0, 1}, {2, 0}}); }) == ErrorKind::AsymmetricDistance);
  CHECK(kind_of_failure([] { fx::line("m", {"a", "b"}, {{1, 1}, {1, 0}}); }) == ErrorKind::NonzeroDiagonal);
  CHECK(kind_of_failure([] { fx::line("m", {"a", "b"}, {{0, 0}, {0, 0}}); }) == ErrorKind::NonpositiveOffDiagonal);
  CHECK(kind_of_failure([] { fx::line("m", {"a", "b"}, {{0, 1}}); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of_failure([] { fx::line("m", {"a", "a"}, {{0, 1}, {1, 0}}); }) == ErrorKind::DuplicateLabel);
}

TEST_CASE("diameter") {
  CHECK(diameter(*fx::x3()) == 2);
  CHECK(diameter(*fx::line("one", {"a"}, {{0}})) == 0);
  CHECK(diameter(*fx::two()) == 1);
  const auto empty = fx::line("none", {}, {});
  CHECK(kind_of_failure([&] { diameter(*empty); }) == ErrorKind::EmptySpace);
}

TEST_CASE("thresholds are the sorted distinct entries") {
  CHECK(thresholds(*fx::x3()) == std::vector<Rational>{0, 1, 2});
  CHECK(thresholds(*fx::two()) == std::vector<Rational>{0, 1});
  CHECK(thresholds(*fx::line("one", {"a"}, {{0}})) == std::vector<Rational>{0});
}

TEST_CASE("semifield laws on a grid of scalars") {
  std::vector<MaxPlus> xs{MaxPlus::bottom(), MaxPlus(-2), MaxPlus(Rational(-1, 3)), MaxPlus(0), MaxPlus(5)};
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      for (const auto& c : xs) {
        CHECK(odot(a, oplus(b, c)) == oplus(odot(a, b), odot(a, c)));
        CHECK(oplus(oplus(a, b), c) == oplus(a, oplus(b, c)));
        CHECK(odot(odot(a, b), c) == odot(a, odot(b, c)));
      }
    }
  }
}
