#include "idem/maxplus.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "idem/error.hpp"

namespace idem {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1")
                                      : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) ||
      den.front() == '-' || den.front() == '+') {
    throw Error(ErrorKind::Parse, "not a rational: '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorKind::Parse, "zero denominator: '" + std::string(text) + "'");
  }
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_str(10);
}

bool operator==(const MaxPlus& a, const MaxPlus& b) {
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const MaxPlus& a, const MaxPlus& b) {
  if (a.is_bottom() && b.is_bottom()) return std::strong_ordering::equal;
  if (a.is_bottom()) return std::strong_ordering::less;
  if (b.is_bottom()) return std::strong_ordering::greater;
  const int c = cmp(*a.value_, *b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string MaxPlus::to_string() const {
  return is_bottom() ? "-inf" : format_rational(*value_);
}

MaxPlus MaxPlus::parse(std::string_view text) {
  if (text == "-inf") return bottom();
  return MaxPlus(parse_rational(text));
}

MaxPlus oplus(const MaxPlus& a, const MaxPlus& b) { return a < b ? b : a; }

MaxPlus odot(const MaxPlus& a, const MaxPlus& b) {
  if (a.is_bottom() || b.is_bottom()) return MaxPlus::bottom();
  return MaxPlus(Rational(a.value() + b.value()));
}

MaxPlus min(const MaxPlus& a, const MaxPlus& b) { return b < a ? b : a; }

std::optional<std::size_t> FiniteMetricSpace::find(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t FiniteMetricSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorKind::UnknownPoint,
              "'" + std::string(label) + "' is not a point of " + name_);
}

bool FiniteMetricSpace::same_as(const FiniteMetricSpace& other) const {
  return labels_ == other.labels_ && dist_ == other.dist_;
}

SpacePtr validate_metric(std::string name, std::vector<std::string> labels,
                         const std::vector<std::vector<Rational>>& matrix) {
  const std::size_t k = labels.size();
  if (matrix.size() != k) {
    throw Error(ErrorKind::ShapeMismatch,
                std::to_string(k) + " labels but " +
                    std::to_string(matrix.size()) + " rows");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (matrix[i].size() != k) {
      throw Error(ErrorKind::ShapeMismatch,
                  "row " + labels[i] + " has " +
                      std::to_string(matrix[i].size()) + " entries, expected " +
                      std::to_string(k));
    }
  }
  {
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw Error(ErrorKind::DuplicateLabel, l);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (matrix[i][i] != 0) {
      throw Error(ErrorKind::NonzeroDiagonal,
                  "d(" + labels[i] + "," + labels[i] + ") = " +
                      format_rational(matrix[i][i]));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (matrix[i][j] != matrix[j][i]) {
        throw Error(ErrorKind::AsymmetricDistance,
                    "d(" + labels[i] + "," + labels[j] + ") = " +
                        format_rational(matrix[i][j]) + " but d(" + labels[j] +
                        "," + labels[i] + ") = " + format_rational(matrix[j][i]));
      }
      if (matrix[i][j] <= 0) {
        throw Error(ErrorKind::NonpositiveOffDiagonal,
                    "d(" + labels[i] + "," + labels[j] + ") = " +
                        format_rational(matrix[i][j]));
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) {
        if (matrix[i][j] > matrix[i][l] + matrix[l][j]) {
          throw Error(ErrorKind::TriangleViolation,
                      "(" + labels[i] + "," + labels[l] + "," + labels[j] +
                          "): d(" + labels[i] + "," + labels[j] + ") > d(" +
                          labels[i] + "," + labels[l] + ") + d(" + labels[l] +
                          "," + labels[j] + ")");
        }
      }
    }
  }
  auto space = std::make_shared<FiniteMetricSpace>();
  space->name_ = std::move(name);
  space->labels_ = std::move(labels);
  space->dist_.reserve(k * k);
  for (const auto& row : matrix) {
    space->dist_.insert(space->dist_.end(), row.begin(), row.end());
  }
  return space;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && a->same_as(*b));
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!same_space(a, b)) {
    throw Error(ErrorKind::SpaceMismatch,
                "'" + (a ? a->name() : "?") + "' vs '" + (b ? b->name() : "?") + "'");
  }
}

Rational diameter(const FiniteMetricSpace& space) {
  if (space.size() == 0) throw Error(ErrorKind::EmptySpace, space.name());
  Rational best = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (space.dist(i, j) > best) best = space.dist(i, j);
    }
  }
  return best;
}

std::vector<Rational> thresholds(const FiniteMetricSpace& space) {
  std::vector<Rational> out{Rational(0)};
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) out.push_back(space.dist(i, j));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace idem
