#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace idem {

using Rational = mpq_class;

// Accepts "n", "-n" and "p/q"; the result is canonicalized. Throws Parse.
Rational parse_rational(std::string_view text);
// Integers print as "n", everything else as "p/q" in lowest terms.
std::string format_rational(const Rational& value);

/// An element of the max-plus semifield R ∪ {-inf}.
///
/// The bottom element is a distinct tag rather than a sentinel rational, so
/// the neutral/absorbing laws hold structurally.  Ordering places bottom
/// below every finite value.
class MaxPlus {
 public:
  MaxPlus() = default;  // bottom
  MaxPlus(const Rational& v) : value_(v) {}  // NOLINT(implicit)
  MaxPlus(long v) : value_(Rational(v)) {}   // NOLINT(implicit)

  static MaxPlus bottom() { return MaxPlus(); }
  static MaxPlus one() { return MaxPlus(0L); }

  bool is_bottom() const noexcept { return !value_.has_value(); }
  bool is_finite() const noexcept { return value_.has_value(); }
  // Precondition: is_finite().
  const Rational& value() const { return *value_; }

  friend bool operator==(const MaxPlus& a, const MaxPlus& b);
  friend std::strong_ordering operator<=>(const MaxPlus& a, const MaxPlus& b);

  // "-inf" for bottom, otherwise format_rational.
  std::string to_string() const;
  static MaxPlus parse(std::string_view text);

 private:
  std::optional<Rational> value_;
};

/// u ⊕ v = max{u, v}.
MaxPlus oplus(const MaxPlus& a, const MaxPlus& b);
/// u ⊙ v = u + v, absorbing at -inf.
MaxPlus odot(const MaxPlus& a, const MaxPlus& b);

// Minimum in the max-plus order (bottom absorbs).
MaxPlus min(const MaxPlus& a, const MaxPlus& b);

/// A finite point set with an exact metric.  Only obtainable through
/// validate_metric, so every instance satisfies the metric axioms.
class FiniteMetricSpace {
 public:
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const Rational& dist(std::size_t i, std::size_t j) const {
    return dist_[i * labels_.size() + j];
  }
  // Throws UnknownPoint.
  std::size_t index_of(std::string_view label) const;
  std::optional<std::size_t> find(std::string_view label) const;

  // Same labels and same matrix.
  bool same_as(const FiniteMetricSpace& other) const;

 private:
  friend std::shared_ptr<const FiniteMetricSpace> validate_metric(
      std::string name, std::vector<std::string> labels,
      const std::vector<std::vector<Rational>>& matrix);

  std::string name_;
  std::vector<std::string> labels_;
  std::vector<Rational> dist_;  // row-major k*k
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Checks shape, label uniqueness, zero diagonal, symmetry, positivity off the
/// diagonal and the triangle inequality, in that order.  The first violation
/// is reported with the offending labels.
SpacePtr validate_metric(std::string name, std::vector<std::string> labels,
                         const std::vector<std::vector<Rational>>& matrix);

bool same_space(const SpacePtr& a, const SpacePtr& b);
// Throws SpaceMismatch unless same_space(a, b).
void require_same_space(const SpacePtr& a, const SpacePtr& b);

/// Largest pairwise distance.  Throws EmptySpace.
Rational diameter(const FiniteMetricSpace& space);

/// Sorted distinct distance values, 0 included.
std::vector<Rational> thresholds(const FiniteMetricSpace& space);

}  // namespace idem
