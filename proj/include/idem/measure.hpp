#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "idem/maxplus.hpp"

namespace idem {

/// A finite-valued function on the points of a space (an element of C(X)).
struct TestFunction {
  std::vector<Rational> values;
};

/// An idempotent probability measure μ = ⊕ λ(x) ⊙ δ_x on a finite space,
/// stored as its density λ.  The density is normalized: no entry exceeds 0
/// and at least one equals 0.  A point with weight -inf is outside the
/// support; there is no separate notion of absence.
class IdempotentMeasure {
 public:
  // Validates length and normalization.  Throws SpaceMismatch, EmptySupport,
  // NotNormalized.
  static IdempotentMeasure from_density(SpacePtr space, std::vector<MaxPlus> density);

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<MaxPlus>& density() const noexcept { return density_; }
  const MaxPlus& weight(std::size_t i) const { return density_[i]; }
  std::size_t size() const noexcept { return density_.size(); }

  friend bool operator==(const IdempotentMeasure& a, const IdempotentMeasure& b) {
    return same_space(a.space_, b.space_) && a.density_ == b.density_;
  }

 private:
  IdempotentMeasure(SpacePtr space, std::vector<MaxPlus> density)
      : space_(std::move(space)), density_(std::move(density)) {}

  SpacePtr space_;
  std::vector<MaxPlus> density_;
};

/// Builds a measure from (label, weight) pairs.  Unlisted points get -inf and
/// repeated labels are merged with ⊕.  Throws UnknownPoint, EmptySupport,
/// NotNormalized.
IdempotentMeasure make_measure(const SpacePtr& space,
                               const std::vector<std::pair<std::string, MaxPlus>>& pairs);

/// μ(φ) = max_i (λ_i + φ_i).  Throws SpaceMismatch when φ has the wrong length.
MaxPlus evaluate(const IdempotentMeasure& mu, const TestFunction& phi);

/// Indices with finite weight, ascending.
std::vector<std::size_t> support(const IdempotentMeasure& mu);

IdempotentMeasure dirac(const SpacePtr& space, std::size_t point);
IdempotentMeasure dirac(const SpacePtr& space, std::string_view label);

/// A total map between the point sets of two spaces.
struct PointMap {
  SpacePtr source;
  SpacePtr target;
  std::vector<std::size_t> image;  // image[i] = f(i)
};

// Throws PartialMap if some source point has no image, UnknownPoint for
// labels outside either space.
PointMap make_point_map(const SpacePtr& source, const SpacePtr& target,
                        const std::vector<std::pair<std::string, std::string>>& pairs);

// g ∘ f.  Throws SpaceMismatch unless f.target is g.source.
PointMap compose(const PointMap& g, const PointMap& f);

/// I(f)(μ): ν_y = max{λ_x : f(x) = y}.  Throws SpaceMismatch, PartialMap.
IdempotentMeasure pushforward(const PointMap& f, const IdempotentMeasure& mu);

std::string to_string(const IdempotentMeasure& mu);

}  // namespace idem
