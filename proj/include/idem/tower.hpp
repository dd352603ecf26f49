#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idem/maxplus.hpp"
#include "idem/measure.hpp"

namespace idem {

struct TowerNode;
using TowerNodePtr = std::shared_ptr<const TowerNode>;

struct TowerEntry {
  Rational weight;
  TowerNodePtr child;
};

// Level 0 stores a point index; level n ≥ 1 stores its children sorted by
// the canonical order, pairwise distinct, with finite weights peaking at 0.
struct TowerNode {
  int level = 0;
  std::size_t point = 0;
  std::vector<TowerEntry> children;
};

// Total order on canonical nodes: level, then point index, then children
// lexicographically by (child, weight).
std::strong_ordering compare(const TowerNode& a, const TowerNode& b);

/// An element of I^n(X) for a finite base space X, kept in canonical form so
/// that structural equality coincides with equality of measures.
class TowerElement {
 public:
  static TowerElement point(SpacePtr space, std::size_t index);
  static TowerElement point(SpacePtr space, std::string_view label);

  /// Canonicalizes: drops -inf weights, merges equal children with ⊕ and
  /// sorts.  Throws EmptySupport, NotNormalized, LevelMismatch, SpaceMismatch.
  static TowerElement from_children(SpacePtr space,
                                    const std::vector<std::pair<MaxPlus, TowerElement>>& children);

  static TowerElement from_measure(const IdempotentMeasure& mu);
  // Level 1 only.  Throws LevelMismatch.
  IdempotentMeasure to_measure() const;

  const SpacePtr& space() const noexcept { return space_; }
  const TowerNodePtr& node() const noexcept { return node_; }
  int level() const noexcept { return node_->level; }
  // Level 0 only.
  std::size_t point_index() const { return node_->point; }
  std::size_t child_count() const noexcept { return node_->children.size(); }
  const Rational& weight(std::size_t k) const { return node_->children[k].weight; }
  TowerElement child(std::size_t k) const { return {space_, node_->children[k].child}; }

  friend bool operator==(const TowerElement& a, const TowerElement& b) {
    return same_space(a.space_, b.space_) && compare(*a.node_, *b.node_) == 0;
  }
  friend std::strong_ordering operator<=>(const TowerElement& a, const TowerElement& b) {
    return compare(*a.node_, *b.node_);
  }

  TowerElement(SpacePtr space, TowerNodePtr node)
      : space_(std::move(space)), node_(std::move(node)) {}

 private:
  SpacePtr space_;
  TowerNodePtr node_;
};

std::string to_string(const TowerElement& e);

/// Unit of the monad: e ↦ δ_e, one level up.
TowerElement eta(const TowerElement& e);
/// η applied (m - level) times.  Throws LevelTooLow.
TowerElement eta_nm(const TowerElement& e, int m);

/// Multiplication of the monad, I²(Y) → I(Y) with Y = I^{level-2}(X):
/// weight of a grandchild c is max_r (β_r + λ^r(c)).  Throws LevelTooLow.
TowerElement psi(const TowerElement& e);
/// ψ applied until level n.  Requires 1 ≤ n ≤ level.  Throws LevelTooLow.
TowerElement psi_mn(const TowerElement& e, int n);

/// I(f) for f acting on the children: applies f to every child and
/// re-canonicalizes.  f must map children to a common level.
TowerElement map_children(const TowerElement& e,
                          const std::function<TowerElement(const TowerElement&)>& f);

/// The recursive metric ρ_n: base distance at level 0, and at level n the
/// bottleneck distance of the two densities over ρ_{n-1} between children.
/// Throws LevelMismatch, SpaceMismatch.
Rational level_distance(const TowerElement& a, const TowerElement& b);

/// A point of the direct limit, held by its lowest-level representative
/// (no outer δ wrappers).
class LimitPoint {
 public:
  explicit LimitPoint(TowerElement e);
  const TowerElement& rep() const noexcept { return rep_; }
  int level() const noexcept { return rep_.level(); }
  friend bool operator==(const LimitPoint& a, const LimitPoint& b) { return a.rep_ == b.rep_; }

 private:
  TowerElement rep_;
};

/// Distance in the direct limit: both representatives are lifted to the
/// highest of their levels (at least 1) and compared there.
Rational d_plus(const LimitPoint& p, const LimitPoint& q);

/// θ_n = ψ_{m,n} ∘ η_m^{-1}, or η into level n when the representative sits
/// lower.  Throws InvalidLevel for n < 1.
TowerElement theta(const LimitPoint& p, int n);

/// q_{1,m}(μ) = I(η_{0,m-1})(μ).  Throws InvalidLevel for m < 1.
TowerElement q_embed(const IdempotentMeasure& mu, int m);

/// inf over ν ∈ I(X) of ρ₂(M, δ_ν), which is the Chebyshev radius of the
/// children of M.  Throws LevelMismatch unless M has level 2.
Rational dirac_set_distance(const TowerElement& m);

struct P7Result {
  Rational epsilon;                     // min_x ρ₁(μ, δ_x)
  Rational lhs;                         // ρ_{i+1}(q_{1,i+1} μ, η q_{1,i} μ)
  std::optional<Rational> set_variant;  // i = 1 only: dirac_set_distance(q_{1,2} μ)
  bool holds = false;
};

/// Throws InvalidLevel for i < 1.
P7Result p7_check(const IdempotentMeasure& mu, int i);

}  // namespace idem
