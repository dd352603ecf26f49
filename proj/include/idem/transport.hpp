#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "idem/maxplus.hpp"
#include "idem/measure.hpp"

namespace idem {

/// A max-plus density on X × X.  Admissible for (μ₁, μ₂) when its row maxima
/// reproduce λ¹ and its column maxima reproduce λ².
class Coupling {
 public:
  Coupling(SpacePtr space, std::vector<MaxPlus> weights);

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t points() const noexcept { return space_->size(); }
  const MaxPlus& at(std::size_t i, std::size_t j) const {
    return weights_[i * space_->size() + j];
  }
  const std::vector<MaxPlus>& weights() const noexcept { return weights_; }

  friend bool operator==(const Coupling& a, const Coupling& b) {
    return same_space(a.space_, b.space_) && a.weights_ == b.weights_;
  }

 private:
  SpacePtr space_;
  std::vector<MaxPlus> weights_;
};

std::vector<std::pair<std::size_t, std::size_t>> support(const Coupling& xi);

struct DistanceCertificate {
  Rational value;
  Coupling witness;
};

/// Row and column maxima as measures.  Throws NotNormalized.
std::pair<IdempotentMeasure, IdempotentMeasure> marginals(const Coupling& xi);

bool is_admissible(const Coupling& xi, const IdempotentMeasure& left,
                   const IdempotentMeasure& right);

/// Ξ_ij = λ¹_i + λ²_j, the witness that Λ(μ₁, μ₂) is never empty.
Coupling product_coupling(const IdempotentMeasure& left, const IdempotentMeasure& right);

/// True iff some admissible coupling is supported on {dist ≤ t}.  Decided by
/// the dominance test: every i ∈ supp μ₁ has a partner j within t with
/// λ²_j ≥ λ¹_i, and symmetrically.  Throws SpaceMismatch, NegativeThreshold.
bool feasible(const IdempotentMeasure& left, const IdempotentMeasure& right,
              const Rational& t);

/// Ξ_ij = min(λ¹_i, λ²_j) on pairs within t.  This is the pointwise largest
/// candidate below both marginals, so it is admissible exactly when feasible()
/// holds.  Throws Infeasible otherwise.
Coupling canonical_coupling(const IdempotentMeasure& left,
                            const IdempotentMeasure& right, const Rational& t);

/// The bottleneck metric: least threshold with an admissible coupling, and
/// the canonical coupling attaining it.
DistanceCertificate distance(const IdempotentMeasure& left,
                             const IdempotentMeasure& right);

/// sup over supp ξ of ξ(ρ) ⊕ ρ(x, y), with ξ(ρ) = max over supp of Ξ_ij + ρ_ij.
/// Throws NotAdmissible unless ξ is a normalized density on X × X.
Rational eval_formula1(const Coupling& xi);

/// max{dist(y, x) : y ∈ supp μ}, the distance from μ to δ_x.
Rational dirac_distance(const IdempotentMeasure& mu, std::size_t point);

struct ChebyshevResult {
  Rational radius;
  IdempotentMeasure center;
};

/// min over ν of max_r distance(μ_r, ν), with a center attaining it.
/// Throws EmptyList, SpaceMismatch.
ChebyshevResult chebyshev(std::span<const IdempotentMeasure> measures);

/// Exhaustive center search with densities drawn from the weights of the
/// inputs plus -inf.  Exponential in the space size; for cross-checking only.
ChebyshevResult chebyshev_bruteforce(std::span<const IdempotentMeasure> measures);

/// Independent ground truth for distance(): a threshold scan that recomputes
/// marginals of the restricted min-coupling directly, cross-checked by a
/// search over every support pattern S ⊆ supp μ₁ × supp μ₂.  Throws TooLarge
/// beyond kOracleMaxPairs support pairs.
inline constexpr std::size_t kOracleMaxPairs = 12;
Rational oracle_distance(const IdempotentMeasure& left, const IdempotentMeasure& right);

/// Bottleneck distance between two weight vectors given only the cross
/// distances cross[i * w2.size() + j].  Entries of -inf are ignored.  This is
/// the same dominance decision as feasible(), used where the ground set is
/// implicit (for instance children of nested measures).
Rational bottleneck_distance(std::span<const MaxPlus> w1, std::span<const MaxPlus> w2,
                             std::span<const Rational> cross);

}  // namespace idem
