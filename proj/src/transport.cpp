#include "idem/transport.hpp"

#include <algorithm>
#include <stdexcept>

#include "idem/error.hpp"

namespace idem {

namespace {

// Dominance test shared by every bottleneck computation.  `within(i, j)`
// says whether the pair (i, j) is allowed at the current threshold.
template <typename Within>
bool dominates(std::span<const MaxPlus> w1, std::span<const MaxPlus> w2, Within within) {
  for (std::size_t i = 0; i < w1.size(); ++i) {
    if (w1[i].is_bottom()) continue;
    bool covered = false;
    for (std::size_t j = 0; j < w2.size() && !covered; ++j) {
      covered = within(i, j) && w2[j] >= w1[i];
    }
    if (!covered) return false;
  }
  for (std::size_t j = 0; j < w2.size(); ++j) {
    if (w2[j].is_bottom()) continue;
    bool covered = false;
    for (std::size_t i = 0; i < w1.size() && !covered; ++i) {
      covered = within(i, j) && w1[i] >= w2[j];
    }
    if (!covered) return false;
  }
  return true;
}

// Smallest candidate accepted by a monotone predicate; the last candidate
// must be accepted.
template <typename Accept>
const Rational& first_accepted(const std::vector<Rational>& sorted, Accept accept) {
  std::size_t lo = 0;
  std::size_t hi = sorted.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (accept(sorted[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return sorted[lo];
}

std::pair<std::vector<MaxPlus>, std::vector<MaxPlus>> row_col_max(const Coupling& xi) {
  const std::size_t k = xi.points();
  std::vector<MaxPlus> rows(k), cols(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      rows[i] = oplus(rows[i], xi.at(i, j));
      cols[j] = oplus(cols[j], xi.at(i, j));
    }
  }
  return {std::move(rows), std::move(cols)};
}

}  // namespace

Coupling::Coupling(SpacePtr space, std::vector<MaxPlus> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (weights_.size() != space_->size() * space_->size()) {
    throw Error(ErrorKind::ShapeMismatch,
                "coupling needs " + std::to_string(space_->size() * space_->size()) +
                    " weights, got " + std::to_string(weights_.size()));
  }
}

std::vector<std::pair<std::size_t, std::size_t>> support(const Coupling& xi) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < xi.points(); ++i) {
    for (std::size_t j = 0; j < xi.points(); ++j) {
      if (xi.at(i, j).is_finite()) out.emplace_back(i, j);
    }
  }
  return out;
}

std::pair<IdempotentMeasure, IdempotentMeasure> marginals(const Coupling& xi) {
  auto [rows, cols] = row_col_max(xi);
  return {IdempotentMeasure::from_density(xi.space(), std::move(rows)),
          IdempotentMeasure::from_density(xi.space(), std::move(cols))};
}

bool is_admissible(const Coupling& xi, const IdempotentMeasure& left,
                   const IdempotentMeasure& right) {
  if (!same_space(xi.space(), left.space()) || !same_space(xi.space(), right.space())) {
    return false;
  }
  const auto [rows, cols] = row_col_max(xi);
  return rows == left.density() && cols == right.density();
}

Coupling product_coupling(const IdempotentMeasure& left, const IdempotentMeasure& right) {
  require_same_space(left.space(), right.space());
  const std::size_t k = left.size();
  std::vector<MaxPlus> w(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) w[i * k + j] = odot(left.weight(i), right.weight(j));
  }
  return Coupling(left.space(), std::move(w));
}

bool feasible(const IdempotentMeasure& left, const IdempotentMeasure& right,
              const Rational& t) {
  require_same_space(left.space(), right.space());
  if (t < 0) throw Error(ErrorKind::NegativeThreshold, format_rational(t));
  const FiniteMetricSpace& space = *left.space();
  return dominates(left.density(), right.density(),
                   [&](std::size_t i, std::size_t j) { return space.dist(i, j) <= t; });
}

Coupling canonical_coupling(const IdempotentMeasure& left,
                            const IdempotentMeasure& right, const Rational& t) {
  if (!feasible(left, right, t)) {
    throw Error(ErrorKind::Infeasible, "no admissible coupling within " + format_rational(t));
  }
  const FiniteMetricSpace& space = *left.space();
  const std::size_t k = space.size();
  std::vector<MaxPlus> w(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (space.dist(i, j) <= t) w[i * k + j] = min(left.weight(i), right.weight(j));
    }
  }
  return Coupling(left.space(), std::move(w));
}

DistanceCertificate distance(const IdempotentMeasure& left, const IdempotentMeasure& right) {
  require_same_space(left.space(), right.space());
  const std::vector<Rational> candidates = thresholds(*left.space());
  const Rational& t = first_accepted(
      candidates, [&](const Rational& c) { return feasible(left, right, c); });
  return {t, canonical_coupling(left, right, t)};
}

Rational eval_formula1(const Coupling& xi) {
  MaxPlus top;
  for (const MaxPlus& w : xi.weights()) top = oplus(top, w);
  if (top != MaxPlus::one()) {
    throw Error(ErrorKind::NotAdmissible,
                "coupling weights must peak at 0, max is " + top.to_string());
  }
  const auto pairs = support(xi);
  // ξ(ρ): the coupling evaluated on the metric as a function on X × X.
  MaxPlus integral;
  for (const auto& [i, j] : pairs) {
    integral = oplus(integral, odot(xi.at(i, j), MaxPlus(xi.space()->dist(i, j))));
  }
  MaxPlus sup;
  for (const auto& [i, j] : pairs) {
    sup = oplus(sup, oplus(integral, MaxPlus(xi.space()->dist(i, j))));
  }
  return sup.value();
}

Rational dirac_distance(const IdempotentMeasure& mu, std::size_t point) {
  if (point >= mu.size()) throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(point));
  Rational best = 0;
  for (std::size_t y : support(mu)) {
    if (mu.space()->dist(y, point) > best) best = mu.space()->dist(y, point);
  }
  return best;
}

ChebyshevResult chebyshev(std::span<const IdempotentMeasure> measures) {
  if (measures.empty()) throw Error(ErrorKind::EmptyList, "chebyshev needs at least one measure");
  for (const auto& m : measures) require_same_space(measures.front().space(), m.space());
  const SpacePtr& space = measures.front().space();
  const std::size_t k = space->size();

  for (const Rational& t : thresholds(*space)) {
    // Pointwise-largest center compatible with every measure at threshold t.
    std::vector<MaxPlus> center(k);
    for (std::size_t j = 0; j < k; ++j) {
      MaxPlus value = MaxPlus::one();
      for (const auto& m : measures) {
        MaxPlus reach;
        for (std::size_t i = 0; i < k; ++i) {
          if (space->dist(i, j) <= t) reach = oplus(reach, m.weight(i));
        }
        value = min(value, reach);
      }
      center[j] = value;
    }
    bool accepted = true;
    for (const auto& m : measures) {
      for (std::size_t i = 0; i < k && accepted; ++i) {
        if (m.weight(i).is_bottom()) continue;
        bool covered = false;
        for (std::size_t j = 0; j < k && !covered; ++j) {
          covered = space->dist(i, j) <= t && center[j] >= m.weight(i);
        }
        accepted = covered;
      }
      if (!accepted) break;
    }
    if (accepted) return {t, IdempotentMeasure::from_density(space, std::move(center))};
  }
  throw std::logic_error("chebyshev: diameter threshold rejected");
}

ChebyshevResult chebyshev_bruteforce(std::span<const IdempotentMeasure> measures) {
  if (measures.empty()) throw Error(ErrorKind::EmptyList, "chebyshev needs at least one measure");
  for (const auto& m : measures) require_same_space(measures.front().space(), m.space());
  const SpacePtr& space = measures.front().space();
  const std::size_t k = space->size();

  std::vector<MaxPlus> values{MaxPlus::bottom()};
  for (const auto& m : measures) {
    for (const MaxPlus& w : m.density()) values.push_back(w);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::optional<ChebyshevResult> best;
  std::vector<std::size_t> digit(k, 0);
  while (true) {
    std::vector<MaxPlus> density(k);
    MaxPlus top;
    for (std::size_t j = 0; j < k; ++j) {
      density[j] = values[digit[j]];
      top = oplus(top, density[j]);
    }
    if (top == MaxPlus::one()) {
      auto nu = IdempotentMeasure::from_density(space, std::move(density));
      Rational worst = 0;
      bool pruned = false;
      for (const auto& m : measures) {
        const Rational d = distance(m, nu).value;
        if (d > worst) worst = d;
        if (best && worst >= best->radius) {
          pruned = true;
          break;
        }
      }
      if (!pruned) best = ChebyshevResult{worst, std::move(nu)};
    }
    std::size_t pos = 0;
    while (pos < k && ++digit[pos] == values.size()) digit[pos++] = 0;
    if (pos == k) break;
  }
  return std::move(*best);
}

Rational oracle_distance(const IdempotentMeasure& left, const IdempotentMeasure& right) {
  require_same_space(left.space(), right.space());
  const FiniteMetricSpace& space = *left.space();
  const std::size_t k = space.size();
  const auto s1 = support(left);
  const auto s2 = support(right);
  if (s1.size() * s2.size() > kOracleMaxPairs) {
    throw Error(ErrorKind::TooLarge, std::to_string(s1.size() * s2.size()) +
                                         " support pairs, limit " +
                                         std::to_string(kOracleMaxPairs));
  }

  // Restricted min-coupling on a pair set; admissible iff its marginals match.
  auto admissible_on = [&](auto allowed) {
    std::vector<MaxPlus> rows(k), cols(k);
    for (std::size_t i : s1) {
      for (std::size_t j : s2) {
        if (!allowed(i, j)) continue;
        const MaxPlus w = min(left.weight(i), right.weight(j));
        rows[i] = oplus(rows[i], w);
        cols[j] = oplus(cols[j], w);
      }
    }
    return rows == left.density() && cols == right.density();
  };

  std::optional<Rational> by_threshold;
  for (const Rational& t : thresholds(space)) {
    if (admissible_on([&](std::size_t i, std::size_t j) { return space.dist(i, j) <= t; })) {
      by_threshold = t;
      break;
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i : s1) {
    for (std::size_t j : s2) pairs.emplace_back(i, j);
  }
  std::optional<Rational> by_pattern;
  for (std::size_t mask = 1; mask < (std::size_t{1} << pairs.size()); ++mask) {
    std::vector<bool> in(k * k, false);
    Rational worst = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (!(mask >> p & 1U)) continue;
      in[pairs[p].first * k + pairs[p].second] = true;
      if (space.dist(pairs[p].first, pairs[p].second) > worst) {
        worst = space.dist(pairs[p].first, pairs[p].second);
      }
    }
    if (by_pattern && worst >= *by_pattern) continue;
    if (admissible_on([&](std::size_t i, std::size_t j) { return in[i * k + j]; })) {
      by_pattern = worst;
    }
  }

  if (!by_threshold || !by_pattern || *by_threshold != *by_pattern) {
    throw std::logic_error("oracle_distance: threshold scan and pattern search disagree");
  }
  return *by_threshold;
}

Rational bottleneck_distance(std::span<const MaxPlus> w1, std::span<const MaxPlus> w2,
                             std::span<const Rational> cross) {
  if (cross.size() != w1.size() * w2.size()) {
    throw Error(ErrorKind::ShapeMismatch, "cross matrix does not match the weight vectors");
  }
  const std::size_t k2 = w2.size();
  std::vector<Rational> candidates{Rational(0)};
  for (std::size_t i = 0; i < w1.size(); ++i) {
    if (w1[i].is_bottom()) continue;
    for (std::size_t j = 0; j < k2; ++j) {
      if (w2[j].is_finite()) candidates.push_back(cross[i * k2 + j]);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return first_accepted(candidates, [&](const Rational& t) {
    return dominates(w1, w2, [&](std::size_t i, std::size_t j) { return cross[i * k2 + j] <= t; });
  });
}

}  // namespace idem
