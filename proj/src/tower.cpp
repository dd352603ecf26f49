#include "idem/tower.hpp"

#include <algorithm>
#include <map>

#include "idem/error.hpp"
#include "idem/transport.hpp"

namespace idem {

namespace {

struct NodeLess {
  bool operator()(const TowerNodePtr& a, const TowerNodePtr& b) const {
    return compare(*a, *b) < 0;
  }
};

using WeightMap = std::map<TowerNodePtr, Rational, NodeLess>;

// Builds a node from merged children; map order is already canonical.
TowerNodePtr make_node(int level, const WeightMap& merged) {
  auto node = std::make_shared<TowerNode>();
  node->level = level;
  node->children.reserve(merged.size());
  Rational top;
  bool first = true;
  for (const auto& [child, w] : merged) {
    if (first || w > top) top = w;
    first = false;
    node->children.push_back({w, child});
  }
  if (first) throw Error(ErrorKind::EmptySupport, "tower element without children");
  if (top != 0) {
    throw Error(ErrorKind::NotNormalized, "max child weight is " + format_rational(top));
  }
  return node;
}

void merge_into(WeightMap& acc, const TowerNodePtr& child, const Rational& w) {
  auto [it, inserted] = acc.try_emplace(child, w);
  if (!inserted && w > it->second) it->second = w;
}

void require_level(const TowerElement& e, int level) {
  if (e.level() != level) {
    throw Error(ErrorKind::LevelMismatch, "expected level " + std::to_string(level) +
                                              ", found " + std::to_string(e.level()));
  }
}

class DistanceMemo {
 public:
  explicit DistanceMemo(const FiniteMetricSpace& space) : space_(space) {}

  Rational operator()(const TowerNodePtr& a, const TowerNodePtr& b) {
    if (a == b) return 0;
    if (a->level == 0) return space_.dist(a->point, b->point);
    const auto key = std::make_pair(a.get(), b.get());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const auto& ca = a->children;
    const auto& cb = b->children;
    std::vector<MaxPlus> wa, wb;
    wa.reserve(ca.size());
    wb.reserve(cb.size());
    for (const auto& e : ca) wa.emplace_back(e.weight);
    for (const auto& e : cb) wb.emplace_back(e.weight);
    std::vector<Rational> cross;
    cross.reserve(ca.size() * cb.size());
    for (const auto& x : ca) {
      for (const auto& y : cb) cross.push_back((*this)(x.child, y.child));
    }
    Rational d = bottleneck_distance(wa, wb, cross);
    memo_.emplace(key, d);
    return d;
  }

 private:
  const FiniteMetricSpace& space_;
  std::map<std::pair<const TowerNode*, const TowerNode*>, Rational> memo_;
};

}  // namespace

std::strong_ordering compare(const TowerNode& a, const TowerNode& b) {
  if (&a == &b) return std::strong_ordering::equal;
  if (auto c = a.level <=> b.level; c != 0) return c;
  if (a.level == 0) return a.point <=> b.point;
  const std::size_t n = std::min(a.children.size(), b.children.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (auto c = compare(*a.children[k].child, *b.children[k].child); c != 0) return c;
    const int w = cmp(a.children[k].weight, b.children[k].weight);
    if (w != 0) return w < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.children.size() <=> b.children.size();
}

TowerElement TowerElement::point(SpacePtr space, std::size_t index) {
  if (index >= space->size()) {
    throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(index));
  }
  auto node = std::make_shared<TowerNode>();
  node->point = index;
  return {std::move(space), std::move(node)};
}

TowerElement TowerElement::point(SpacePtr space, std::string_view label) {
  const std::size_t index = space->index_of(label);
  return point(std::move(space), index);
}

TowerElement TowerElement::from_children(
    SpacePtr space, const std::vector<std::pair<MaxPlus, TowerElement>>& children) {
  WeightMap merged;
  std::optional<int> level;
  for (const auto& [w, child] : children) {
    require_same_space(space, child.space());
    if (level && *level != child.level()) {
      throw Error(ErrorKind::LevelMismatch, "children at levels " + std::to_string(*level) +
                                                " and " + std::to_string(child.level()));
    }
    level = child.level();
    if (w.is_finite()) merge_into(merged, child.node(), w.value());
  }
  if (!level) throw Error(ErrorKind::EmptySupport, "tower element without children");
  return {std::move(space), make_node(*level + 1, merged)};
}

TowerElement TowerElement::from_measure(const IdempotentMeasure& mu) {
  std::vector<std::pair<MaxPlus, TowerElement>> children;
  for (std::size_t i : support(mu)) {
    children.emplace_back(mu.weight(i), point(mu.space(), i));
  }
  return from_children(mu.space(), children);
}

IdempotentMeasure TowerElement::to_measure() const {
  require_level(*this, 1);
  std::vector<MaxPlus> density(space_->size());
  for (const auto& e : node_->children) density[e.child->point] = MaxPlus(e.weight);
  return IdempotentMeasure::from_density(space_, std::move(density));
}

std::string to_string(const TowerElement& e) {
  if (e.level() == 0) return e.space()->label(e.point_index());
  std::string out = "{";
  for (std::size_t k = 0; k < e.child_count(); ++k) {
    if (k) out += ", ";
    out += "(" + format_rational(e.weight(k)) + ", " + to_string(e.child(k)) + ")";
  }
  return out + "}";
}

TowerElement eta(const TowerElement& e) {
  auto node = std::make_shared<TowerNode>();
  node->level = e.level() + 1;
  node->children.push_back({Rational(0), e.node()});
  return {e.space(), std::move(node)};
}

TowerElement eta_nm(const TowerElement& e, int m) {
  if (m < e.level()) {
    throw Error(ErrorKind::LevelTooLow, "cannot embed level " + std::to_string(e.level()) +
                                            " into level " + std::to_string(m));
  }
  TowerElement out = e;
  while (out.level() < m) out = eta(out);
  return out;
}

TowerElement psi(const TowerElement& e) {
  if (e.level() < 2) {
    throw Error(ErrorKind::LevelTooLow,
                "flattening needs level >= 2, found " + std::to_string(e.level()));
  }
  WeightMap merged;
  for (const auto& outer : e.node()->children) {
    for (const auto& inner : outer.child->children) {
      merge_into(merged, inner.child, outer.weight + inner.weight);
    }
  }
  return {e.space(), make_node(e.level() - 1, merged)};
}

TowerElement psi_mn(const TowerElement& e, int n) {
  if (n < 1 || n > e.level()) {
    throw Error(ErrorKind::LevelTooLow, "cannot flatten level " + std::to_string(e.level()) +
                                            " to level " + std::to_string(n));
  }
  TowerElement out = e;
  while (out.level() > n) out = psi(out);
  return out;
}

TowerElement map_children(const TowerElement& e,
                          const std::function<TowerElement(const TowerElement&)>& f) {
  if (e.level() < 1) throw Error(ErrorKind::LevelTooLow, "a point has no children");
  std::vector<std::pair<MaxPlus, TowerElement>> mapped;
  mapped.reserve(e.child_count());
  for (std::size_t k = 0; k < e.child_count(); ++k) {
    mapped.emplace_back(MaxPlus(e.weight(k)), f(e.child(k)));
  }
  return TowerElement::from_children(e.space(), mapped);
}

Rational level_distance(const TowerElement& a, const TowerElement& b) {
  require_same_space(a.space(), b.space());
  require_level(b, a.level());
  DistanceMemo memo(*a.space());
  return memo(a.node(), b.node());
}

LimitPoint::LimitPoint(TowerElement e) : rep_(std::move(e)) {
  while (rep_.level() >= 1 && rep_.child_count() == 1) rep_ = rep_.child(0);
}

Rational d_plus(const LimitPoint& p, const LimitPoint& q) {
  const int level = std::max({p.level(), q.level(), 1});
  return level_distance(eta_nm(p.rep(), level), eta_nm(q.rep(), level));
}

TowerElement theta(const LimitPoint& p, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidLevel, "projection level must be >= 1");
  if (p.level() <= n) return eta_nm(p.rep(), n);
  return psi_mn(p.rep(), n);
}

TowerElement q_embed(const IdempotentMeasure& mu, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidLevel, "embedding level must be >= 1");
  std::vector<std::pair<MaxPlus, TowerElement>> children;
  for (std::size_t i : support(mu)) {
    children.emplace_back(mu.weight(i), eta_nm(TowerElement::point(mu.space(), i), m - 1));
  }
  return TowerElement::from_children(mu.space(), children);
}

Rational dirac_set_distance(const TowerElement& m) {
  require_level(m, 2);
  std::vector<IdempotentMeasure> children;
  children.reserve(m.child_count());
  for (std::size_t k = 0; k < m.child_count(); ++k) children.push_back(m.child(k).to_measure());
  return chebyshev(children).radius;
}

P7Result p7_check(const IdempotentMeasure& mu, int i) {
  if (i < 1) throw Error(ErrorKind::InvalidLevel, "chain index must be >= 1");
  P7Result r;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    const Rational d = dirac_distance(mu, x);
    if (x == 0 || d < r.epsilon) r.epsilon = d;
  }
  r.lhs = level_distance(q_embed(mu, i + 1), eta(q_embed(mu, i)));
  r.holds = r.lhs >= r.epsilon;
  if (i == 1) {
    r.set_variant = dirac_set_distance(q_embed(mu, 2));
    r.holds = r.holds && *r.set_variant >= r.epsilon;
  }
  return r;
}

}  // namespace idem
