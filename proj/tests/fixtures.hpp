#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "idem/maxplus.hpp"
#include "idem/measure.hpp"
#include "idem/tower.hpp"

namespace fx {

using namespace idem;

inline SpacePtr line(std::string name, std::vector<std::string> labels, std::vector<std::vector<long>> d) {
  std::vector<std::vector<Rational>> m;
  for (const auto& row : d) {
    m.emplace_back();
    for (long v : row) m.back().emplace_back(v);
  }
  return validate_metric(std::move(name), std::move(labels), m);
}

// a - b - c with unit steps.
inline SpacePtr x3() {
  static const SpacePtr s = line("X3", {"a", "b", "c"}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  return s;
}

inline SpacePtr two() {
  static const SpacePtr s = line("two", {"a", "b"}, {{0, 1}, {1, 0}});
  return s;
}

// Weights written as strings so "-inf" reads naturally.
inline IdempotentMeasure m(const SpacePtr& space, std::initializer_list<const char*> weights) {
  std::vector<MaxPlus> density;
  for (const char* w : weights) density.push_back(MaxPlus::parse(w));
  return IdempotentMeasure::from_density(space, density);
}

inline TowerElement pt(const SpacePtr& space, const char* label) { return TowerElement::point(space, label); }

inline TowerElement node(const SpacePtr& space, std::vector<std::pair<long, TowerElement>> kids) {
  std::vector<std::pair<MaxPlus, TowerElement>> children;
  for (auto& [w, e] : kids) children.emplace_back(MaxPlus(w), e);
  return TowerElement::from_children(space, children);
}

inline TowerElement lift(const IdempotentMeasure& mu) { return TowerElement::from_measure(mu); }

}  // namespace fx
