#include "idem/measure.hpp"

#include <algorithm>

#include "idem/error.hpp"

namespace idem {

IdempotentMeasure IdempotentMeasure::from_density(SpacePtr space,
                                                  std::vector<MaxPlus> density) {
  if (!space || density.size() != space->size()) {
    throw Error(ErrorKind::SpaceMismatch,
                "density has " + std::to_string(density.size()) +
                    " entries for a space of " +
                    std::to_string(space ? space->size() : 0) + " points");
  }
  const MaxPlus top = density.empty()
                          ? MaxPlus::bottom()
                          : *std::max_element(density.begin(), density.end());
  if (top.is_bottom()) throw Error(ErrorKind::EmptySupport, "all weights are -inf");
  if (top != MaxPlus::one()) {
    throw Error(ErrorKind::NotNormalized, "max weight is " + top.to_string() + ", expected 0");
  }
  return IdempotentMeasure(std::move(space), std::move(density));
}

IdempotentMeasure make_measure(const SpacePtr& space,
                               const std::vector<std::pair<std::string, MaxPlus>>& pairs) {
  std::vector<MaxPlus> density(space->size());
  for (const auto& [label, w] : pairs) {
    const std::size_t i = space->index_of(label);
    density[i] = oplus(density[i], w);
  }
  return IdempotentMeasure::from_density(space, std::move(density));
}

MaxPlus evaluate(const IdempotentMeasure& mu, const TestFunction& phi) {
  if (phi.values.size() != mu.size()) {
    throw Error(ErrorKind::SpaceMismatch,
                "test function has " + std::to_string(phi.values.size()) +
                    " values for a space of " + std::to_string(mu.size()) + " points");
  }
  MaxPlus acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc = oplus(acc, odot(mu.weight(i), MaxPlus(phi.values[i])));
  }
  return acc;
}

std::vector<std::size_t> support(const IdempotentMeasure& mu) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weight(i).is_finite()) out.push_back(i);
  }
  return out;
}

IdempotentMeasure dirac(const SpacePtr& space, std::size_t point) {
  if (point >= space->size()) {
    throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(point));
  }
  std::vector<MaxPlus> density(space->size());
  density[point] = MaxPlus::one();
  return IdempotentMeasure::from_density(space, std::move(density));
}

IdempotentMeasure dirac(const SpacePtr& space, std::string_view label) {
  return dirac(space, space->index_of(label));
}

PointMap make_point_map(const SpacePtr& source, const SpacePtr& target,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::optional<std::size_t>> image(source->size());
  for (const auto& [from, to] : pairs) {
    image[source->index_of(from)] = target->index_of(to);
  }
  PointMap f{source, target, {}};
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!image[i]) {
      throw Error(ErrorKind::PartialMap, "no image for '" + source->label(i) + "'");
    }
    f.image.push_back(*image[i]);
  }
  return f;
}

PointMap compose(const PointMap& g, const PointMap& f) {
  require_same_space(f.target, g.source);
  PointMap h{f.source, g.target, {}};
  for (std::size_t x : f.image) h.image.push_back(g.image.at(x));
  return h;
}

IdempotentMeasure pushforward(const PointMap& f, const IdempotentMeasure& mu) {
  require_same_space(f.source, mu.space());
  if (f.image.size() != f.source->size()) {
    throw Error(ErrorKind::PartialMap,
                std::to_string(f.image.size()) + " images for " +
                    std::to_string(f.source->size()) + " points");
  }
  std::vector<MaxPlus> density(f.target->size());
  for (std::size_t x = 0; x < f.image.size(); ++x) {
    if (f.image[x] >= density.size()) {
      throw Error(ErrorKind::UnknownPoint, "image index " + std::to_string(f.image[x]));
    }
    density[f.image[x]] = oplus(density[f.image[x]], mu.weight(x));
  }
  return IdempotentMeasure::from_density(f.target, std::move(density));
}

std::string to_string(const IdempotentMeasure& mu) {
  std::string out = "(";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (i) out += ",";
    out += mu.weight(i).to_string();
  }
  return out + ")";
}

}  // namespace idem
