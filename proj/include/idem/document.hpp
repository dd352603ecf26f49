#pragma once

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "idem/maxplus.hpp"
#include "idem/measure.hpp"
#include "idem/tower.hpp"
#include "idem/transport.hpp"

namespace idem::doc {

using nlohmann::json;

// Looks up a space referenced by name from inside a document.
using SpaceResolver = std::function<SpacePtr(const std::string& name)>;

// Integers become JSON integers (when they fit in 64 bits); everything else
// is a "p/q" string.  Floats are rejected on input.
json rational_to_json(const Rational& value);
Rational rational_from_json(const json& j, const std::string& where);
json maxplus_to_json(const MaxPlus& value);
MaxPlus maxplus_from_json(const json& j, const std::string& where);

// Every parser throws Error(Parse) naming the offending field, or the
// validation error of the underlying type.
std::string kind_of(const json& j);

json space_to_json(const FiniteMetricSpace& space);
SpacePtr space_from_json(const json& j);

/// With inline_space the space document is embedded, otherwise referenced
/// by name.  Densities list every point, bottom as "-inf".
json measure_to_json(const IdempotentMeasure& mu, bool inline_space = false);
IdempotentMeasure measure_from_json(const json& j, const SpaceResolver& resolve);

json tower_to_json(const TowerElement& e, bool inline_space = false);
/// Accepts tower documents and measure documents (as level-1 elements).
TowerElement tower_from_json(const json& j, const SpaceResolver& resolve);

json coupling_to_json(const Coupling& xi, bool inline_space = false);
Coupling coupling_from_json(const json& j, const SpaceResolver& resolve);

// Spaces embedded inline are returned as-is; a string is passed to resolve.
SpacePtr resolve_space(const json& ref, const SpaceResolver& resolve);

}  // namespace idem::doc
