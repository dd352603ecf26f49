#include "idem/document.hpp"

#include <initializer_list>
#include <limits>

#include "idem/error.hpp"

namespace idem::doc {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const char* key : required) {
    if (!j.contains(key)) fail(where, std::string("missing field \"") + key + "\"");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) fail(where, "unknown field \"" + key + "\"");
  }
}

void require_kind(const json& j, const std::string& expected) {
  const std::string kind = kind_of(j);
  if (kind != expected) fail("kind", "expected \"" + expected + "\", found \"" + kind + "\"");
}

const std::string& as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get_ref<const std::string&>();
}

json space_ref(const SpacePtr& space, bool inline_space) {
  return inline_space ? space_to_json(*space) : json(space->name());
}

json element_to_json(const TowerElement& e) {
  if (e.level() == 0) return e.space()->label(e.point_index());
  json children = json::array();
  for (std::size_t k = 0; k < e.child_count(); ++k) {
    children.push_back({{"weight", rational_to_json(e.weight(k))},
                        {"child", element_to_json(e.child(k))}});
  }
  return children;
}

TowerElement element_from_json(const json& j, const SpacePtr& space, int level,
                               const std::string& where) {
  if (level == 0) return TowerElement::point(space, as_string(j, where));
  if (!j.is_array()) fail(where, "expected a list of {weight, child} at level " + std::to_string(level));
  std::vector<std::pair<MaxPlus, TowerElement>> children;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    require_object(j[k], at, {"weight", "child"});
    children.emplace_back(maxplus_from_json(j[k]["weight"], at + ".weight"),
                          element_from_json(j[k]["child"], space, level - 1, at + ".child"));
  }
  if (children.empty()) throw Error(ErrorKind::EmptySupport, where + ": no children");
  return TowerElement::from_children(space, children);
}

}  // namespace

json rational_to_json(const Rational& value) {
  if (value.get_den() == 1 && value.get_num().fits_slong_p()) {
    return static_cast<std::int64_t>(value.get_num().get_si());
  }
  return format_rational(value);
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) {
      return Rational(std::to_string(j.get<std::uint64_t>()));
    }
    return Rational(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      fail(where, "not a rational: \"" + j.get<std::string>() + "\"");
    }
  }
  fail(where, "expected an integer or a \"p/q\" string, found " + j.dump());
}

json maxplus_to_json(const MaxPlus& value) {
  return value.is_bottom() ? json("-inf") : rational_to_json(value.value());
}

MaxPlus maxplus_from_json(const json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "-inf") return MaxPlus::bottom();
  return MaxPlus(rational_from_json(j, where));
}

std::string kind_of(const json& j) {
  if (!j.is_object() || !j.contains("kind")) fail("document", "missing field \"kind\"");
  return as_string(j["kind"], "kind");
}

json space_to_json(const FiniteMetricSpace& space) {
  json rows = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < space.size(); ++k) row.push_back(rational_to_json(space.dist(i, k)));
    rows.push_back(std::move(row));
  }
  return {{"kind", "space"}, {"name", space.name()}, {"labels", space.labels()}, {"dist", rows}};
}

SpacePtr space_from_json(const json& j) {
  require_object(j, "space", {"kind", "name", "labels", "dist"});
  require_kind(j, "space");
  const std::string& name = as_string(j["name"], "space.name");
  if (!j["labels"].is_array()) fail("space.labels", "expected a list");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j["labels"].size(); ++i) {
    labels.push_back(as_string(j["labels"][i], "space.labels[" + std::to_string(i) + "]"));
  }
  if (!j["dist"].is_array()) fail("space.dist", "expected a matrix");
  std::vector<std::vector<Rational>> matrix;
  for (std::size_t i = 0; i < j["dist"].size(); ++i) {
    const json& row = j["dist"][i];
    const std::string where = "space.dist[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(where, "expected a list");
    std::vector<Rational> values;
    for (std::size_t k = 0; k < row.size(); ++k) {
      values.push_back(rational_from_json(row[k], where + "[" + std::to_string(k) + "]"));
    }
    matrix.push_back(std::move(values));
  }
  return validate_metric(name, std::move(labels), matrix);
}

SpacePtr resolve_space(const json& ref, const SpaceResolver& resolve) {
  if (ref.is_object()) return space_from_json(ref);
  const std::string& name = as_string(ref, "space");
  SpacePtr space = resolve ? resolve(name) : nullptr;
  if (!space) fail("space", "cannot resolve space \"" + name + "\"");
  return space;
}

json measure_to_json(const IdempotentMeasure& mu, bool inline_space) {
  json density = json::object();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    density[mu.space()->label(i)] = maxplus_to_json(mu.weight(i));
  }
  return {{"kind", "measure"}, {"space", space_ref(mu.space(), inline_space)}, {"density", density}};
}

IdempotentMeasure measure_from_json(const json& j, const SpaceResolver& resolve) {
  require_object(j, "measure", {"kind", "space", "density"});
  require_kind(j, "measure");
  SpacePtr space = resolve_space(j["space"], resolve);
  if (!j["density"].is_object()) fail("measure.density", "expected an object {label: weight}");
  std::vector<std::pair<std::string, MaxPlus>> pairs;
  for (const auto& [label, w] : j["density"].items()) {
    pairs.emplace_back(label, maxplus_from_json(w, "measure.density." + label));
  }
  return make_measure(space, pairs);
}

json tower_to_json(const TowerElement& e, bool inline_space) {
  return {{"kind", "tower"},
          {"space", space_ref(e.space(), inline_space)},
          {"level", e.level()},
          {"element", element_to_json(e)}};
}

TowerElement tower_from_json(const json& j, const SpaceResolver& resolve) {
  if (kind_of(j) == "measure") return TowerElement::from_measure(measure_from_json(j, resolve));
  require_object(j, "tower", {"kind", "space", "level", "element"});
  require_kind(j, "tower");
  SpacePtr space = resolve_space(j["space"], resolve);
  if (!j["level"].is_number_integer() || j["level"].get<std::int64_t>() < 0 ||
      j["level"].get<std::int64_t>() > 64) {
    fail("tower.level", "expected a small nonnegative integer");
  }
  const int level = j["level"].get<int>();
  TowerElement e = element_from_json(j["element"], space, level, "tower.element");
  return e;
}

json coupling_to_json(const Coupling& xi, bool inline_space) {
  json weights = json::array();
  for (const auto& [i, k] : support(xi)) {
    weights.push_back({{"from", xi.space()->label(i)},
                       {"to", xi.space()->label(k)},
                       {"weight", maxplus_to_json(xi.at(i, k))}});
  }
  return {{"kind", "coupling"}, {"space", space_ref(xi.space(), inline_space)}, {"weights", weights}};
}

Coupling coupling_from_json(const json& j, const SpaceResolver& resolve) {
  require_object(j, "coupling", {"kind", "space", "weights"});
  require_kind(j, "coupling");
  SpacePtr space = resolve_space(j["space"], resolve);
  if (!j["weights"].is_array()) fail("coupling.weights", "expected a list");
  const std::size_t n = space->size();
  std::vector<MaxPlus> w(n * n);
  for (std::size_t k = 0; k < j["weights"].size(); ++k) {
    const json& entry = j["weights"][k];
    const std::string at = "coupling.weights[" + std::to_string(k) + "]";
    require_object(entry, at, {"from", "to", "weight"});
    const std::size_t from = space->index_of(as_string(entry["from"], at + ".from"));
    const std::size_t to = space->index_of(as_string(entry["to"], at + ".to"));
    w[from * n + to] = oplus(w[from * n + to], maxplus_from_json(entry["weight"], at + ".weight"));
  }
  return Coupling(space, std::move(w));
}

}  // namespace idem::doc
