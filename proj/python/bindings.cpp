#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idem/document.hpp"
#include "idem/error.hpp"
#include "idem/propsuite.hpp"
#include "idem/tower.hpp"
#include "idem/transport.hpp"

namespace py = pybind11;
using namespace idem;

namespace {

// pybind11 holders cannot be shared_ptr<const T>; spaces are immutable
// regardless, so the Python side holds a non-const pointer.
using PySpace = std::shared_ptr<FiniteMetricSpace>;
PySpace py_space(const SpacePtr& s) { return std::const_pointer_cast<FiniteMetricSpace>(s); }

// Scalars cross the boundary as fractions.Fraction; bottom is float("-inf").
py::object to_py(const Rational& r) {
  static py::handle fraction = py::object(py::module_::import("fractions").attr("Fraction")).release();
  return fraction(format_rational(r));
}

py::object to_py(const MaxPlus& v) {
  if (v.is_bottom()) return py::float_(-std::numeric_limits<double>::infinity());
  return to_py(v.value());
}

MaxPlus scalar_from_py(const py::handle& h) {
  if (py::isinstance<py::float_>(h)) {
    const double d = h.cast<double>();
    if (d == -std::numeric_limits<double>::infinity()) return MaxPlus::bottom();
    throw Error(ErrorKind::Parse, "floats are not accepted (use int, Fraction or 'p/q'), got " + std::to_string(d));
  }
  if (py::isinstance<py::bool_>(h)) throw Error(ErrorKind::Parse, "booleans are not scalars");
  return MaxPlus::parse(py::str(h).cast<std::string>());
}

Rational rational_from_py(const py::handle& h) {
  const MaxPlus v = scalar_from_py(h);
  if (v.is_bottom()) throw Error(ErrorKind::Parse, "expected a finite rational");
  return v.value();
}

std::vector<MaxPlus> density_from_py(const SpacePtr& space, const py::object& weights) {
  std::vector<MaxPlus> density(space->size());
  if (py::isinstance<py::dict>(weights)) {
    for (const auto& [k, v] : weights.cast<py::dict>()) {
      const std::size_t i = space->index_of(k.cast<std::string>());
      density[i] = oplus(density[i], scalar_from_py(v));
    }
    return density;
  }
  const auto items = weights.cast<py::list>();
  if (items.size() != space->size()) {
    throw Error(ErrorKind::SpaceMismatch, "density has " + std::to_string(items.size()) + " entries for a space of " +
                                              std::to_string(space->size()) + " points");
  }
  for (std::size_t i = 0; i < items.size(); ++i) density[i] = scalar_from_py(items[i]);
  return density;
}

py::list density_to_py(const IdempotentMeasure& mu) {
  py::list out;
  for (const auto& w : mu.density()) out.append(to_py(w));
  return out;
}

py::object json_to_py(const nlohmann::json& j) {
  static py::handle loads = py::object(py::module_::import("json").attr("loads")).release();
  return loads(j.dump());
}

nlohmann::json json_from_py(const py::object& o) {
  static py::handle dumps = py::object(py::module_::import("json").attr("dumps")).release();
  return nlohmann::json::parse(dumps(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Idempotent measures on finite metric spaces";

  static PyObject* idem_error = py::exception<Error>(m, "IdemError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(idem_error)(e.what());
      err.attr("kind") = to_string(e.kind());
      PyErr_SetObject(idem_error, err.ptr());
    }
  });

  py::class_<FiniteMetricSpace, PySpace>(m, "Space")
      .def(py::init([](std::string name, std::vector<std::string> labels, const py::list& dist) {
             std::vector<std::vector<Rational>> d;
             for (const auto& row : dist) {
               d.emplace_back();
               for (const auto& v : row.cast<py::list>()) d.back().push_back(rational_from_py(v));
             }
             return py_space(validate_metric(name, labels, d));
           }),
           py::arg("name"), py::arg("labels"), py::arg("dist"))
      .def_property_readonly("name", &FiniteMetricSpace::name)
      .def_property_readonly("labels", &FiniteMetricSpace::labels)
      .def("__len__", &FiniteMetricSpace::size)
      .def("dist", [](const FiniteMetricSpace& s, const std::string& a, const std::string& b) {
        return to_py(s.dist(s.index_of(a), s.index_of(b)));
      })
      .def("diameter", [](const FiniteMetricSpace& s) { return to_py(diameter(s)); })
      .def("thresholds", [](const FiniteMetricSpace& s) {
        py::list out;
        for (const auto& t : thresholds(s)) out.append(to_py(t));
        return out;
      })
      .def("to_json", [](const FiniteMetricSpace& s) { return json_to_py(doc::space_to_json(s)); })
      .def("__repr__", [](const FiniteMetricSpace& s) {
        return "Space(" + s.name() + ", " + std::to_string(s.size()) + " points)";
      });

  py::class_<IdempotentMeasure>(m, "Measure")
      .def(py::init([](const PySpace& space, const py::object& weights) {
             return IdempotentMeasure::from_density(space, density_from_py(space, weights));
           }),
           py::arg("space"), py::arg("density"))
      .def_property_readonly("space", [](const IdempotentMeasure& mu) { return py_space(mu.space()); })
      .def_property_readonly("density", &density_to_py)
      .def("support", [](const IdempotentMeasure& mu) {
        std::vector<std::string> out;
        for (auto i : support(mu)) out.push_back(mu.space()->label(i));
        return out;
      })
      .def("evaluate", [](const IdempotentMeasure& mu, const py::list& phi) {
        TestFunction f;
        for (const auto& v : phi) f.values.push_back(rational_from_py(v));
        return to_py(evaluate(mu, f));
      })
      .def("to_json", [](const IdempotentMeasure& mu) { return json_to_py(doc::measure_to_json(mu, true)); })
      .def(py::self == py::self)
      .def("__repr__", [](const IdempotentMeasure& mu) { return "Measure" + to_string(mu); });

  py::class_<Coupling>(m, "Coupling")
      .def_property_readonly("weights", [](const Coupling& xi) {
        py::dict out;
        const auto& s = *xi.space();
        for (const auto& [i, j] : support(xi)) out[py::make_tuple(s.label(i), s.label(j))] = to_py(xi.at(i, j));
        return out;
      })
      .def("marginals", [](const Coupling& xi) { return marginals(xi); })
      .def("to_json", [](const Coupling& xi) { return json_to_py(doc::coupling_to_json(xi, true)); });

  py::class_<TowerElement>(m, "Tower")
      .def(py::init([](const PySpace& space, const py::list& children) {
             std::vector<std::pair<MaxPlus, TowerElement>> kids;
             for (const auto& item : children) {
               const auto pair = item.cast<py::tuple>();
               kids.emplace_back(scalar_from_py(pair[0]), pair[1].cast<TowerElement>());
             }
             return TowerElement::from_children(space, kids);
           }),
           py::arg("space"), py::arg("children"))
      .def_static("point", [](const PySpace& space, const std::string& label) { return TowerElement::point(space, label); })
      .def_static("from_measure", &TowerElement::from_measure)
      .def("to_measure", &TowerElement::to_measure)
      .def_property_readonly("level", &TowerElement::level)
      .def_property_readonly("children", [](const TowerElement& e) {
        py::list out;
        for (std::size_t k = 0; k < e.child_count(); ++k) out.append(py::make_tuple(to_py(e.weight(k)), e.child(k)));
        return out;
      })
      .def("to_json", [](const TowerElement& e) { return json_to_py(doc::tower_to_json(e, true)); })
      .def(py::self == py::self)
      .def("__hash__", [](const TowerElement& e) { return std::hash<std::string>{}(to_string(e)); })
      .def("__repr__", [](const TowerElement& e) { return "Tower" + std::to_string(e.level()) + to_string(e); });

  m.def("dirac", [](const PySpace& space, const std::string& label) { return dirac(space, label); },
        py::arg("space"), py::arg("label"));
  m.def("pushforward",
        [](const IdempotentMeasure& mu, const PySpace& target, const std::map<std::string, std::string>& mapping) {
          return pushforward(make_point_map(mu.space(), target, {mapping.begin(), mapping.end()}), mu);
        },
        py::arg("mu"), py::arg("target"), py::arg("mapping"));
  m.def("product_coupling", &product_coupling);
  m.def("feasible", [](const IdempotentMeasure& a, const IdempotentMeasure& b, const py::object& t) {
    return feasible(a, b, rational_from_py(t));
  });
  m.def("distance", [](const IdempotentMeasure& a, const IdempotentMeasure& b) {
    auto cert = distance(a, b);
    return py::make_tuple(to_py(cert.value), cert.witness);
  }, "Returns (value, optimal coupling).");
  m.def("oracle_distance", [](const IdempotentMeasure& a, const IdempotentMeasure& b) {
    return to_py(oracle_distance(a, b));
  });
  m.def("eval_formula1", [](const Coupling& xi) { return to_py(eval_formula1(xi)); });
  m.def("dirac_distance", [](const IdempotentMeasure& mu, const std::string& label) {
    return to_py(dirac_distance(mu, mu.space()->index_of(label)));
  });
  m.def("chebyshev", [](const std::vector<IdempotentMeasure>& family) {
    auto res = chebyshev(family);
    return py::make_tuple(to_py(res.radius), res.center);
  }, "Returns (radius, center).");

  m.def("eta", &eta);
  m.def("eta_nm", &eta_nm);
  m.def("psi", &psi);
  m.def("psi_mn", &psi_mn);
  m.def("level_distance", [](const TowerElement& a, const TowerElement& b) { return to_py(level_distance(a, b)); });
  m.def("d_plus", [](const TowerElement& a, const TowerElement& b) {
    return to_py(d_plus(LimitPoint(a), LimitPoint(b)));
  });
  m.def("limit_rep", [](const TowerElement& e) { return LimitPoint(e).rep(); },
        "Strips singleton wrappers: the minimal representative in the direct limit.");
  m.def("theta", [](const TowerElement& e, int n) { return theta(LimitPoint(e), n); });
  m.def("q_embed", &q_embed);
  m.def("dirac_set_distance", [](const TowerElement& e) { return to_py(dirac_set_distance(e)); });
  m.def("p7_check", [](const IdempotentMeasure& mu, int i) {
    const P7Result r = p7_check(mu, i);
    py::dict out;
    out["epsilon"] = to_py(r.epsilon);
    out["lhs"] = to_py(r.lhs);
    out["set_variant"] = r.set_variant ? to_py(*r.set_variant) : py::none();
    out["holds"] = r.holds;
    return out;
  });

  m.def("load", [](const py::object& document) -> py::object {
    const auto j = json_from_py(document);
    const doc::SpaceResolver no_names = [](const std::string& name) -> SpacePtr {
      throw Error(ErrorKind::Parse, "space '" + name + "' must be inline when loading from Python");
    };
    const std::string kind = doc::kind_of(j);
    if (kind == "space") return py::cast(py_space(doc::space_from_json(j)));
    if (kind == "measure") return py::cast(doc::measure_from_json(j, no_names));
    if (kind == "tower") return py::cast(doc::tower_from_json(j, no_names));
    if (kind == "coupling") return py::cast(doc::coupling_from_json(j, no_names));
    throw Error(ErrorKind::Parse, "cannot load a document of kind '" + kind + "'");
  }, "Parses a space, measure, tower or coupling document (spaces inline).");

  m.def("check_names", &suite::check_names);
  m.def("run_suite",
        [](std::uint64_t seed, int cases, int size, int level, const std::string& model,
           const std::vector<std::string>& checks) {
          suite::GenConfig cfg;
          cfg.seed = seed;
          cfg.cases = cases;
          cfg.space_size = size;
          cfg.tower_level = level;
          cfg.space_model = suite::parse_space_model(model);
          suite::SuiteReport report;
          {
            py::gil_scoped_release release;
            if (checks.empty()) {
              report = suite::run_suite(cfg);
            } else {
              report.config = cfg;
              for (const auto& name : checks) report.checks.push_back(suite::run_check(name, cfg));
            }
          }
          return json_to_py(suite::render_json(report));
        },
        py::arg("seed") = 1, py::arg("cases") = 100, py::arg("size") = 5, py::arg("level") = 3,
        py::arg("model") = "grid-l1", py::arg("checks") = std::vector<std::string>{});
}
