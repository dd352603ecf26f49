#include "idem/propsuite.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <sstream>

#include "idem/document.hpp"
#include "idem/error.hpp"
#include "idem/transport.hpp"

namespace idem::suite {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration and randomness

std::string to_string(SpaceModel model) {
  return model == SpaceModel::GridL1 ? "grid-l1" : "graph";
}

SpaceModel parse_space_model(const std::string& text) {
  if (text == "grid-l1" || text == "grid") return SpaceModel::GridL1;
  if (text == "graph" || text == "graph-shortest-path") return SpaceModel::GraphShortestPath;
  throw Error(ErrorKind::Parse, "unknown space model '" + text + "'");
}

void GenConfig::validate() const {
  auto in_range = [](int v, int lo, int hi, const char* field) {
    if (v < lo || v > hi) {
      throw Error(ErrorKind::Parse, std::string(field) + " must be in [" + std::to_string(lo) +
                                        ", " + std::to_string(hi) + "], got " + std::to_string(v));
    }
  };
  in_range(space_size, 2, 8, "space_size");
  in_range(max_support, 1, 8, "max_support");
  in_range(weight_denominator_bound, 1, 1000, "weight_denominator_bound");
  in_range(tower_level, 0, 4, "tower_level");
  in_range(branching, 1, 3, "branching");
  in_range(cases, 0, 1000000, "cases");
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, const std::string& name, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed ^ h) + index);
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::string point_label(int i) {
  return i < 26 ? std::string(1, static_cast<char>('a' + i)) : "p" + std::to_string(i);
}

Rational random_rational(Rng& rng, std::int64_t lo, std::int64_t hi, int den_bound) {
  const std::int64_t q = rng.uniform(1, den_bound);
  const std::int64_t p = rng.uniform(lo * q, hi * q);
  Rational r(static_cast<long>(p), static_cast<unsigned long>(q));
  r.canonicalize();
  return r;
}

std::vector<std::size_t> sample_distinct(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::swap(idx[k], idx[k + static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n - k - 1)))]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SpacePtr gen_space(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_space(cfg, rng, cfg.space_size);
}

SpacePtr gen_space(const GenConfig& cfg, Rng& rng, int size) {
  std::vector<std::string> labels;
  for (int i = 0; i < size; ++i) labels.push_back(point_label(i));
  std::vector<std::vector<Rational>> d(size, std::vector<Rational>(size));

  if (cfg.space_model == SpaceModel::GridL1) {
    const int side = size + 2;
    std::vector<std::pair<int, int>> pts;
    while (static_cast<int>(pts.size()) < size) {
      std::pair<int, int> p{static_cast<int>(rng.uniform(0, side - 1)),
                            static_cast<int>(rng.uniform(0, side - 1))};
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        d[i][j] = std::abs(pts[i].first - pts[j].first) + std::abs(pts[i].second - pts[j].second);
      }
    }
    return validate_metric("grid" + std::to_string(size), labels, d);
  }

  // Random connected weighted graph, closed under shortest paths.
  std::vector<std::vector<std::optional<Rational>>> w(size, std::vector<std::optional<Rational>>(size));
  auto edge = [&](int i, int j) {
    Rational len = random_rational(rng, 0, 3, cfg.weight_denominator_bound);
    if (len == 0) len = Rational(1, cfg.weight_denominator_bound);
    w[i][j] = w[j][i] = len;
  };
  for (int i = 1; i < size; ++i) edge(i, static_cast<int>(rng.uniform(0, i - 1)));
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) {
      if (!w[i][j] && rng.chance(1, 2)) edge(i, j);
    }
  }
  for (int i = 0; i < size; ++i) w[i][i] = Rational(0);
  for (int k = 0; k < size; ++k) {
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        if (w[i][k] && w[k][j]) {
          Rational via = *w[i][k] + *w[k][j];
          if (!w[i][j] || via < *w[i][j]) w[i][j] = via;
        }
      }
    }
  }
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) d[i][j] = *w[i][j];
  }
  return validate_metric("graph" + std::to_string(size), labels, d);
}

Rational gen_weight(const GenConfig& cfg, Rng& rng) {
  return random_rational(rng, -3, 0, cfg.weight_denominator_bound);
}

IdempotentMeasure gen_measure(const GenConfig& cfg, const SpacePtr& space) {
  Rng rng(cfg.seed);
  return gen_measure(cfg, space, rng);
}

IdempotentMeasure gen_measure(const GenConfig& cfg, const SpacePtr& space, Rng& rng,
                              int min_support) {
  const auto n = static_cast<std::int64_t>(space->size());
  const std::int64_t hi = std::min<std::int64_t>(std::max(cfg.max_support, min_support), n);
  const std::int64_t lo = std::min<std::int64_t>(min_support, hi);
  const auto picked = sample_distinct(rng, space->size(), static_cast<std::size_t>(rng.uniform(lo, hi)));
  std::vector<MaxPlus> density(space->size());
  for (std::size_t i : picked) density[i] = MaxPlus(gen_weight(cfg, rng));
  density[picked[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(picked.size()) - 1))]] =
      MaxPlus::one();
  return IdempotentMeasure::from_density(space, std::move(density));
}

TowerElement gen_tower(const GenConfig& cfg, const SpacePtr& space) {
  Rng rng(cfg.seed);
  return gen_tower(cfg, space, rng, cfg.tower_level);
}

TowerElement gen_tower(const GenConfig& cfg, const SpacePtr& space, Rng& rng, int level) {
  if (level == 0) {
    return TowerElement::point(space, static_cast<std::size_t>(
                                          rng.uniform(0, static_cast<std::int64_t>(space->size()) - 1)));
  }
  const auto k = static_cast<std::size_t>(rng.uniform(1, cfg.branching));
  std::vector<std::pair<MaxPlus, TowerElement>> children;
  for (std::size_t c = 0; c < k; ++c) {
    children.emplace_back(MaxPlus(gen_weight(cfg, rng)), gen_tower(cfg, space, rng, level - 1));
  }
  children[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(k) - 1))].first = MaxPlus::one();
  return TowerElement::from_children(space, children);
}

PointMap gen_lipschitz_map(const GenConfig& cfg, const SpacePtr& source, Rng& rng) {
  const int m = static_cast<int>(rng.uniform(2, std::max<std::int64_t>(2, static_cast<std::int64_t>(source->size()))));
  SpacePtr raw = gen_space(cfg, rng, m);
  std::vector<std::size_t> image;
  for (std::size_t x = 0; x < source->size(); ++x) {
    image.push_back(static_cast<std::size_t>(rng.uniform(0, m - 1)));
  }
  Rational scale = 1;
  for (std::size_t x = 0; x < source->size(); ++x) {
    for (std::size_t y = 0; y < source->size(); ++y) {
      if (image[x] == image[y]) continue;
      const Rational ratio = source->dist(x, y) / raw->dist(image[x], image[y]);
      if (ratio < scale) scale = ratio;
    }
  }
  std::vector<std::vector<Rational>> d(m, std::vector<Rational>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) d[i][j] = raw->dist(i, j) * scale;
  }
  SpacePtr target = validate_metric(raw->name() + "-scaled", raw->labels(), d);
  return PointMap{source, target, std::move(image)};
}

// ---------------------------------------------------------------------------
// Cases, shrinking and the check registry

namespace {

struct Case {
  SpacePtr space;
  std::vector<IdempotentMeasure> measures;
  std::vector<TowerElement> towers;
  std::vector<MaxPlus> scalars;
  std::vector<TestFunction> functions;
  std::vector<PointMap> maps;
  std::vector<std::string> labels;
  std::vector<std::vector<Rational>> matrix;
  std::vector<int> ints;
};

struct Context {
  const SuiteHooks& hooks;
  std::vector<std::string>* notes;  // null while shrinking
  int case_index;

  Rational dist(const IdempotentMeasure& a, const IdempotentMeasure& b) const {
    return hooks.distance ? hooks.distance(a, b) : distance(a, b).value;
  }
};

using Verdict = std::optional<std::string>;

struct CheckDef {
  std::string name;
  std::function<Case(const GenConfig&, Rng&)> generate;
  std::function<Verdict(const Case&, const Context&)> check;
  bool level_free = false;
};

std::string fmt(const Rational& r) { return format_rational(r); }

json describe(const Case& c) {
  json out = json::object();
  if (c.space) out["space"] = doc::space_to_json(*c.space);
  if (!c.measures.empty()) {
    out["measures"] = json::array();
    for (const auto& m : c.measures) out["measures"].push_back(doc::measure_to_json(m));
  }
  if (!c.towers.empty()) {
    out["towers"] = json::array();
    for (const auto& t : c.towers) out["towers"].push_back(doc::tower_to_json(t));
  }
  if (!c.scalars.empty()) {
    out["scalars"] = json::array();
    for (const auto& s : c.scalars) out["scalars"].push_back(doc::maxplus_to_json(s));
  }
  if (!c.functions.empty()) {
    out["functions"] = json::array();
    for (const auto& f : c.functions) {
      json vals = json::array();
      for (const auto& v : f.values) vals.push_back(doc::rational_to_json(v));
      out["functions"].push_back(vals);
    }
  }
  if (!c.maps.empty()) {
    out["maps"] = json::array();
    for (const auto& f : c.maps) {
      json image = json::object();
      for (std::size_t x = 0; x < f.image.size(); ++x) {
        image[f.source->label(x)] = f.target->label(f.image[x]);
      }
      out["maps"].push_back({{"source", f.source->name()},
                             {"target", doc::space_to_json(*f.target)},
                             {"image", image}});
    }
  }
  if (!c.matrix.empty()) {
    out["labels"] = c.labels;
    json rows = json::array();
    for (const auto& row : c.matrix) {
      json r = json::array();
      for (const auto& v : row) r.push_back(doc::rational_to_json(v));
      rows.push_back(r);
    }
    out["matrix"] = rows;
  }
  if (!c.ints.empty()) out["ints"] = c.ints;
  return out;
}

std::vector<Rational> renormalized(std::vector<Rational> w) {
  const Rational top = *std::max_element(w.begin(), w.end());
  for (auto& x : w) x -= top;
  return w;
}

std::vector<IdempotentMeasure> shrink_measure(const IdempotentMeasure& m) {
  std::vector<IdempotentMeasure> out;
  const auto supp = support(m);
  if (supp.size() < 2) return out;
  for (std::size_t drop : supp) {
    std::vector<Rational> kept;
    for (std::size_t i : supp) {
      if (i != drop) kept.push_back(m.weight(i).value());
    }
    kept = renormalized(std::move(kept));
    std::vector<MaxPlus> density(m.size());
    std::size_t k = 0;
    for (std::size_t i : supp) {
      if (i != drop) density[i] = MaxPlus(kept[k++]);
    }
    out.push_back(IdempotentMeasure::from_density(m.space(), std::move(density)));
  }
  return out;
}

std::vector<TowerElement> shrink_tower(const TowerElement& e) {
  std::vector<TowerElement> out;
  if (e.level() == 0) return out;
  const std::size_t k = e.child_count();
  if (k > 1) {
    for (std::size_t drop = 0; drop < k; ++drop) {
      std::vector<Rational> w;
      for (std::size_t c = 0; c < k; ++c) {
        if (c != drop) w.push_back(e.weight(c));
      }
      w = renormalized(std::move(w));
      std::vector<std::pair<MaxPlus, TowerElement>> children;
      std::size_t idx = 0;
      for (std::size_t c = 0; c < k; ++c) {
        if (c != drop) children.emplace_back(MaxPlus(w[idx++]), e.child(c));
      }
      out.push_back(TowerElement::from_children(e.space(), children));
    }
  }
  for (std::size_t c = 0; c < k && out.size() < 64; ++c) {
    for (const auto& smaller : shrink_tower(e.child(c))) {
      std::vector<std::pair<MaxPlus, TowerElement>> children;
      for (std::size_t o = 0; o < k; ++o) {
        children.emplace_back(MaxPlus(e.weight(o)), o == c ? smaller : e.child(o));
      }
      out.push_back(TowerElement::from_children(e.space(), children));
    }
  }
  return out;
}

std::vector<Case> shrink_candidates(const Case& c, bool level_free) {
  std::vector<Case> out;
  for (std::size_t k = 0; k < c.measures.size(); ++k) {
    for (auto& m : shrink_measure(c.measures[k])) {
      Case next = c;
      next.measures[k] = std::move(m);
      out.push_back(std::move(next));
    }
  }
  if (level_free && !c.towers.empty() &&
      std::all_of(c.towers.begin(), c.towers.end(), [](const auto& t) { return t.level() >= 1; })) {
    Case next = c;
    for (auto& t : next.towers) t = t.child(0);
    out.push_back(std::move(next));
  }
  for (std::size_t k = 0; k < c.towers.size(); ++k) {
    for (auto& t : shrink_tower(c.towers[k])) {
      Case next = c;
      next.towers[k] = std::move(t);
      out.push_back(std::move(next));
    }
  }
  return out;
}

std::string category(const std::string& message) { return message.substr(0, message.find(':')); }

Verdict run_guarded(const CheckDef& def, const Case& c, const Context& ctx) {
  try {
    return def.check(c, ctx);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

Case shrink(const CheckDef& def, Case c, std::string& message, const SuiteHooks& hooks) {
  const Context quiet{hooks, nullptr, -1};
  const std::string cat = category(message);
  for (int step = 0; step < 200; ++step) {
    bool progressed = false;
    for (auto& candidate : shrink_candidates(c, def.level_free)) {
      Verdict v = run_guarded(def, candidate, quiet);
      if (v && category(*v) == cat) {
        c = std::move(candidate);
        message = *v;
        progressed = true;
        break;
      }
    }
    if (!progressed) break;
  }
  return c;
}

// Small helpers for generators.
SpacePtr case_space(const GenConfig& cfg, Rng& rng, int cap = 8) {
  const int hi = std::min(cfg.space_size, cap);
  return gen_space(cfg, rng, static_cast<int>(rng.uniform(2, std::max(2, hi))));
}

int random_level(const GenConfig& cfg, Rng& rng, int lo, int cap) {
  return static_cast<int>(rng.uniform(lo, std::max(lo, std::min(cfg.tower_level, cap))));
}

// A second element that shares some children with the first, so that
// couplings have nontrivial zero-cost pairs.
TowerElement gen_related(const GenConfig& cfg, const SpacePtr& space, Rng& rng,
                         const TowerElement& first) {
  TowerElement other = gen_tower(cfg, space, rng, first.level());
  if (first.level() == 0 || !rng.chance(1, 2)) return other;
  std::vector<std::pair<MaxPlus, TowerElement>> children;
  for (std::size_t k = 0; k < other.child_count(); ++k) {
    const bool borrow = rng.chance(1, 2);
    const auto pick = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(first.child_count()) - 1));
    children.emplace_back(MaxPlus(other.weight(k)), borrow ? first.child(pick) : other.child(k));
  }
  return TowerElement::from_children(space, children);
}

TestFunction gen_function(const GenConfig& cfg, Rng& rng, std::size_t n) {
  TestFunction f;
  for (std::size_t i = 0; i < n; ++i) f.values.push_back(random_rational(rng, -5, 5, cfg.weight_denominator_bound));
  return f;
}

MaxPlus gen_scalar(const GenConfig& cfg, Rng& rng) {
  if (rng.chance(1, 5)) return MaxPlus::bottom();
  return MaxPlus(random_rational(rng, -5, 5, cfg.weight_denominator_bound));
}

Rational max_support_distance(const Coupling& xi) {
  Rational best = 0;
  for (const auto& [i, j] : support(xi)) {
    if (xi.space()->dist(i, j) > best) best = xi.space()->dist(i, j);
  }
  return best;
}

// ---------------------------------------------------------------------------
// The checks

std::vector<CheckDef> make_checks() {
  std::vector<CheckDef> checks;

  checks.push_back({"semifield_axioms",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      for (int k = 0; k < 3; ++k) c.scalars.push_back(gen_scalar(cfg, rng));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const MaxPlus &a = c.scalars[0], &b = c.scalars[1], &d = c.scalars[2];
      if (oplus(oplus(a, b), d) != oplus(a, oplus(b, d))) return "oplus associativity";
      if (odot(odot(a, b), d) != odot(a, odot(b, d))) return "odot associativity";
      if (oplus(a, b) != oplus(b, a)) return "oplus commutativity";
      if (odot(a, b) != odot(b, a)) return "odot commutativity";
      if (odot(a, oplus(b, d)) != oplus(odot(a, b), odot(a, d))) return "distributivity";
      if (oplus(a, a) != a) return "idempotency";
      if (oplus(a, MaxPlus::bottom()) != a) return "bottom is not neutral for oplus";
      if (!odot(a, MaxPlus::bottom()).is_bottom()) return "bottom is not absorbing for odot";
      if (odot(a, MaxPlus::one()) != a) return "0 is not the odot unit";
      if (a.is_finite() && odot(a, MaxPlus(Rational(-a.value()))) != MaxPlus::one()) {
        return "missing odot inverse";
      }
      return std::nullopt;
    }});

  checks.push_back({"validate_metric_crosscheck",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      SpacePtr base = case_space(cfg, rng);
      c.labels = base->labels();
      const std::size_t n = base->size();
      c.matrix.assign(n, std::vector<Rational>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c.matrix[i][j] = base->dist(i, j);
      }
      const int edits = static_cast<int>(rng.uniform(0, 2));
      for (int e = 0; e < edits; ++e) {
        const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
        const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1));
        const Rational v = random_rational(rng, -1, 8, cfg.weight_denominator_bound);
        c.matrix[i][j] = v;
        if (rng.chance(2, 3)) c.matrix[j][i] = v;
      }
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const std::size_t n = c.matrix.size();
      bool valid = true;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const Rational& v = c.matrix[i][j];
          if (i == j && v != 0) valid = false;
          if (i != j && v <= 0) valid = false;
          if (v != c.matrix[j][i]) valid = false;
          for (std::size_t l = 0; l < n; ++l) {
            if (v > c.matrix[i][l] + c.matrix[l][j]) valid = false;
          }
        }
      }
      bool accepted = true;
      try {
        validate_metric("m", c.labels, c.matrix);
      } catch (const Error&) {
        accepted = false;
      }
      if (accepted != valid) {
        return std::string("validate_metric ") + (accepted ? "accepted" : "rejected") +
               " a matrix the re-scan found " + (valid ? "valid" : "invalid");
      }
      return std::nullopt;
    }});

  checks.push_back({"evaluation_axioms",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.functions.push_back(gen_function(cfg, rng, c.space->size()));
      c.functions.push_back(gen_function(cfg, rng, c.space->size()));
      c.scalars.push_back(MaxPlus(random_rational(rng, -5, 5, cfg.weight_denominator_bound)));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& mu = c.measures[0];
      const auto& phi = c.functions[0];
      const auto& chi = c.functions[1];
      const Rational& lam = c.scalars[0].value();
      const std::size_t n = phi.values.size();
      if (evaluate(mu, TestFunction{std::vector<Rational>(n, lam)}) != MaxPlus(lam)) {
        return "mu(const) != const";
      }
      TestFunction shifted = phi;
      for (auto& v : shifted.values) v += lam;
      if (evaluate(mu, shifted) != odot(evaluate(mu, phi), MaxPlus(lam))) {
        return "mu(lambda (.) phi) != mu(phi) + lambda";
      }
      TestFunction joined = phi;
      for (std::size_t i = 0; i < n; ++i) joined.values[i] = std::max(phi.values[i], chi.values[i]);
      if (evaluate(mu, joined) != oplus(evaluate(mu, phi), evaluate(mu, chi))) {
        return "mu(phi (+) psi) != mu(phi) (+) mu(psi)";
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (evaluate(dirac(mu.space(), x), phi) != MaxPlus(phi.values[x])) return "delta_x(phi) != phi(x)";
      }
      return std::nullopt;
    }});

  checks.push_back({"representation_roundtrip",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& mu = c.measures[0];
      Rational big = 1 + diameter(*mu.space());
      for (const auto& w : mu.density()) {
        if (w.is_finite()) big -= w.value();
      }
      std::vector<MaxPlus> rebuilt(mu.size());
      for (std::size_t x = 0; x < mu.size(); ++x) {
        TestFunction indicator{std::vector<Rational>(mu.size(), Rational(-big))};
        indicator.values[x] = 0;
        const MaxPlus v = evaluate(mu, indicator);
        if (v > MaxPlus(Rational(-big))) rebuilt[x] = v;
      }
      if (rebuilt != mu.density()) return "density rebuilt from indicator evaluations differs";
      return std::nullopt;
    }});

  checks.push_back({"pushforward_laws",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      SpacePtr y = case_space(cfg, rng);
      SpacePtr z = case_space(cfg, rng);
      PointMap f{c.space, y, {}}, g{y, z, {}};
      for (std::size_t x = 0; x < c.space->size(); ++x) {
        f.image.push_back(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(y->size()) - 1)));
      }
      for (std::size_t x = 0; x < y->size(); ++x) {
        g.image.push_back(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(z->size()) - 1)));
      }
      c.maps = {f, g};
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.functions.push_back(gen_function(cfg, rng, y->size()));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& [f, g] = std::pair(c.maps[0], c.maps[1]);
      const auto& mu = c.measures[0];
      if (pushforward(compose(g, f), mu) != pushforward(g, pushforward(f, mu))) {
        return "push(g o f) != push(g) o push(f)";
      }
      PointMap id{mu.space(), mu.space(), {}};
      for (std::size_t x = 0; x < mu.size(); ++x) id.image.push_back(x);
      if (pushforward(id, mu) != mu) return "push(id) != id";
      TestFunction pulled;
      for (std::size_t x = 0; x < mu.size(); ++x) pulled.values.push_back(c.functions[0].values[f.image[x]]);
      if (evaluate(pushforward(f, mu), c.functions[0]) != evaluate(mu, pulled)) {
        return "push(f)(mu)(phi) != mu(phi o f)";
      }
      return std::nullopt;
    }});

  checks.push_back({"coupling_marginals",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& mu = c.measures[0];
      const auto& nu = c.measures[1];
      if (marginals(product_coupling(mu, nu)) != std::pair(mu, nu)) return "product coupling marginals";
      if (marginals(canonical_coupling(mu, mu, 0)) != std::pair(mu, mu)) return "diagonal coupling marginals";
      const Rational top = diameter(*mu.space());
      if (!is_admissible(canonical_coupling(mu, nu, top), mu, nu)) return "canonical coupling at diameter";
      return std::nullopt;
    }});

  checks.push_back({"distance_certificate",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& mu = c.measures[0];
      const auto& nu = c.measures[1];
      const auto cert = distance(mu, nu);
      if (!is_admissible(cert.witness, mu, nu)) return "witness not admissible";
      if (max_support_distance(cert.witness) != cert.value) return "witness support max != value";
      for (const Rational& t : thresholds(*mu.space())) {
        const bool ok = feasible(mu, nu, t);
        if (t < cert.value && ok) return "feasible below the distance at " + fmt(t);
        if (t >= cert.value && !ok) return "infeasible above the distance at " + fmt(t);
      }
      return std::nullopt;
    }});

  checks.push_back({"dirac_isometry",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      for (std::size_t x = 0; x < c.space->size(); ++x) {
        for (std::size_t y = 0; y < c.space->size(); ++y) {
          const Rational d = ctx.dist(dirac(c.space, x), dirac(c.space, y));
          if (d != c.space->dist(x, y)) {
            return "rho1(delta_" + c.space->label(x) + ", delta_" + c.space->label(y) + ") = " + fmt(d) +
                   ", base distance " + fmt(c.space->dist(x, y));
          }
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"dirac_distance_closed_form",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      for (std::size_t x = 0; x < c.space->size(); ++x) {
        if (dirac_distance(c.measures[0], x) != ctx.dist(c.measures[0], dirac(c.space, x))) {
          return "closed form differs at " + c.space->label(x);
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"metric_axioms",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      for (int k = 0; k < 3; ++k) c.measures.push_back(gen_measure(cfg, c.space, rng));
      if (rng.chance(1, 4)) c.measures[1] = c.measures[0];
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const auto &a = c.measures[0], &b = c.measures[1], &e = c.measures[2];
      const Rational ab = ctx.dist(a, b), ba = ctx.dist(b, a);
      if (ctx.dist(a, a) != 0) return "identity: d(mu, mu) != 0";
      if ((ab == 0) != (a == b)) return "indiscernibles: d = " + fmt(ab) + " for " + to_string(a) + ", " + to_string(b);
      if (ab != ba) return "symmetry: " + fmt(ab) + " vs " + fmt(ba);
      const Rational ae = ctx.dist(a, e), be = ctx.dist(b, e);
      if (ae > ab + be) return "triangle: " + fmt(ae) + " > " + fmt(ab) + " + " + fmt(be);
      return std::nullopt;
    }});

  checks.push_back({"diameter",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      for (int k = 0; k < 6; ++k) c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const Rational diam = diameter(*c.space);
      for (std::size_t k = 0; k + 1 < c.measures.size(); k += 2) {
        const Rational d = ctx.dist(c.measures[k], c.measures[k + 1]);
        if (d > diam) return "pair distance " + fmt(d) + " exceeds diameter " + fmt(diam);
      }
      Rational attained = 0;
      for (std::size_t x = 0; x < c.space->size(); ++x) {
        for (std::size_t y = 0; y < c.space->size(); ++y) {
          attained = std::max(attained, ctx.dist(dirac(c.space, x), dirac(c.space, y)));
        }
      }
      if (attained != diam) return "no Dirac pair attains the diameter " + fmt(diam);
      return std::nullopt;
    }});

  checks.push_back({"formula_equivalence",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      const std::size_t n = c.space->size();
      std::vector<Rational> w;
      c.ints.clear();
      // Flattened random density on X x X; ints hold the chosen pair indices.
      const auto count = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(std::min<std::size_t>(n * n, 6))));
      for (std::size_t p : sample_distinct(rng, n * n, count)) c.ints.push_back(static_cast<int>(p));
      for (std::size_t k = 0; k < count; ++k) c.scalars.push_back(MaxPlus(gen_weight(cfg, rng)));
      c.scalars[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(count) - 1))] = MaxPlus::one();
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const std::size_t n = c.space->size();
      std::vector<MaxPlus> w(n * n);
      for (std::size_t k = 0; k < c.ints.size(); ++k) w[static_cast<std::size_t>(c.ints[k])] = c.scalars[k];
      std::vector<Coupling> samples{Coupling(c.space, w)};
      const auto& mu = c.measures[0];
      const auto& nu = c.measures[1];
      samples.push_back(distance(mu, nu).witness);
      samples.push_back(product_coupling(mu, nu));
      for (const auto& xi : samples) {
        const auto [left, right] = marginals(xi);
        if (!is_admissible(xi, left, right)) return "sample coupling not admissible for its marginals";
        if (eval_formula1(xi) != max_support_distance(xi)) {
          return "eval_formula1 gives " + fmt(eval_formula1(xi)) + ", support max " + fmt(max_support_distance(xi));
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"solver_oracle",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      GenConfig small = cfg;
      small.max_support = std::min(cfg.max_support, 3);
      c.measures.push_back(gen_measure(small, c.space, rng));
      c.measures.push_back(gen_measure(small, c.space, rng));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const Rational solver = ctx.dist(c.measures[0], c.measures[1]);
      const Rational oracle = oracle_distance(c.measures[0], c.measures[1]);
      if (solver != oracle) return "solver " + fmt(solver) + " vs oracle " + fmt(oracle);
      return std::nullopt;
    }});

  checks.push_back({"isometric_embedding",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      SpacePtr big = case_space(cfg, rng);
      const auto keep = sample_distinct(rng, big->size(), static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(big->size()))));
      std::vector<std::string> labels;
      std::vector<std::vector<Rational>> d;
      for (std::size_t i : keep) {
        labels.push_back(big->label(i));
        d.emplace_back();
        for (std::size_t j : keep) d.back().push_back(big->dist(i, j));
      }
      c.space = validate_metric(big->name() + "-sub", labels, d);
      c.maps.push_back(PointMap{c.space, big, keep});
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const auto& i = c.maps[0];
      const Rational before = ctx.dist(c.measures[0], c.measures[1]);
      const Rational after = ctx.dist(pushforward(i, c.measures[0]), pushforward(i, c.measures[1]));
      if (before != after) return "embedding changed distance " + fmt(before) + " -> " + fmt(after);
      return std::nullopt;
    }});

  checks.push_back({"pushforward_modulus",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.maps.push_back(gen_lipschitz_map(cfg, c.space, rng));
      SpacePtr any = case_space(cfg, rng);
      PointMap g{c.space, any, {}};
      for (std::size_t x = 0; x < c.space->size(); ++x) {
        g.image.push_back(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(any->size()) - 1)));
      }
      c.maps.push_back(std::move(g));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const auto& mu = c.measures[0];
      const auto& nu = c.measures[1];
      const auto cert = distance(mu, nu);
      for (std::size_t k = 0; k < c.maps.size(); ++k) {
        const auto& f = c.maps[k];
        const Rational pushed = ctx.dist(pushforward(f, mu), pushforward(f, nu));
        Rational bound = 0;
        for (const auto& [x, y] : support(cert.witness)) {
          bound = std::max(bound, f.target->dist(f.image[x], f.image[y]));
        }
        if (pushed > bound) return "witness bound: " + fmt(pushed) + " > " + fmt(bound);
        if (k == 0 && pushed > cert.value) {
          return "1-Lipschitz map expanded " + fmt(cert.value) + " to " + fmt(pushed);
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"chebyshev_oracle",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng, 4);
      const int r = static_cast<int>(rng.uniform(1, 3));
      for (int k = 0; k < r; ++k) c.measures.push_back(gen_measure(cfg, c.space, rng));
      // Trailing measures are probe centers, not family members.
      for (int k = 0; k < 3; ++k) c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.ints.push_back(r);
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const auto split = c.measures.begin() + std::min<std::ptrdiff_t>(c.ints[0], std::ssize(c.measures));
      const std::vector<IdempotentMeasure> family(c.measures.begin(), split);
      if (family.empty()) return std::nullopt;
      const auto fast = chebyshev(family);
      const auto slow = chebyshev_bruteforce(family);
      if (fast.radius != slow.radius) return "radius " + fmt(fast.radius) + " vs brute force " + fmt(slow.radius);
      Rational attained = 0;
      for (const auto& m : family) attained = std::max(attained, ctx.dist(m, fast.center));
      if (attained != fast.radius) return "center reaches " + fmt(attained) + ", radius " + fmt(fast.radius);
      std::vector<IdempotentMeasure> probes(split, c.measures.end());
      probes.insert(probes.end(), family.begin(), family.end());
      for (const auto& nu : probes) {
        Rational worst = 0;
        for (const auto& m : family) worst = std::max(worst, ctx.dist(m, nu));
        if (worst < fast.radius) return "a probe center beats the radius: " + fmt(worst) + " < " + fmt(fast.radius);
      }
      return std::nullopt;
    }});

  checks.push_back({"level1_matches_transport",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const Rational tower = level_distance(TowerElement::from_measure(c.measures[0]),
                                            TowerElement::from_measure(c.measures[1]));
      const Rational direct = ctx.dist(c.measures[0], c.measures[1]);
      if (tower != direct) return "rho_1 via tower " + fmt(tower) + ", via transport " + fmt(direct);
      return std::nullopt;
    }});

  checks.push_back({"monad_unit_laws",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 1, 4)));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& e = c.towers[0];
      if (psi(eta(e)) != e) return "psi o eta != id";
      if (psi(map_children(e, [](const TowerElement& x) { return eta(x); })) != e) return "psi o I(eta) != id";
      for (int m = e.level(); m <= e.level() + 2; ++m) {
        if (psi_mn(eta_nm(e, m), e.level()) != e) return "psi_{m,n} o eta_{n,m} != id at m = " + std::to_string(m);
      }
      if (e.level() >= 1) {
        for (int m = e.level() + 1; m <= e.level() + 2; ++m) {
          const TowerElement q = map_children(e, [&](const TowerElement& x) { return eta_nm(x, m - 1); });
          if (psi_mn(q, e.level()) != e) return "psi_{m,n} o q_{n,m} != id at m = " + std::to_string(m);
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"monad_associativity",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, 3));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& a = c.towers[0];
      const TowerElement outer_first = psi(psi(a));
      const TowerElement inner_first = psi(map_children(a, [](const TowerElement& x) { return psi(x); }));
      if (outer_first != inner_first) {
        return "psi o psi_I = " + to_string(outer_first) + ", psi o I(psi) = " + to_string(inner_first);
      }
      return std::nullopt;
    }});

  checks.push_back({"embedding_isometry",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 0, 3)));
      c.towers.push_back(gen_related(cfg, c.space, rng, c.towers[0]));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto &a = c.towers[0], &b = c.towers[1];
      const Rational base = level_distance(a, b);
      for (int m = a.level() + 1; m <= a.level() + 2; ++m) {
        const Rational lifted = level_distance(eta_nm(a, m), eta_nm(b, m));
        if (lifted != base) {
          return "rho_" + std::to_string(m) + " of lifts " + fmt(lifted) + " vs rho_" +
                 std::to_string(a.level()) + " " + fmt(base);
        }
      }
      return std::nullopt;
    },
    true});

  checks.push_back({"dplus_well_defined",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 0, 3)));
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 0, 3)));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const LimitPoint p(c.towers[0]), q(c.towers[1]);
      const Rational d = d_plus(p, q);
      if (d != d_plus(q, p)) return "d_plus not symmetric";
      if (d_plus(p, p) != 0) return "d_plus(p, p) != 0";
      const int lo = std::max({c.towers[0].level(), c.towers[1].level(), 1});
      for (int m = lo; m <= lo + 2; ++m) {
        const Rational at = level_distance(eta_nm(c.towers[0], m), eta_nm(c.towers[1], m));
        if (at != d) return "common level " + std::to_string(m) + " gives " + fmt(at) + ", d_plus " + fmt(d);
      }
      return std::nullopt;
    }});

  checks.push_back({"flatten_nonexpansion",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      for (int level : {2, 3}) {
        c.towers.push_back(gen_tower(cfg, c.space, rng, level));
        c.towers.push_back(gen_related(cfg, c.space, rng, c.towers.back()));
      }
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      for (std::size_t k = 0; k + 1 < c.towers.size(); k += 2) {
        const auto &m = c.towers[k], &n = c.towers[k + 1];
        if (m.level() < 2 || m.level() != n.level()) continue;
        const std::string at = "level " + std::to_string(m.level()) + ": ";
        const Rational before = level_distance(m, n);
        const Rational after = level_distance(psi(m), psi(n));
        if (after > before) return at + "psi expanded " + fmt(before) + " to " + fmt(after);
        const Rational bottom = level_distance(psi_mn(m, 1), psi_mn(n, 1));
        if (bottom > before) return at + "psi_{m,1} expanded " + fmt(before) + " to " + fmt(bottom);
      }
      return std::nullopt;
    }});

  checks.push_back({"flatten_dirac_equality",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, 2));
      c.towers.push_back(gen_tower(cfg, c.space, rng, 0));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto &n = c.towers[0], &x = c.towers[1];
      const Rational flat = level_distance(psi(n), eta(x));
      const Rational nested = level_distance(n, eta_nm(x, 2));
      if (flat != nested) return "rho_1(psi N, delta_x) = " + fmt(flat) + ", rho_2(N, delta_delta_x) = " + fmt(nested);
      if (flat != dirac_distance(psi(n).to_measure(), x.point_index())) return "closed form disagrees";
      return std::nullopt;
    }});

  checks.push_back({"flatten_dirac_equality_deep",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      const int m = static_cast<int>(rng.uniform(2, 4));
      const int n = static_cast<int>(rng.uniform(0, m - 2));
      c.towers.push_back(gen_tower(cfg, c.space, rng, m));
      c.towers.push_back(gen_tower(cfg, c.space, rng, n));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto &a = c.towers[0], &x = c.towers[1];
      const int m = a.level(), n = x.level();
      if (m < n + 2) return std::nullopt;
      const Rational lhs = level_distance(psi_mn(a, n + 1), eta(x));
      const Rational rhs = level_distance(a, eta_nm(x, m));
      if (lhs != rhs) {
        return "m=" + std::to_string(m) + " n=" + std::to_string(n) + ": " + fmt(lhs) + " vs " + fmt(rhs);
      }
      return std::nullopt;
    }});

  checks.push_back({"dirac_image_chain",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng, 2));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      for (int i = 1; i <= 3; ++i) {
        const P7Result r = p7_check(c.measures[0], i);
        if (r.epsilon <= 0) return "degenerate case: epsilon = " + fmt(r.epsilon);
        if (r.lhs < r.epsilon) {
          return "i=" + std::to_string(i) + ": lhs " + fmt(r.lhs) + " < epsilon " + fmt(r.epsilon);
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"dirac_image_set",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng, 2));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& mu = c.measures[0];
      const P7Result r = p7_check(mu, 1);
      if (r.epsilon <= 0) return "degenerate case: epsilon = " + fmt(r.epsilon);
      if (!r.set_variant || *r.set_variant < r.epsilon) {
        return "set distance " + (r.set_variant ? fmt(*r.set_variant) : "?") + " < epsilon " + fmt(r.epsilon);
      }
      const TowerElement lifted = q_embed(mu, 2);
      std::vector<IdempotentMeasure> kids;
      for (std::size_t k = 0; k < lifted.child_count(); ++k) kids.push_back(lifted.child(k).to_measure());
      const auto cheb = chebyshev(kids);
      if (level_distance(lifted, eta(TowerElement::from_measure(cheb.center))) != *r.set_variant) {
        return "center does not attain the set distance";
      }
      if (mu.size() <= 4 && chebyshev_bruteforce(kids).radius != *r.set_variant) {
        return "set distance disagrees with brute-force centers";
      }
      return std::nullopt;
    }});

  checks.push_back({"theta_nonexpansion",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 0, 4)));
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 0, 4)));
      c.ints.push_back(static_cast<int>(rng.uniform(1, std::max(1, cfg.tower_level) + 1)));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const LimitPoint p(c.towers[0]), q(c.towers[1]);
      const int n = c.ints[0];
      const Rational projected = level_distance(theta(p, n), theta(q, n));
      const Rational limit = d_plus(p, q);
      if (projected > limit) return "theta_" + std::to_string(n) + " expanded " + fmt(limit) + " to " + fmt(projected);
      return std::nullopt;
    }});

  checks.push_back({"theta_consistency",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 1, 4)));
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const LimitPoint p(c.towers[0]);
      const int top = std::max(p.level(), 2) + 1;
      for (int n2 = 2; n2 <= top; ++n2) {
        for (int n1 = 1; n1 < n2; ++n1) {
          if (theta(p, n1) != psi_mn(theta(p, n2), n1)) {
            return "theta_" + std::to_string(n1) + " != psi_{" + std::to_string(n2) + "," +
                   std::to_string(n1) + "} o theta_" + std::to_string(n2);
          }
        }
      }
      return std::nullopt;
    }});

  checks.push_back({"identity_convergence",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.towers.push_back(gen_tower(cfg, c.space, rng, random_level(cfg, rng, 0, 4)));
      return c;
    },
    [](const Case& c, const Context& ctx) -> Verdict {
      const LimitPoint p(c.towers[0]);
      std::string sequence;
      for (int n = 1; n < p.level(); ++n) {
        sequence += (sequence.empty() ? "" : ", ") + fmt(d_plus(LimitPoint(theta(p, n)), p));
      }
      if (ctx.notes && ctx.case_index < 5 && !sequence.empty()) {
        ctx.notes->push_back("case " + std::to_string(ctx.case_index) + " (level " + std::to_string(p.level()) +
                             "): d_plus(theta_n p, p) for n < level = " + sequence);
      }
      for (int n = std::max(1, p.level()); n <= p.level() + 2; ++n) {
        const LimitPoint back(theta(p, n));
        if (!(back == p)) return "theta_" + std::to_string(n) + " does not return p";
        if (d_plus(back, p) != 0) return "d_plus(theta_" + std::to_string(n) + " p, p) != 0";
      }
      return std::nullopt;
    }});

  checks.push_back({"generator_validity",
    [](const GenConfig& cfg, Rng& rng) {
      Case c;
      c.space = case_space(cfg, rng);
      c.measures.push_back(gen_measure(cfg, c.space, rng));
      c.towers.push_back(gen_tower(cfg, c.space, rng, cfg.tower_level));
      c.ints = {cfg.max_support, cfg.tower_level, cfg.branching};
      return c;
    },
    [](const Case& c, const Context&) -> Verdict {
      const auto& s = *c.space;
      std::vector<std::vector<Rational>> d(s.size(), std::vector<Rational>(s.size()));
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) d[i][j] = s.dist(i, j);
      }
      validate_metric(s.name(), s.labels(), d);
      IdempotentMeasure::from_density(c.space, c.measures[0].density());
      if (static_cast<int>(support(c.measures[0]).size()) > c.ints[0]) return "support exceeds max_support";
      const auto& t = c.towers[0];
      if (t.level() != c.ints[1]) return "tower level " + std::to_string(t.level());
      std::function<Verdict(const TowerElement&)> walk = [&](const TowerElement& e) -> Verdict {
        if (e.level() == 0) return std::nullopt;
        if (static_cast<int>(e.child_count()) > c.ints[2]) return "branching exceeded";
        std::vector<std::pair<MaxPlus, TowerElement>> kids;
        for (std::size_t k = 0; k < e.child_count(); ++k) {
          kids.emplace_back(MaxPlus(e.weight(k)), e.child(k));
          if (auto v = walk(e.child(k))) return v;
        }
        if (TowerElement::from_children(e.space(), kids) != e) return "not canonical";
        return std::nullopt;
      };
      return walk(t);
    }});

  std::sort(checks.begin(), checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return checks;
}

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> checks = make_checks();
  return checks;
}

const CheckDef& find_check(const std::string& name) {
  for (const auto& def : registry()) {
    if (def.name == name) return def;
  }
  throw Error(ErrorKind::Parse, "unknown check '" + name + "'");
}

void record(CheckResult& result, const CheckDef& def, Case c, std::string message,
            std::uint64_t case_seed, const SuiteHooks& hooks) {
  ++result.failure_count;
  if (result.failures.size() >= 3) return;
  Case minimal = shrink(def, std::move(c), message, hooks);
  result.failures.push_back({case_seed, message, describe(minimal)});
}

}  // namespace

int SuiteReport::failure_count() const {
  int total = 0;
  for (const auto& c : checks) total += c.failure_count;
  return total;
}

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const auto& def : registry()) names.push_back(def.name);
  return names;
}

CheckResult run_check(const std::string& name, const GenConfig& cfg, const SuiteHooks& hooks) {
  cfg.validate();
  const CheckDef& def = find_check(name);
  const auto start = std::chrono::steady_clock::now();
  CheckResult result;
  result.name = name;
  for (int k = 0; k < cfg.cases; ++k) {
    const std::uint64_t case_seed = derive_seed(cfg.seed, name, static_cast<std::uint64_t>(k));
    Rng rng(case_seed);
    Case c = def.generate(cfg, rng);
    const Context ctx{hooks, &result.notes, k};
    if (Verdict v = run_guarded(def, c, ctx)) record(result, def, std::move(c), *v, case_seed, hooks);
    ++result.cases;
  }
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

CheckResult replay_case(const std::string& name, const GenConfig& cfg, std::uint64_t case_seed,
                        const SuiteHooks& hooks) {
  cfg.validate();
  const CheckDef& def = find_check(name);
  CheckResult result;
  result.name = name;
  Rng rng(case_seed);
  Case c = def.generate(cfg, rng);
  const Context ctx{hooks, &result.notes, 0};
  if (Verdict v = run_guarded(def, c, ctx)) record(result, def, std::move(c), *v, case_seed, hooks);
  result.cases = 1;
  return result;
}

SuiteReport run_suite(const GenConfig& cfg, const SuiteHooks& hooks) {
  cfg.validate();
  SuiteReport report;
  report.config = cfg;
  for (const auto& name : check_names()) report.checks.push_back(run_check(name, cfg, hooks));
  return report;
}

namespace {

std::string hex(std::uint64_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << v;
  return out.str();
}

json config_json(const GenConfig& cfg) {
  return {{"seed", cfg.seed},
          {"space_size", cfg.space_size},
          {"space_model", to_string(cfg.space_model)},
          {"max_support", cfg.max_support},
          {"weight_denominator_bound", cfg.weight_denominator_bound},
          {"tower_level", cfg.tower_level},
          {"branching", cfg.branching},
          {"cases", cfg.cases}};
}

}  // namespace

std::string render_text(const SuiteReport& report, bool with_timing) {
  std::ostringstream out;
  const GenConfig& cfg = report.config;
  out << "verify seed=" << cfg.seed << " cases=" << cfg.cases << " size=" << cfg.space_size
      << " level=" << cfg.tower_level << " model=" << to_string(cfg.space_model) << "\n";
  std::size_t width = 0;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  for (const auto& c : report.checks) {
    out << (c.failure_count == 0 ? "PASS  " : "FAIL  ") << c.name << std::string(width - c.name.size() + 2, ' ')
        << c.cases << " cases";
    if (c.failure_count) out << ", " << c.failure_count << " failures";
    if (with_timing) out << "  (" << static_cast<long>(c.elapsed_ms) << " ms)";
    out << "\n";
    for (const auto& f : c.failures) {
      out << "      case seed " << hex(f.case_seed) << ": " << f.message << "\n";
      out << "      input: " << f.input.dump() << "\n";
    }
    for (const auto& note : c.notes) out << "      note: " << note << "\n";
  }
  out << "summary: " << report.checks.size() << " checks, " << report.failure_count() << " failures\n";
  return out.str();
}

json render_json(const SuiteReport& report, bool with_timing) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json failures = json::array();
    for (const auto& f : c.failures) {
      failures.push_back({{"case_seed", hex(f.case_seed)}, {"message", f.message}, {"input", f.input}});
    }
    json entry = {{"name", c.name},
                  {"cases", c.cases},
                  {"failure_count", c.failure_count},
                  {"failures", failures},
                  {"notes", c.notes}};
    if (with_timing) entry["elapsed_ms"] = c.elapsed_ms;
    checks.push_back(entry);
  }
  return {{"kind", "report"},
          {"config", config_json(report.config)},
          {"checks", checks},
          {"failure_count", report.failure_count()}};
}

}  // namespace idem::suite
