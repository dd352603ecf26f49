#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "idem/document.hpp"
#include "idem/error.hpp"
#include "idem/propsuite.hpp"
#include "idem/tower.hpp"
#include "idem/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace idem;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kPropertyFailure = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

// Resolves named spaces: first the --space file, then a sibling <name>.json
// next to the document that mentions it.
class Resolver {
 public:
  void add(SpacePtr space) { known_[space->name()] = std::move(space); }

  doc::SpaceResolver for_file(const std::string& path) {
    return [this, dir = fs::path(path).parent_path()](const std::string& name) {
      if (auto it = known_.find(name); it != known_.end()) return it->second;
      const fs::path sibling = dir / (name + ".json");
      if (!fs::exists(sibling)) {
        throw Error(ErrorKind::Parse, "space '" + name + "' not found (looked for " + sibling.string() + ")");
      }
      SpacePtr space = doc::space_from_json(read_json(sibling.string()));
      if (space->name() != name) {
        throw Error(ErrorKind::Parse, sibling.string() + " defines space '" + space->name() + "', expected '" + name + "'");
      }
      add(space);
      return space;
    };
  }

  IdempotentMeasure measure(const std::string& path) {
    return doc::measure_from_json(read_json(path), for_file(path));
  }
  TowerElement tower(const std::string& path) {
    return doc::tower_from_json(read_json(path), for_file(path));
  }

 private:
  std::map<std::string, SpacePtr> known_;
};

struct Options {
  std::string format = "text";
  std::string space_file;
  std::vector<std::string> inputs;
  bool witness = false;
  int level = 1;
  std::string map;
  std::string target_file;
  suite::GenConfig cfg;
  std::string model = "grid-l1";
  std::vector<std::string> checks;
  std::string replay;
  bool timing = false;
};

bool as_json(const Options& o) { return o.format == "json"; }

json result(const std::string& verb) { return {{"kind", "result"}, {"verb", verb}}; }

void emit(const Options& o, const json& doc, const std::string& text) {
  if (as_json(o)) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string show(const TowerElement& e) {
  return e.level() == 1 ? to_string(e.to_measure()) : to_string(e);
}

void need_inputs(const Options& o, std::size_t count, const std::string& verb) {
  if (o.inputs.size() != count) {
    throw Error(ErrorKind::Parse, verb + " expects " + std::to_string(count) + " input files, got " +
                                      std::to_string(o.inputs.size()));
  }
}

int cmd_dist(const Options& o, Resolver& r) {
  need_inputs(o, 2, "dist");
  const auto a = r.measure(o.inputs[0]);
  const auto b = r.measure(o.inputs[1]);
  const auto cert = distance(a, b);
  json out = result("dist");
  out["value"] = doc::rational_to_json(cert.value);
  std::string text = format_rational(cert.value) + "\n";
  if (o.witness) {
    out["witness"] = doc::coupling_to_json(cert.witness);
    text += doc::coupling_to_json(cert.witness).dump(2) + "\n";
  }
  emit(o, out, text);
  return kOk;
}

int cmd_oracle(const Options& o, Resolver& r) {
  need_inputs(o, 2, "oracle");
  const auto a = r.measure(o.inputs[0]);
  const auto b = r.measure(o.inputs[1]);
  const Rational oracle = oracle_distance(a, b);
  const Rational solver = distance(a, b).value;
  json out = result("oracle");
  out["oracle"] = doc::rational_to_json(oracle);
  out["solver"] = doc::rational_to_json(solver);
  out["agree"] = oracle == solver;
  emit(o, out, "oracle " + format_rational(oracle) + ", solver " + format_rational(solver) +
                   (oracle == solver ? ", agree\n" : ", DISAGREE\n"));
  return oracle == solver ? kOk : kPropertyFailure;
}

int cmd_push(const Options& o, Resolver& r) {
  need_inputs(o, 1, "push");
  if (o.target_file.empty()) throw Error(ErrorKind::Parse, "push needs --target <space file>");
  const SpacePtr target = doc::space_from_json(read_json(o.target_file));
  const auto mu = r.measure(o.inputs[0]);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::stringstream items(o.map);
  for (std::string item; std::getline(items, item, ',');) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Parse, "map entry '" + item + "' is not 'from:to'");
    pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
  }
  const auto pushed = pushforward(make_point_map(mu.space(), target, pairs), mu);
  emit(o, doc::measure_to_json(pushed, true), to_string(pushed) + "\n");
  return kOk;
}

void emit_tower(const Options& o, const TowerElement& e) {
  const json out = e.level() == 1 ? doc::measure_to_json(e.to_measure(), true) : doc::tower_to_json(e, true);
  emit(o, out, show(e) + "\n");
}

int cmd_flatten(const Options& o, Resolver& r) {
  need_inputs(o, 1, "flatten");
  emit_tower(o, psi(r.tower(o.inputs[0])));
  return kOk;
}

int cmd_embed(const Options& o, Resolver& r) {
  need_inputs(o, 1, "embed");
  emit_tower(o, eta_nm(r.tower(o.inputs[0]), o.level));
  return kOk;
}

int cmd_project(const Options& o, Resolver& r) {
  need_inputs(o, 1, "project");
  emit_tower(o, psi_mn(r.tower(o.inputs[0]), o.level));
  return kOk;
}

int cmd_dplus(const Options& o, Resolver& r) {
  need_inputs(o, 2, "dplus");
  const LimitPoint p(r.tower(o.inputs[0]));
  const LimitPoint q(r.tower(o.inputs[1]));
  const Rational d = d_plus(p, q);
  json out = result("dplus");
  out["value"] = doc::rational_to_json(d);
  emit(o, out, format_rational(d) + "\n");
  return kOk;
}

int cmd_cheb(const Options& o, Resolver& r) {
  if (o.inputs.empty()) throw Error(ErrorKind::EmptyList, "cheb expects at least one measure file");
  std::vector<IdempotentMeasure> measures;
  for (const auto& path : o.inputs) measures.push_back(r.measure(path));
  const auto res = chebyshev(measures);
  json out = result("cheb");
  out["radius"] = doc::rational_to_json(res.radius);
  out["center"] = doc::measure_to_json(res.center);
  emit(o, out, "radius " + format_rational(res.radius) + "\ncenter " + to_string(res.center) + "\n");
  return kOk;
}

int cmd_p7(const Options& o, Resolver& r) {
  need_inputs(o, 1, "p7");
  const auto mu = r.measure(o.inputs[0]);
  const P7Result res = p7_check(mu, o.level);
  json out = result("p7");
  out["level"] = o.level;
  out["epsilon"] = doc::rational_to_json(res.epsilon);
  out["lhs"] = doc::rational_to_json(res.lhs);
  if (res.set_variant) out["set_variant"] = doc::rational_to_json(*res.set_variant);
  out["holds"] = res.holds;
  std::string text = "epsilon=" + format_rational(res.epsilon) + " lhs=" + format_rational(res.lhs);
  if (res.set_variant) text += " set=" + format_rational(*res.set_variant);
  text += std::string(" holds=") + (res.holds ? "true" : "false") + "\n";
  emit(o, out, text);
  return res.holds ? kOk : kPropertyFailure;
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Parse, "invalid seed '" + text + "'");
}

int cmd_verify(Options o) {
  o.cfg.space_model = suite::parse_space_model(o.model);
  o.cfg.validate();
  suite::SuiteReport report;
  report.config = o.cfg;
  if (!o.replay.empty()) {
    if (o.checks.size() != 1) throw Error(ErrorKind::Parse, "--replay needs exactly one --check");
    report.checks.push_back(suite::replay_case(o.checks[0], o.cfg, parse_seed(o.replay)));
  } else if (!o.checks.empty()) {
    for (const auto& name : o.checks) report.checks.push_back(suite::run_check(name, o.cfg));
  } else {
    report = suite::run_suite(o.cfg);
  }
  if (as_json(o)) {
    std::cout << suite::render_json(report, o.timing).dump(2) << "\n";
  } else {
    std::cout << suite::render_text(report, o.timing);
  }
  return report.ok() ? kOk : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Idempotent measures on finite metric spaces"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, const std::string& inputs_help) {
    sub->add_option("inputs", o.inputs, inputs_help);
    sub->add_option("--space", o.space_file, "space document resolving named spaces");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* dist = app.add_subcommand("dist", "bottleneck distance between two measures");
  common(dist, "two measure documents");
  dist->add_flag("--witness", o.witness, "also print an optimal coupling");

  auto* oracle = app.add_subcommand("oracle", "brute-force distance, compared with the solver");
  common(oracle, "two measure documents");

  auto* push = app.add_subcommand("push", "pushforward along a point map");
  common(push, "a measure document");
  push->add_option("--map", o.map, "point map as from:to pairs, e.g. a:x,b:x,c:y")->required();
  push->add_option("--target", o.target_file, "target space document")->required();

  auto* flatten = app.add_subcommand("flatten", "monad multiplication: level n to n-1");
  common(flatten, "a tower document of level >= 2");

  auto* embed = app.add_subcommand("embed", "iterated Dirac embedding up to --level");
  common(embed, "a tower or measure document");
  embed->add_option("--level", o.level, "target level")->required();

  auto* project = app.add_subcommand("project", "iterated flattening down to --level");
  common(project, "a tower document");
  project->add_option("--level", o.level, "target level")->required();

  auto* dplus = app.add_subcommand("dplus", "direct-limit distance between two tower elements");
  common(dplus, "two tower or measure documents");

  auto* cheb = app.add_subcommand("cheb", "Chebyshev radius and center of a family of measures");
  common(cheb, "one or more measure documents");

  auto* p7 = app.add_subcommand("p7", "check the distance-to-Dirac-image inequality");
  common(p7, "a measure document");
  p7->add_option("--level", o.level, "chain index i >= 1")->default_val(1);

  auto* verify = app.add_subcommand("verify", "run the randomized property suite");
  verify->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--seed", o.cfg.seed, "base seed")->capture_default_str();
  verify->add_option("--cases", o.cfg.cases, "cases per check")->capture_default_str();
  verify->add_option("--size", o.cfg.space_size, "maximum space size (2..8)")->capture_default_str();
  verify->add_option("--level", o.cfg.tower_level, "tower level (0..4)")->capture_default_str();
  verify->add_option("--model", o.model, "space model")->check(CLI::IsMember({"grid-l1", "graph"}))->capture_default_str();
  verify->add_option("--max-support", o.cfg.max_support, "maximum measure support")->capture_default_str();
  verify->add_option("--branching", o.cfg.branching, "children per tower node (1..3)")->capture_default_str();
  verify->add_option("--denominator", o.cfg.weight_denominator_bound, "weight denominator bound")->capture_default_str();
  verify->add_option("--check", o.checks, "run only the named checks");
  verify->add_option("--replay", o.replay, "replay one case seed (needs one --check)");
  verify->add_flag("--timing", o.timing, "include per-check timings");
  verify->add_flag("--list", [](std::int64_t) {
    for (const auto& name : suite::check_names()) std::cout << name << "\n";
    throw CLI::Success();
  }, "list check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), kInvalid);
  }

  try {
    Resolver resolver;
    if (!o.space_file.empty()) resolver.add(doc::space_from_json(read_json(o.space_file)));
    if (*dist) return cmd_dist(o, resolver);
    if (*oracle) return cmd_oracle(o, resolver);
    if (*push) return cmd_push(o, resolver);
    if (*flatten) return cmd_flatten(o, resolver);
    if (*embed) return cmd_embed(o, resolver);
    if (*project) return cmd_project(o, resolver);
    if (*dplus) return cmd_dplus(o, resolver);
    if (*cheb) return cmd_cheb(o, resolver);
    if (*p7) return cmd_p7(o, resolver);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: Parse: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
