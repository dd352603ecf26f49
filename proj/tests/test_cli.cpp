#include <doctest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "idem/document.hpp"
#include "idem/tower.hpp"

using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(IDEM_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string data(const std::string& name) { return std::string(IDEM_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("dist") {
  const auto r = run("dist " + data("delta_a.json") + " " + data("delta_c.json"));
  CHECK(r.status == 0);
  CHECK(r.out == "2\n");

  const auto w = run("dist --witness --format json " + data("mu_ab.json") + " " + data("nu_ab.json"));
  CHECK(w.status == 0);
  const json j = json::parse(w.out);
  CHECK(j["value"] == 1);
  CHECK(j["witness"]["kind"] == "coupling");
  CHECK(j["witness"]["weights"].size() == 4);

  const auto bad = run("dist " + data("bad_norm.json") + " " + data("mu_ab.json"));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("NotNormalized") != std::string::npos);

  const auto missing = run("dist " + data("delta_a.json") + " " + data("nope.json"));
  CHECK(missing.status == 1);
}

TEST_CASE("tower verbs") {
  const auto f = run("flatten " + data("M_two.json"));
  CHECK(f.status == 0);
  CHECK(f.out == "(0,-1)\n");
  const json fj = json::parse(run("flatten --format json " + data("M_two.json")).out);
  CHECK(fj["kind"] == "measure");
  CHECK(fj["density"] == json::parse(R"({"a":0,"b":-1})"));

  CHECK(run("project --level 1 " + data("dd_a.json")).out == "(0,-inf,-inf)\n");
  const auto low = run("project --level 3 " + data("dd_a.json"));
  CHECK(low.status == 1);
  CHECK(low.out.find("LevelTooLow") != std::string::npos);

  const json e = json::parse(run("embed --level 2 --format json " + data("delta_a.json")).out);
  CHECK(e["level"] == 2);
  CHECK(run("dplus " + data("delta_a.json") + " " + data("mu_ab.json")).out == "1\n");
  CHECK(run("dplus " + data("dd_a.json") + " " + data("delta_c.json")).out == "2\n");
  CHECK(run("flatten " + data("delta_a.json")).status == 1);
}

TEST_CASE("measure verbs") {
  CHECK(run("push --map a:x,b:x,c:y --target " + data("AC.json") + " " + data("mu_ab.json")).out == "(0,-inf)\n");
  const auto partial = run("push --map a:x --target " + data("AC.json") + " " + data("mu_ab.json"));
  CHECK(partial.status == 1);
  CHECK(partial.out.find("PartialMap") != std::string::npos);

  CHECK(run("cheb " + data("delta_a.json") + " " + data("delta_c.json")).out == "radius 1\ncenter (-inf,0,-inf)\n");
  CHECK(run("oracle " + data("mu_ab.json") + " " + data("nu_ab.json")).out == "oracle 1, solver 1, agree\n");

  const auto p7 = run("p7 " + data("flat_ab.json"));
  CHECK(p7.status == 0);
  CHECK(p7.out == "epsilon=1 lhs=1 set=1 holds=true\n");
  const json pj = json::parse(run("p7 --level 2 --format json " + data("flat_ab.json")).out);
  CHECK(pj["epsilon"] == 1);
  CHECK(pj["holds"] == true);
}

TEST_CASE("CLI results equal library results") {
  const auto x3 = idem::doc::space_from_json(json::parse(R"({"kind":"space","name":"X3","labels":["a","b","c"],
      "dist":[[0,1,2],[1,0,1],[2,1,0]]})"));
  const auto resolve = [&](const std::string&) { return x3; };
  const auto mu = idem::doc::measure_from_json(json::parse(R"({"kind":"measure","space":"X3","density":{"a":0,"b":-1}})"), resolve);
  const auto nu = idem::doc::measure_from_json(json::parse(R"({"kind":"measure","space":"X3","density":{"a":-1,"b":0}})"), resolve);
  const json j = json::parse(run("dist --witness --format json " + data("mu_ab.json") + " " + data("nu_ab.json")).out);
  const auto cert = idem::distance(mu, nu);
  CHECK(j["value"] == idem::doc::rational_to_json(cert.value));
  CHECK(j["witness"] == idem::doc::coupling_to_json(cert.witness));
}

TEST_CASE("verify") {
  const auto ok = run("verify --cases 20");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("0 failures") != std::string::npos);
  const auto again = run("verify --cases 20");
  CHECK(again.out == ok.out);
  const json j = json::parse(run("verify --cases 5 --format json --check metric_axioms").out);
  CHECK(j["kind"] == "report");
  CHECK(j["checks"].size() == 1);
  CHECK(run("verify --size 1").status == 1);
  CHECK(run("verify --check bogus --cases 1").status == 1);
  const auto replay = run("verify --check metric_axioms --replay 0x1234");
  CHECK(replay.status == 0);
  CHECK(replay.out.find("1 cases") != std::string::npos);
}
