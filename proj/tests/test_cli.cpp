#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;

  json envelope() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = powres::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("decide") {
  auto yes = run({"decide", "--q", "3", "--set", "2,3,6,12", "--json"});
  CHECK(yes.code == 0);
  const auto e = yes.envelope();
  CHECK(e["schema_version"] == "1.0");
  CHECK(e["command"] == "decide");
  CHECK(e["input"]["set"] == json({"2", "3", "6", "12"}));
  CHECK(e["result"]["verdict"] == "Yes");
  CHECK(e["result"]["profile"]["exponents"] == json::parse("[[1,0,1,2],[0,1,1,1]]"));
  CHECK(e["result"]["covering"]["points"] == 9);
  CHECK(e["result"]["covering"]["assignment"].size() == 9);
  CHECK(e.contains("timing_ms"));

  auto no = run({"decide", "--q", "3", "--set", "2,3,6", "--json"});
  CHECK(no.code == 1);
  CHECK(no.envelope()["result"]["witness"] == json::parse("[1,1]"));

  auto text = run({"decide", "--q", "3", "--set", "2,3,6"});
  CHECK(text.code == 1);
  CHECK(text.out.find("verdict: No") != std::string::npos);
  CHECK(text.out.find("(1, 1)") != std::string::npos);

  auto trivial = run({"decide", "--q", "3", "--set", "-8,5", "--json"});
  CHECK(trivial.code == 0);
  CHECK(trivial.envelope()["result"]["trivial"]["root"] == "-2");
}

TEST_CASE("usage and guard errors exit with 2") {
  auto even = run({"decide", "--q", "2", "--set", "2,3"});
  CHECK(even.code == 2);
  CHECK(even.out.empty());
  CHECK(even.err.find("q must be an odd prime; q = 2 is out of scope") != std::string::npos);
  CHECK(run({"decide", "--q", "3", "--set", "2,x"}).code == 2);
  CHECK(run({"decide", "--q", "3", "--set", "2,0"}).code == 2);
  CHECK(run({"decide", "--q", "3"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"scan", "--q", "3", "--set", "2", "--bound", "20000000"}).code == 2);
  CHECK(run({"synthesize", "--q", "7", "--k", "2", "--twists", "all"}).code == 2);
  CHECK(run({"oracle-check", "--q", "5", "--k-max", "3", "--l-max", "5"}).code == 2);
  // eighteen support primes: 3^18 points is past the enumeration limit
  std::string wide = "2";
  for (long p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61}) {
    wide += "," + std::to_string(p);
  }
  CHECK(run({"decide", "--q", "3", "--set", wide}).code == 2);
  auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("decide") != std::string::npos);
}

TEST_CASE("certificate") {
  auto yes = run({"certificate", "--q", "3", "--set", "2,3,6,12", "--json"});
  CHECK(yes.code == 0);
  const auto cert = yes.envelope()["result"]["certificate"];
  CHECK(cert["f"] == json::parse("[2,2,1,0]"));
  CHECK(cert["product"] == "216");
  CHECK(cert["root"] == "6");
  CHECK(cert["identity"] == "2^2 * 3^2 * 6^1 = 216 = 6^3");
  CHECK(cert["verified"] == true);

  auto twisted = run({"certificate", "--q", "3", "--set", "2,3,6,12", "--c", "2,1,2,1", "--json"});
  CHECK(twisted.code == 0);
  CHECK(twisted.envelope()["result"]["certificate"]["verified"] == true);
  CHECK(run({"certificate", "--q", "3", "--set", "2,3,6,12", "--c", "1,1"}).code == 2);
  CHECK(run({"certificate", "--q", "3", "--set", "2,3,6,12", "--c", "1,1,0,1"}).code == 2);

  auto no = run({"certificate", "--q", "3", "--set", "2,3,6", "--json"});
  CHECK(no.code == 1);
  const auto r = no.envelope()["result"];
  CHECK(r["failing_c"] == json::parse("[1,1,2]"));
  CHECK(r["witness"] == json::parse("[1,1]"));
  CHECK(r["row"] == json::parse("[1,1,1]"));

  auto trivial = run({"certificate", "--q", "3", "--set", "8,5"});
  CHECK(trivial.code == 0);
  CHECK(trivial.out.find("8 = 2^3") != std::string::npos);
}

TEST_CASE("scan and census") {
  auto found = run({"scan", "--q", "3", "--set", "2,3,6", "--bound", "100", "--json"});
  CHECK(found.code == 1);
  CHECK(found.envelope()["result"]["prime"] == 13);
  auto none = run({"scan", "--q", "3", "--set", "2,3,6,12", "--bound", "100000"});
  CHECK(none.code == 0);
  CHECK(none.out.find("none <= 100000") != std::string::npos);
  CHECK(run({"scan", "--q", "3", "--set", "2", "--bound", "10", "--json"}).envelope()["result"]["prime"] == 7);

  auto c = run({"census", "--q", "3", "--set", "2,3,6,12", "--bound", "50000", "--json"});
  CHECK(c.code == 0);
  CHECK(c.envelope()["result"]["failing_count"] == 0);
  auto d = run({"census", "--q", "3", "--set", "2,3,6", "--bound", "100000", "--json"}).envelope();
  CHECK(d["result"]["predicted_density"]["denominator"] == 9);
  CHECK(std::abs(d["result"]["empirical_density"]["value"].get<double>() - 1.0 / 9.0) < 0.02);
}

TEST_CASE("synthesize") {
  auto base = run({"synthesize", "--q", "3", "--k", "2", "--primes", "3,2", "--json"});
  CHECK(base.code == 0);
  CHECK(base.envelope()["result"]["set"] == json({"3", "2", "6", "12"}));

  auto q5 = run({"synthesize", "--q", "5", "--k", "2", "--json"}).envelope();
  CHECK(q5["result"]["set"].size() == 6);
  CHECK(q5["result"]["primes"] == json({"3", "7"}));
  CHECK(q5["result"]["verdict"] == "Yes");

  auto orbit = run({"synthesize", "--q", "3", "--k", "2", "--twists", "all", "--json"});
  CHECK(orbit.code == 0);
  CHECK(orbit.envelope()["result"]["twist_count"] == 16);
  CHECK(orbit.envelope()["result"]["twists_yes"] == 16);

  auto sampled = run({"synthesize", "--q", "7", "--k", "2", "--twists", "sample", "--samples", "5", "--json"});
  CHECK(sampled.code == 0);
  CHECK(sampled.envelope()["result"]["twist_count"] == 5);
  CHECK(run({"synthesize", "--q", "3", "--k", "2", "--primes", "2,2"}).code == 2);
  CHECK(run({"synthesize", "--q", "3", "--k", "2", "--primes", "2,4"}).code == 2);
  CHECK(run({"synthesize", "--q", "3", "--k", "3", "--primes", "2,5"}).code == 2);
}

TEST_CASE("oracle-check") {
  auto exhaustive = run({"oracle-check", "--q", "3", "--k-max", "2", "--l-max", "3", "--mode", "exhaustive", "--json"});
  CHECK(exhaustive.code == 0);
  CHECK(exhaustive.envelope()["result"]["disagreements"] == 0);
  CHECK(exhaustive.envelope()["result"]["instances"] == 2 + 4 + 8 + 8 + 64 + 512);

  auto random = run({"oracle-check", "--q", "5", "--k-max", "3", "--l-max", "4", "--mode", "random", "--seed", "42",
                     "--trials", "200", "--json"});
  CHECK(random.code == 0);
  CHECK(random.envelope()["result"]["instances"] == 200);

  auto degenerate = run({"oracle-check", "--q", "3", "--k-max", "1", "--l-max", "1", "--mode", "exhaustive"});
  CHECK(degenerate.code == 0);
  CHECK(degenerate.out.find("disagreements: 0") != std::string::npos);
}

TEST_CASE("outputs are deterministic apart from timing") {
  auto strip = [](Run r) {
    auto e = r.envelope();
    e.erase("timing_ms");
    return e;
  };
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"decide", "--q", "5", "--set", "2,21,42,84,168,336", "--json"},
           {"synthesize", "--q", "5", "--k", "3", "--twists", "sample", "--seed", "9", "--json"},
           {"oracle-check", "--q", "5", "--k-max", "2", "--l-max", "3", "--mode", "random", "--json"}}) {
    CHECK(strip(run(args)) == strip(run(args)));
  }
}
