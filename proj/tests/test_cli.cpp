#include <doctest.h>

#include "khflow/cli.hpp"
#include "khflow/cube.hpp"
#include "khflow/verify.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace khflow;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = run(args, o, e);
  return {c, o.str(), e.str()};
}

const std::string DATA = default_data_dir();
const std::string TREFOIL = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

std::string tmp(const std::string& name) { return "/tmp/khflow_cli_" + name; }

} // namespace

TEST_CASE("s of the right trefoil") {
  auto r = call({"s", "--pd", TREFOIL, "--coeffs", "Q"});
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  CHECK(call({"s", DATA + "/corpus/trefoil-left.pd", "--coeffs", "F2"}).out == "-2\n");
  auto d = call({"s", "--pd", TREFOIL, "--detail"});
  CHECK(d.out.find("s_min 1") != std::string::npos);
  CHECK(d.out.find("s_max 3") != std::string::npos);
}

TEST_CASE("empty link") {
  auto r = call({"homology", "--pd", ""});
  CHECK(r.code == 0);
  CHECK(r.out.find("H^0 = Z\n") != std::string::npos);
  CHECK(r.out.find("total rank 1") != std::string::npos);
}

TEST_CASE("homology and complex") {
  auto h = call({"homology", "--pd", TREFOIL, "--frobenius", "0,0"});
  CHECK(h.code == 0);
  CHECK(h.out.find("total rank 4") != std::string::npos);
  auto f2 = call({"homology", "--pd", TREFOIL, "--frobenius", "0,0", "--coeffs", "F2"});
  CHECK(f2.out.find("coefficients F2") != std::string::npos);
  auto c = call({"complex", "--pd", TREFOIL});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("complex 4 degrees", 0) == 0);
}

TEST_CASE("output is deterministic") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"complex", "--pd", TREFOIL},
           {"flowcat", "--pd", TREFOIL, "--stage", "bn"},
           {"export", "--what", "flowcat", "--pd", TREFOIL},
           {"canonical", DATA + "/corpus/hopf-positive.pd"},
       }) {
    auto a = call(args), b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"s"}).code == 2);
  CHECK(call({"s", "--pd", TREFOIL, DATA + "/corpus/unknot.pd"}).code == 2);
  CHECK(call({"s", "--pd", TREFOIL, "--coeffs", "Z"}).code == 2);
  CHECK(call({"s", "--pd", TREFOIL, "--coeffs", "R"}).code == 2);
  CHECK(call({"verify", "--suite", "nope"}).code == 2);
  CHECK(call({"moves", "--pd", TREFOIL}).code == 2);
  CHECK(call({"complex", "--pd", TREFOIL, "--sign", "mine"}).code == 2);
  auto bad = call({"s", "--pd", "X[1,2,3"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("MalformedPD") != std::string::npos);
  CHECK(call({"s", "--pd", "X[1,4,2,5] X[3,6,4,1]"}).code == 1);
  CHECK(call({"homology", "/nonexistent/file.pd"}).code == 1);
  CHECK(call({"s", "--pd", "Loop[1] Loop[2]"}).code == 1);
}

TEST_CASE("sign assignment from a file") {
  std::string path = tmp("sign.json");
  {
    std::ofstream f(path);
    f << sign_to_json(standard_sign(3));
  }
  auto a = call({"homology", "--pd", TREFOIL, "--sign", "file:" + path});
  CHECK(a.code == 0);
  CHECK(a.out == call({"homology", "--pd", TREFOIL}).out);
  {
    std::ofstream f(path);
    f << sign_to_json(standard_sign(2));
  }
  CHECK(call({"homology", "--pd", TREFOIL, "--sign", "file:" + path}).code == 1);
  auto bad = standard_sign(3);
  bad.set(0, 0, 1 - bad.at(0, 0));
  {
    std::ofstream f(path);
    f << sign_to_json(bad);
  }
  auto r = call({"complex", "--pd", TREFOIL, "--sign", "file:" + path});
  CHECK(r.code == 1);
  CHECK(r.err.find("NotASignAssignment") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("moves script") {
  auto r = call({"moves", DATA + "/corpus/hopf-positive.pd", "--script", DATA + "/scripts/hopf.moves"});
  CHECK(r.code == 0);
  CHECK(r.out.find("objects 4\n") != std::string::npos);
  CHECK(r.out.find("homology unchanged") != std::string::npos);
  std::string path = tmp("bad.moves");
  {
    std::ofstream f(path);
    f << "cancel X_01 nowhere\n";
  }
  auto b = call({"moves", DATA + "/corpus/hopf-positive.pd", "--script", path});
  CHECK(b.code == 1);
  CHECK(b.err.find("InvalidScript") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("canonical degrees from a script") {
  auto r = call({"canonical", DATA + "/corpus/trefoil-left.pd", "--script", DATA + "/scripts/trefoil-genus-one.cob"});
  CHECK(r.code == 0);
  CHECK(r.out.find("euler characteristic -2") != std::string::npos);
  CHECK(r.out.find("degree alpha -> beta 0") != std::string::npos);
  auto c = call({"canonical", "--pd", TREFOIL});
  CHECK(c.out.find("orientation + gr_h 0") != std::string::npos);
}

TEST_CASE("export") {
  for (std::string what : {"diagram", "complex", "homology", "config", "flowcat"}) {
    auto r = call({"export", "--what", what, "--pd", TREFOIL});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == 1);
  }
  auto s = call({"export", "--what", "sign", "--n", "3"});
  CHECK(nlohmann::json::parse(s.out)["schema"] == 1);
  auto c = call({"export", "--what", "cobordism", DATA + "/corpus/trefoil-right.pd", "--script", DATA + "/scripts/trefoil-cup-merge.cob"});
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["schema"] == 1);
  std::string path = tmp("out.json");
  CHECK(call({"export", "--what", "diagram", "--pd", TREFOIL, "--out", path}).code == 0);
  std::ifstream f(path);
  CHECK(nlohmann::json::parse(f)["pd"].size() == 3);
  std::remove(path.c_str());
  CHECK(call({"export", "--what", "sign"}).code == 2);
}

TEST_CASE("verify suites") {
  auto r = call({"verify", "--suite", "frame-assignments", "--n", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS frame-assignments\n", 0) == 0);
  CHECK(r.out.find("80 faces") != std::string::npos);
  auto small = call({"verify", "--suite", "structure", "--max-crossings", "3"});
  CHECK(small.code == 0);
  CHECK(small.out.find("figure-eight") == std::string::npos);
  CHECK(small.out.find("trefoil-left") != std::string::npos);
}

TEST_CASE("JSON input round trip") {
  std::string path = tmp("t25.json");
  CHECK(call({"export", "--what", "diagram", DATA + "/corpus/t25.pd", "--out", path}).code == 0);
  CHECK(call({"s", path}).out == "4\n");
  CHECK(call({"s", "--pd", "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]"}).out == "2\n");
  CHECK(call({"s", "--pd", "{\"x\": 1}"}).code == 1);
  std::remove(path.c_str());
}
