#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "colexidx/cli.hpp"
#include "fixtures.hpp"

using namespace colexidx;
using colexidx::test::data_path;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("colexidx_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate") {
  CHECK(cli({"validate", data_path("sample.nfa")}).code == 0);
  Run broken = cli({"validate", data_path("broken.nfa")});
  CHECK(broken.code == 1);
  CHECK(broken.out.find("assumption 3") != std::string::npos);
  CHECK(cli({"validate", data_path("missing.nfa")}).code == 2);
  Run j = cli({"validate", "--json", data_path("sample.nfa")});
  CHECK(j.out.find("\"ok\": true") != std::string::npos);
}

TEST_CASE("unknown flags are usage errors") {
  CHECK(cli({"validate", "--frobnicate", data_path("sample.nfa")}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("order") {
  Run r = cli({"order", data_path("sample.nfa")});
  CHECK(r.code == 0);
  CHECK(r.out == "width 2\nchains 2\n");
  Run exact = cli({"order", data_path("sample.nfa"), "--exact"});
  CHECK(exact.out == "width 2\nchains 2\nexact 2\nmatch true\n");
  Run tight = cli({"order", data_path("sample.nfa"), "--exact", "--max-states", "5"});
  CHECK(tight.code == 1);
  Run chains = cli({"order", data_path("sample.nfa"), "--dump-chains"});
  CHECK(chains.out.find("# chains\n0 ") != std::string::npos);
  Run pairs = cli({"order", data_path("sample.nfa"), "--dump-pairs"});
  CHECK(pairs.out.find("\n3 4\n") == std::string::npos);
  Run lp4 = cli({"order", data_path("lp4.nfa")});
  CHECK(lp4.out.rfind("width 4\n", 0) == 0);
}

TEST_CASE("build and query") {
  const std::string idx = temp_path("sample.idx"), again = temp_path("sampleb.idx");
  Run b = cli({"build", data_path("sample.nfa"), "-o", idx});
  REQUIRE(b.code == 0);
  CHECK(b.out.rfind("t 2\n", 0) == 0);
  REQUIRE(cli({"build", data_path("sample.nfa"), "-o", again}).code == 0);
  CHECK(slurp(idx) == slurp(again));

  CHECK(cli({"query", idx, "--mode", "anywhere", "--count", "x"}).out == "2\n");
  CHECK(cli({"query", idx, "--member", "axy"}).out == "true\n");
  CHECK(cli({"query", idx, "--locate", "--mode", "member", "bx"}).out == "4\n");

  Run batch = cli({"query", idx, "--count", "--locate", "--threads", "3"}, "x\nzz\nxy\nbx\n");
  CHECK(batch.out == "2\t3,4\n0\t\n1\t5\n1\t4\n");

  Run odd = cli({"query", idx, "--count"}, "x\nx?\n");
  CHECK(odd.code == 0);
  CHECK(odd.out == "2\n0\n");
  CHECK(odd.err.find("line 2") != std::string::npos);

  Run j = cli({"query", idx, "--json", "--member", "ax"});
  CHECK(j.out.find("\"member\": false") != std::string::npos);

  std::ofstream(temp_path("junk.idx")) << "not an index";
  CHECK(cli({"query", temp_path("junk.idx"), "x"}).code == 2);
  std::remove(idx.c_str());
  std::remove(again.c_str());
}

TEST_CASE("L_3 membership through the tool") {
  const std::string idx = temp_path("lp3.idx");
  REQUIRE(cli({"build", data_path("lp3.nfa"), "-o", idx}).code == 0);
  CHECK(cli({"query", idx, "--member", "aa", "aaa"}).out == "false\ntrue\n");
  std::remove(idx.c_str());
}

TEST_CASE("normalize and powerset") {
  Run n = cli({"normalize", data_path("split.nfa"), "--names"});
  CHECK(n.code == 0);
  CHECK(n.out.find("1@a") != std::string::npos);
  CHECK(n.out.find("1@b") != std::string::npos);

  const std::string side = temp_path("subsets.txt");
  Run p = cli({"powerset", data_path("primes23.nfa"), "--subsets", side});
  CHECK(p.code == 0);
  CHECK(p.out.find("states 7") != std::string::npos);
  CHECK(slurp(side).rfind("0: 0\n", 0) == 0);
  std::remove(side.c_str());
}

TEST_CASE("gen") {
  CHECK(cli({"gen", "lp", "3"}).out == slurp(data_path("lp3.nfa")));
  Run primes = cli({"gen", "primes", "2", "3"});
  CHECK(primes.code == 0);
  CHECK(cli({"gen", "random", "--seed", "4"}).out == cli({"gen", "random", "--seed", "4"}).out);
  CHECK(cli({"gen", "cycle", "3"}).code == 0);
  CHECK(cli({"gen", "primes", "4"}).code == 1);
}

TEST_CASE("bench") {
  CHECK(cli({"bench", "--patterns", "0"}).out == "seed,states,edges,t,pattern_len,ns_per_char\n");
  Run r = cli({"bench", "--states", "200", "--t", "1,2", "--patterns", "20", "--length", "4",
               "--min-seconds", "0.001"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  CHECK(cli({"bench", "--states", "x"}).code == 2);
}

}
