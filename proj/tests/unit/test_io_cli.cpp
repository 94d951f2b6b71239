#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "../common.hpp"
#include "gmatch/generate.hpp"

using namespace gmatch;
using namespace gmatch::testing;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(GMATCH_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::size_t error_line(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line;
  } catch (const RangeRestrictionError& e) {
    return e.line;
  }
  return 0;
}

}  // namespace

TEST_CASE("parse the worked matching instance") {
  auto m = load_match("matching_phi1.txt");
  CHECK(m.interp.atoms().size() == 8);
  CHECK(m.interp.num_consts() == 3);
  CHECK(m.formula.premises.size() == 2);
  CHECK(m.formula.conclusions.size() == 1);
  CHECK(m.num_vars() == 3);
}

TEST_CASE("parse a GCSP") {
  auto g = load_gcsp("sat_example.txt");
  CHECK(g.positive.size() == 2);
  CHECK(g.negative.size() == 2);
  CHECK(g.num_vars() == 3);
  auto e = gcsp_text("vars X\nclause (X):\n");
  REQUIRE(e.positive.size() == 1);
  CHECK(e.positive[0].size() == 0);
}

TEST_CASE("range restriction violations") {
  CHECK_THROWS_AS(parse_instance("vars X Y\nconsts 0\nclause (X): (0)\nblocking (Y): (0)\n"),
                  RangeRestrictionError);
  CHECK_THROWS_AS(parse_instance("interp:\nP t a\nformula:\nP t X |\n"), RangeRestrictionError);
  CHECK_THROWS_AS(parse_instance("interp:\n# a\nformula:\n| P t X\n"), RangeRestrictionError);
  CHECK_THROWS_AS(parse_instance("interp:\n# a\nformula:\n#t X | X = Y\n"), RangeRestrictionError);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("vars X\n% note\nclause (X): (0\n") == 3);
  CHECK(error_line("vars X\nclause (X): (0,1)\n") == 2);
  CHECK(error_line("vars X\nconsts 0\nclause (X): (0)\ninterp:\n") == 4);
  CHECK(error_line("interp:\n# a\nformula:\n#t X, X = X |\n") == 4);
  CHECK(error_line("interp:\n# a\nformula:\n#t X\n") >= 4);
  CHECK(error_line("bogus line\n") == 1);
}

TEST_CASE("property: GCSP print and parse round trip") {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 500; ++i) {
    auto g = random_gcsp(rng);
    auto text = print_gcsp(g);
    auto back = std::get<Gcsp>(parse_instance(text));
    CHECK(same_instance(g, back));
    CHECK(print_gcsp(back) == text);
  }
}

TEST_CASE("property: matching instance print and parse round trip") {
  std::mt19937_64 rng(82);
  for (int i = 0; i < 500; ++i) {
    auto m = random_match_instance(rng);
    auto text = print_match_instance(m);
    auto back = std::get<MatchInstance>(parse_instance(text));
    CHECK(same_instance(m, back));
    CHECK(print_match_instance(back) == text);
  }
  auto m1 = load_match("matching_phi1.txt");
  CHECK(same_instance(m1, std::get<MatchInstance>(parse_instance(print_match_instance(m1)))));
}

TEST_CASE("cli solve and exit codes") {
  auto r = run_cli("solve " + data_path("matching_phi2.txt"));
  CHECK(r.code == 10);
  CHECK(r.out.find("X:=x0 Y:=x1 Z:=x2") != std::string::npos);
  for (const char* b : {"backtrack", "refine", "sat1", "sat2"}) {
    auto s = run_cli(std::string("solve -b ") + b + " " + data_path("sat_example.txt"));
    CHECK(s.code == 10);
    CHECK(s.out.find("X:=1 Y:=0 Z:=0") != std::string::npos);
  }
  auto tmp = std::filesystem::temp_directory_path() / ("gmatch_cli_" + std::to_string(getpid()));
  std::filesystem::create_directories(tmp);
  run_cli("gen --kind parity --n 2 -o " + (tmp / "parity.txt").string());
  CHECK(run_cli("solve " + (tmp / "parity.txt").string()).code == 20);
  CHECK(run_cli("solve --filter 1 " + (tmp / "parity.txt").string()).code == 20);
  CHECK(run_cli("solve /nonexistent/file").code == 1);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("cli translate matches the fixtures") {
  auto v1 = run_cli("translate -e v1 " + data_path("sat_example.txt"));
  CHECK(v1.code == 0);
  CHECK(v1.out == read_file(data_path("sat_example_v1.cnf")));
  auto v2 = run_cli("translate -e v2 " + data_path("sat_example.txt"));
  CHECK(v2.out == read_file(data_path("sat_example_v2.cnf")));
  auto g = run_cli("translate -e gcsp " + data_path("matching_phi1.txt"));
  CHECK(g.code == 0);
  CHECK(std::holds_alternative<Gcsp>(parse_instance(g.out)));
}

TEST_CASE("cli gen is deterministic per seed") {
  auto a = run_cli("gen --vars 4 --consts 3 --clauses 4 --seed 7");
  auto b = run_cli("gen --vars 4 --consts 3 --clauses 4 --seed 7");
  auto c = run_cli("gen --vars 4 --consts 3 --clauses 4 --seed 8");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(std::holds_alternative<Gcsp>(parse_instance(a.out)));
}

TEST_CASE("cli bench writes a CSV") {
  auto tmp = std::filesystem::temp_directory_path() / ("gmatch_bench_" + std::to_string(getpid()));
  std::filesystem::create_directories(tmp);
  CHECK(run_cli("gen --count 3 --seed 5 --dir " + (tmp / "corpus").string()).code == 0);
  auto r = run_cli("bench " + (tmp / "corpus").string() + " --backends backtrack,sat2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("instance,backend,result,wall_ms,decisions,propagations,lemmas,filtered,"
                    "sat_conflicts,t_lambda\n",
                    0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("cli oracle and filter") {
  auto o = run_cli("oracle " + data_path("matching_phi1.txt"));
  CHECK(o.code == 10);
  CHECK(o.out.rfind("5 matching(s)", 0) == 0);
  CHECK(o.out.find("X:=x1 Y:=x1 Z:=x2") != std::string::npos);
  auto f = run_cli("filter -S 2 " + data_path("sat_example.txt"));
  CHECK(f.code == 0);
  CHECK(f.out.rfind("% removed", 0) == 0);
}
