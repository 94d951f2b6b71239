#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "../common.hpp"
#include "gmatch/generate.hpp"
#include "gmatch/oracle.hpp"
#include "gmatch/sat.hpp"
#include "gmatch/translate.hpp"

using namespace gmatch;
using namespace gmatch::testing;

namespace {

using Rows = std::vector<std::vector<int>>;

std::vector<bool> model_of(std::initializer_list<int> lits) {
  std::vector<bool> m(lits.size(), false);
  for (int l : lits) m[std::abs(l) - 1] = l > 0;
  return m;
}

bool satisfies(const Rows& rows, const std::vector<bool>& m) {
  for (const auto& r : rows) {
    bool ok = false;
    for (int l : r) ok = ok || m[std::abs(l) - 1] == (l > 0);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("first encoding of the three-solution GCSP") {
  auto g = load_gcsp("sat_example.txt");
  auto e = translate_v1(g);
  REQUIRE(e.parts.size() == 3);
  CHECK(e.part(0) == Rows{{1, 2}, {3, 4, 5}, {-1, -2}, {-3, -4}, {-3, -5}, {-4, -5}});
  CHECK(e.part(1) == Rows{{-1, 5}, {-2, 3, 4}, {-3, 2}, {-4, 2}, {-5, 1}});
  // The blocking rule gives {2,4} and {1,3,5}; the swapped rows "1 4" and
  // "2 3 5" would exclude the only model.
  CHECK(e.part(2) == Rows{{2, 4}, {1, 3, 5}});
  auto expected = model_of({-1, 2, 3, -4, -5});
  CHECK_FALSE(satisfies(Rows{{1, 4}, {2, 3, 5}}, expected));

  std::vector<std::vector<bool>> models;
  dpll_enumerate(e.cnf, [&](const std::vector<bool>& m) {
    models.push_back(m);
    return true;
  });
  REQUIRE(models.size() == 1);
  CHECK(models[0] == expected);
  CHECK(decode_model(g, e, expected) == subst(g.symbols, "X:=1 Y:=0 Z:=0"));
  CHECK(emit_dimacs(e.cnf) == read_file(data_path("sat_example_v1.cnf")));
}

TEST_CASE("second encoding of the three-solution GCSP") {
  auto g = load_gcsp("sat_example.txt");
  auto e = translate_v2(g);
  REQUIRE(e.parts.size() == 4);
  CHECK(e.part(0) == Rows{{1, 2}, {3, 4, 5}});
  CHECK(e.part(1) == Rows{{-1, 6}, {-1, 9}, {-2, 7}, {-2, 8}, {-3, 8}, {-3, 10}, {-4, 8},
                          {-4, 11}, {-5, 9}, {-5, 10}});
  CHECK(e.part(2) == Rows{{-6, -7}, {-8, -9}, {-10, -11}});
  CHECK(e.part(3) == Rows{{-6, -10}, {-7, -11}});
  std::vector<std::vector<bool>> models;
  dpll_enumerate(e.cnf, [&](const std::vector<bool>& m) {
    models.push_back(m);
    return true;
  });
  auto expected = model_of({-1, 2, 3, -4, -5, -6, 7, 8, -9, 10, -11});
  REQUIRE(models.size() == 1);
  CHECK(models[0] == expected);
  CHECK(decode_model(g, e, expected) == subst(g.symbols, "X:=1 Y:=0 Z:=0"));
  CHECK(emit_dimacs(e.cnf) == read_file(data_path("sat_example_v2.cnf")));
}

TEST_CASE("small encodings") {
  auto unit = gcsp_text("clause (X): (0)\n");
  auto e = translate_v1(unit);
  CHECK(e.cnf.num_vars == 1);
  CHECK(e.cnf.clauses == Rows{{1}});
  auto b = gcsp_text("clause (X): (0) (1)\nblocking (X): (2)\n");
  auto e2 = translate_v2(b);
  CHECK(e2.part(3).empty());
  CHECK(decode_model(Gcsp{}, translate_v1(Gcsp{}), {}).empty());
}

TEST_CASE("dimacs text") {
  CHECK(emit_dimacs(Cnf{}) == "p cnf 0 0\n");
  Cnf one{2, {{1, -2}}};
  CHECK(emit_dimacs(one) == "p cnf 2 1\n1 -2 0\n");
  CHECK(parse_dimacs("c hi\np cnf 2 1\n1 -2\n0\n") == one);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n3 0\n"), DimacsParseError);
}

TEST_CASE("solver output protocol") {
  auto a = parse_solver_output("c x\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3);
  CHECK(a.sat);
  CHECK(a.model == std::vector<bool>{true, false, true});
  CHECK_FALSE(parse_solver_output("s UNSATISFIABLE\n", 3).sat);
  CHECK_THROWS_AS(parse_solver_output("garbage\n", 3), SolverOutputParseError);
  CHECK_THROWS_AS(parse_solver_output("s SATISFIABLE\nv 1 x 0\n", 3), SolverOutputParseError);
}

TEST_CASE("external driver with the bundled dimacs solver") {
  auto g = load_gcsp("sat_example.txt");
  SatConfig cfg;
  cfg.external = std::string(GMATCH_CLI_PATH) + " dimacs {cnf}";
  auto r = solve_sat(g, cfg);
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.solution == subst(g.symbols, "X:=1 Y:=0 Z:=0"));
  cfg.version = 2;
  CHECK(solve_sat(parity_chain(2), cfg).status == SolveStatus::Unsat);
  cfg.external = "/nonexistent/solver";
  CHECK_THROWS_AS(solve_sat(g, cfg), SolverLaunchError);
  cfg.external = "/bin/echo nonsense";
  CHECK_THROWS_AS(solve_sat(g, cfg), SolverOutputParseError);
}

TEST_CASE("external driver timeout") {
  std::string script =
      (std::filesystem::temp_directory_path() / ("gmatch-slow-" + std::to_string(::getpid()) + ".sh")).string();
  {
    std::ofstream out(script);
    out << "#!/bin/sh\nsleep 5\n";
  }
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  SatConfig cfg;
  cfg.external = script;
  cfg.timeout_seconds = 0.2;
  auto t0 = std::chrono::steady_clock::now();
  auto r = solve_sat(load_gcsp("sat_example.txt"), cfg);
  CHECK(r.status == SolveStatus::Unknown);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(3));
  std::filesystem::remove(script);
}

TEST_CASE("parity chain is unsatisfiable under both encodings") {
  for (int v : {1, 2}) {
    SatConfig cfg;
    cfg.version = v;
    CHECK(solve_sat(parity_chain(2), cfg).status == SolveStatus::Unsat);
  }
}

TEST_CASE("property: encodings are equisatisfiable, models sound and complete") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 400; ++i) {
    Gcsp g = random_gcsp(rng);
    auto sols = enumerate_solutions(g);
    for (int v : {1, 2}) {
      Encoding e = v == 1 ? translate_v1(g) : translate_v2(g);
      CHECK(emit_dimacs(e.cnf) == emit_dimacs((v == 1 ? translate_v1(g) : translate_v2(g)).cnf));
      std::vector<Substitution> decoded;
      dpll_enumerate(e.cnf, [&](const std::vector<bool>& m) {
        auto theta = decode_model(g, e, m);
        CHECK(is_solution(g, theta));
        decoded.push_back(theta);
        return decoded.size() < 5000;
      });
      CHECK(decoded.empty() == sols.empty());
      if (decoded.size() < 5000)
        for (const auto& s : sols) {
          bool found = false;
          for (const auto& d : decoded)
            if (d == s) found = true;
          CHECK(found);
        }
    }
  }
}
