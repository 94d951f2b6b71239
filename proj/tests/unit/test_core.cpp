#include <doctest.h>

#include <random>

#include "../common.hpp"
#include "gmatch/generate.hpp"
#include "gmatch/translate.hpp"

using namespace gmatch;
using namespace gmatch::testing;

namespace {

Symbols xyzw() {
  Symbols s;
  for (const char* v : {"X", "Y", "Z", "W"}) s.intern_var(v);
  for (const char* c : {"0", "1", "2", "3", "9"}) s.intern_const(c);
  return s;
}

}  // namespace

TEST_CASE("substlets_conflict") {
  auto s = xyzw();
  auto a = sl(s, {{"X", "1"}, {"Y", "2"}});
  CHECK_FALSE(substlets_conflict(a, sl(s, {{"Y", "2"}, {"Z", "1"}})));
  CHECK(substlets_conflict(a, sl(s, {{"Y", "1"}, {"Z", "2"}})));
  CHECK_FALSE(substlets_conflict(a, sl(s, {{"Z", "9"}, {"W", "9"}})));
}

TEST_CASE("merge") {
  auto s = xyzw();
  std::vector<Substlet> ok{sl(s, {{"X", "0"}, {"Y", "1"}}), sl(s, {{"Y", "1"}, {"Z", "2"}})};
  CHECK(merge(ok) == subst(s, "X:=0 Y:=1 Z:=2"));
  CHECK(merge(std::vector<Substlet>{}).empty());
  std::vector<Substlet> bad{sl(s, {{"X", "0"}}), sl(s, {{"X", "1"}})};
  CHECK_THROWS_AS(merge(bad), ConflictError);
}

TEST_CASE("makes_true and conflicts") {
  auto s = xyzw();
  auto x01 = sl(s, {{"X", "0"}, {"Y", "1"}});
  CHECK(makes_true(subst(s, "X:=0 Y:=1"), x01));
  CHECK_FALSE(makes_true(subst(s, "X:=0"), x01));
  CHECK_FALSE(makes_true(subst(s, "X:=1"), x01));
  CHECK(conflicts(subst(s, "X:=1"), x01));
  CHECK_FALSE(conflicts(subst(s, "Y:=1"), x01));
  CHECK_FALSE(conflicts(Substitution(4), x01));
}

TEST_CASE("clause_status") {
  auto s = xyzw();
  Clause c({Var{0}, Var{1}}, {sl(s, {{"X", "0"}, {"Y", "1"}}), sl(s, {{"X", "1"}, {"Y", "0"}})});
  CHECK(clause_status(subst(s, "X:=0 Y:=1"), c) == ClauseStatus::True);
  CHECK(clause_status(subst(s, "X:=2"), c) == ClauseStatus::False);
  CHECK(clause_status(Substitution(4), c) == ClauseStatus::Undecided);
}

TEST_CASE("is_solution on the phi1 translation") {
  auto inst = load_match("matching_phi1.txt");
  auto g = translate(inst).gcsp;
  auto sym = inst.symbols();
  CHECK(is_solution(g, subst(sym, "X:=x0 Y:=x0 Z:=x0")));
  CHECK_FALSE(is_solution(g, subst(sym, "X:=x0 Y:=x1 Z:=x2")));
  CHECK(is_solution(Gcsp{}, Substitution()));
}

TEST_CASE("clause members are deduplicated and domain checked") {
  auto s = xyzw();
  Clause c({Var{0}}, {sl(s, {{"X", "1"}}), sl(s, {{"X", "1"}}), sl(s, {{"X", "0"}})});
  CHECK(c.size() == 2);
  CHECK_THROWS_AS(Clause({Var{0}}, {sl(s, {{"Y", "1"}})}), std::invalid_argument);
  CHECK_THROWS_AS(Substlet(std::vector<Assignment>{{Var{0}, Const{0}}, {Var{0}, Const{1}}}),
                  std::invalid_argument);
}

TEST_CASE("property: merge succeeds iff no pair conflicts, and makes every member true") {
  std::mt19937_64 rng(11);
  auto s = xyzw();
  for (int round = 0; round < 2000; ++round) {
    std::vector<Substlet> set;
    int n = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<Assignment> a;
      for (std::uint32_t v = 0; v < 4; ++v)
        if (rng() % 2) a.push_back({Var{v}, Const{static_cast<std::uint32_t>(rng() % 3)}});
      set.emplace_back(a);
    }
    bool pairwise_ok = true;
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j)
        if (substlets_conflict(set[i], set[j])) pairwise_ok = false;
    if (pairwise_ok) {
      auto theta = merge(set);
      for (const auto& x : set) CHECK(makes_true(theta, x));
    } else {
      CHECK_THROWS_AS(merge(set), ConflictError);
    }
  }
}

TEST_CASE("property: clause_status is monotone under extension") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 300; ++round) {
    Gcsp g = random_gcsp(rng);
    auto vars = g.clause_vars();
    auto consts = g.clause_consts();
    if (consts.empty()) continue;
    std::shuffle(vars.begin(), vars.end(), rng);
    Substitution theta(g.num_vars());
    std::vector<ClauseStatus> prev;
    for (const auto& c : g.positive) prev.push_back(clause_status(theta, c));
    for (Var v : vars) {
      theta.assign(v, consts[rng() % consts.size()]);
      for (std::size_t i = 0; i < g.positive.size(); ++i) {
        auto now = clause_status(theta, g.positive[i]);
        if (prev[i] != ClauseStatus::Undecided) CHECK(now == prev[i]);
        prev[i] = now;
      }
    }
  }
}

TEST_CASE("property: is_solution matches a definition-level recheck") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 300; ++round) {
    Gcsp g = random_gcsp(rng);
    auto consts = g.clause_consts();
    if (consts.empty()) continue;
    Substitution theta(g.num_vars());
    for (Var v : g.clause_vars()) theta.assign(v, consts[rng() % consts.size()]);
    bool expect = true;
    for (const auto& c : g.positive) {
      bool some = false;
      for (const auto& m : c.members()) {
        bool all = true;
        for (const auto& a : m.assignments()) all = all && theta.get(a.var) == a.value;
        some = some || all;
      }
      expect = expect && some;
    }
    for (const auto& b : g.negative) {
      bool all = true;
      for (const auto& a : b.assignments()) all = all && theta.get(a.var) == a.value;
      expect = expect && !all;
    }
    CHECK(is_solution(g, theta) == expect);
  }
}
