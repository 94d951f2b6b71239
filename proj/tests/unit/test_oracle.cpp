#include <doctest.h>

#include "../common.hpp"
#include "gmatch/generate.hpp"
#include "gmatch/oracle.hpp"
#include "gmatch/translate.hpp"

using namespace gmatch;
using namespace gmatch::testing;

TEST_CASE("oracle solution counts") {
  auto m1 = load_match("matching_phi1.txt");
  CHECK(enumerate_solutions(translate(m1).gcsp).size() == 5);
  auto m2 = load_match("matching_phi2.txt");
  CHECK(enumerate_solutions(std::get<Gcsp>(preprocess(translate(m2).gcsp))).size() == 1);
  CHECK(enumerate_solutions(parity_chain(2)).empty());
}

TEST_CASE("oracle matchings") {
  auto m1 = load_match("matching_phi1.txt");
  auto all = enumerate_matchings(m1);
  auto sym = m1.symbols();
  std::vector<Substitution> want;
  for (const char* t : {"X:=x0 Y:=x0 Z:=x0", "X:=x0 Y:=x0 Z:=x1", "X:=x0 Y:=x1 Z:=x1",
                        "X:=x1 Y:=x1 Z:=x1", "X:=x1 Y:=x1 Z:=x2"})
    want.push_back(subst(sym, t));
  CHECK(all == want);
  auto m3 = load_match("matching_phi3.txt");
  auto three = enumerate_matchings(m3);
  REQUIRE(three.size() == 1);
  CHECK(three[0] == subst(m3.symbols(), "X:=x0 Y:=x1"));
}

TEST_CASE("lemma validity") {
  FlatLemma anything;
  anything.add(Var{0}, Const{0});
  CHECK(check_lemma_valid(parity_chain(2), anything));
  CHECK_FALSE(check_lemma_valid(load_gcsp("sat_example.txt"), FlatLemma{}));
}

TEST_CASE("minimal weight") {
  CHECK(minimal_weight(load_match("matching_phi1.txt")) == WeightSet{1});
  CHECK(minimal_weight(load_match("matching_phi2.txt")) == WeightSet{});
  auto none = std::get<MatchInstance>(parse_instance("interp:\nP t a\n# a\nformula:\nP t X |\n"));
  CHECK_FALSE(minimal_weight(none).has_value());
}

TEST_CASE("budget") {
  Budget tiny{10};
  CHECK_THROWS_AS(enumerate_solutions(parity_chain(3), tiny), BudgetExceeded);
}
