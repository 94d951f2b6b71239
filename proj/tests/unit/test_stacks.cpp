#include <doctest.h>

#include <algorithm>
#include <random>

#include "gmatch/stacks.hpp"

using namespace gmatch;

namespace {

Clause four_members() {
  std::vector<Substlet> m;
  for (std::uint32_t i = 0; i < 4; ++i) m.emplace_back(std::vector<Assignment>{{Var{0}, Const{i}}});
  return Clause({Var{0}}, m);
}

std::vector<std::uint32_t> sorted(std::span<const std::uint32_t> s) {
  std::vector<std::uint32_t> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("refinement stack: refine, currency, restore") {
  std::vector<Clause> cs{four_members()};
  RefinementStack R(cs);
  R.add_initial(0);
  auto m0 = R.mark();
  std::vector<std::uint32_t> keep2{1, 3};
  R.refine(0, keep2);
  CHECK(R.size() == 2);
  CHECK(sorted(R.active(0)) == keep2);
  std::vector<std::uint32_t> keep1{3};
  R.refine(0, keep1);
  CHECK_FALSE(R.is_current(0));
  CHECK_FALSE(R.is_current(1));
  CHECK(R.is_current(2));
  R.restore(m0);
  CHECK(R.size() == 1);
  CHECK(sorted(R.active(0)) == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(R.is_current(0));
}

TEST_CASE("refinement stack: strictness and empty refinements rejected") {
  std::vector<Clause> cs{four_members()};
  RefinementStack R(cs);
  R.add_initial(0);
  std::vector<std::uint32_t> all{0, 1, 2, 3};
  CHECK_THROWS_AS(R.refine(0, all), NotStrictSubset);
  std::vector<std::uint32_t> none;
  CHECK_THROWS(R.refine(0, none));
  std::vector<std::uint32_t> k{0, 1};
  R.refine(0, k);
  std::vector<std::uint32_t> outside{2};
  CHECK_THROWS(R.refine(0, outside));
}

TEST_CASE("substitution stack: strict refinement, empty allowed") {
  SubstitutionStack S(2, 3);
  std::vector<std::uint32_t> all{0, 1, 2};
  S.add_initial(Var{0}, all);
  CHECK_THROWS_AS(S.domain_refine(Var{0}, all), NotStrictSubset);
  std::vector<std::uint32_t> none;
  S.domain_refine(Var{0}, none);
  CHECK(S.domain_size(Var{0}) == 0);
}

TEST_CASE("marks: immediate restore, nested LIFO, stale marks") {
  std::vector<Clause> cs{four_members(), four_members()};
  RefinementStack R(cs);
  R.add_initial(0);
  R.add_initial(1);
  auto a = R.mark();
  R.restore(a);
  CHECK(R.size() == 2);
  std::vector<std::uint32_t> k{0, 1, 2};
  R.refine(0, k);
  auto b = R.mark();
  std::vector<std::uint32_t> k2{2};
  R.refine(1, k2);
  R.refine(0, k2);
  R.restore(b);
  CHECK(sorted(R.active(0)) == k);
  CHECK(sorted(R.active(1)) == std::vector<std::uint32_t>{0, 1, 2, 3});
  R.restore(a);
  CHECK(sorted(R.active(0)) == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK_THROWS_AS(R.restore(b), InvalidMark);
}

TEST_CASE("next_current scan") {
  std::vector<Clause> cs{four_members(), four_members(), four_members()};
  RefinementStack R(cs);
  for (std::uint32_t i = 0; i < 3; ++i) R.add_initial(i);
  std::vector<std::size_t> seen;
  for (auto k = R.next_current(0); k; k = R.next_current(*k + 1)) {
    seen.push_back(*k);
    if (*k == 1) {
      std::vector<std::uint32_t> keep{0};
      R.refine(0, keep);
    }
  }
  CHECK(seen == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK_FALSE(R.next_current(10).has_value());
}

namespace {

struct Snapshot {
  std::size_t size;
  std::vector<std::vector<std::uint32_t>> active;
  std::vector<bool> current;
  bool operator==(const Snapshot&) const = default;
};

template <class Stack, class Keys>
Snapshot snap(const Stack& s, Keys keys, std::size_t n) {
  Snapshot out{s.size(), {}, {}};
  for (std::uint32_t k = 0; k < n; ++k) out.active.push_back(sorted(keys(k)));
  for (std::size_t e = 0; e < s.size(); ++e) out.current.push_back(s.is_current(e));
  return out;
}

}  // namespace

TEST_CASE("property: random operation sequences round-trip through marks") {
  std::mt19937_64 rng(31);
  std::size_t ops = 0;
  for (int round = 0; round < 40; ++round) {
    std::size_t nv = 1 + rng() % 6, nc = 2 + rng() % 6;
    SubstitutionStack S(nv, nc);
    std::vector<std::uint32_t> all(nc);
    for (std::uint32_t i = 0; i < nc; ++i) all[i] = i;
    for (std::uint32_t v = 0; v < nv; ++v) S.add_initial(Var{v}, all);
    auto keys = [&](std::uint32_t v) { return S.current(Var{v}); };
    std::vector<std::pair<StackMark, Snapshot>> marks;
    for (int step = 0; step < 600; ++step, ++ops) {
      int op = rng() % 4;
      if (op == 0) {
        marks.push_back({S.mark(), snap(S, keys, nv)});
      } else if (op == 1 && !marks.empty()) {
        std::size_t i = rng() % marks.size();
        S.restore(marks[i].first);
        CHECK(snap(S, keys, nv) == marks[i].second);
        marks.resize(i + 1);
      } else {
        Var v{static_cast<std::uint32_t>(rng() % nv)};
        auto cur = sorted(S.current(v));
        if (cur.empty()) continue;
        std::vector<std::uint32_t> kept;
        for (auto x : cur)
          if (rng() % 2) kept.push_back(x);
        if (kept.size() == cur.size()) kept.pop_back();
        S.domain_refine(v, kept);
      }
      std::vector<int> currents(nv, 0);
      for (std::size_t e = 0; e < S.size(); ++e)
        if (S.is_current(e)) ++currents[S.var_of(e).id];
      for (int c : currents) CHECK(c == 1);
    }
  }
  CHECK(ops >= 20000);
}
