#include "gmatch/lemma.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace gmatch {

namespace {

std::vector<Const> set_union(std::span<const Const> a, std::span<const Const> b) {
  std::vector<Const> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

void FlatLemma::add(Var v, std::span<const Const> values) {
  if (values.empty()) return;
  std::vector<Const> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, Var x) { return e.var < x; });
  if (it != entries_.end() && it->var == v) {
    it->values = set_union(it->values, sorted);
  } else {
    entries_.insert(it, Entry{v, std::move(sorted)});
  }
}

std::span<const Const> FlatLemma::get(Var v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, Var x) { return e.var < x; });
  if (it == entries_.end() || it->var != v) return {};
  return it->values;
}

bool FlatLemma::contains(Var v, Const c) const {
  auto vals = get(v);
  return std::binary_search(vals.begin(), vals.end(), c);
}

FlatLemma lemma_union(const FlatLemma& a, const FlatLemma& b) {
  FlatLemma out = a;
  for (const auto& e : b.entries()) out.add(e.var, e.values);
  return out;
}

FlatLemma v_resolvent(Var v, std::span<const FlatLemma> lemmas) {
  if (lemmas.empty()) throw std::invalid_argument("v_resolvent of no lemmas");
  FlatLemma out;
  std::vector<Const> pivot(lemmas[0].get(v).begin(), lemmas[0].get(v).end());
  for (const auto& l : lemmas) {
    std::vector<Const> next;
    auto vals = l.get(v);
    std::set_intersection(pivot.begin(), pivot.end(), vals.begin(), vals.end(),
                          std::back_inserter(next));
    pivot = std::move(next);
    for (const auto& e : l.entries())
      if (e.var != v) out.add(e.var, e.values);
  }
  out.add(v, pivot);
  return out;
}

FlatLemma projection(const Clause& c, const std::function<Assignment(const Substlet&)>& choose) {
  FlatLemma out;
  for (const auto& s : c.members()) {
    Assignment a = choose(s);
    out.add(a.var, a.value);
  }
  return out;
}

bool is_projection(const FlatLemma& lemma, const Clause& c) {
  for (const auto& s : c.members()) {
    bool hit = false;
    for (const auto& a : s.assignments())
      if (lemma.contains(a.var, a.value)) hit = true;
    if (!hit) return false;
  }
  return true;
}

namespace {

std::vector<Const> other_values(const Clause& c, Var v, Const blocked) {
  std::vector<Const> out;
  std::size_t pos = c.position_of(v);
  for (std::size_t m = 0; m < c.size(); ++m) {
    Const x = c.value_at(m, pos);
    if (x != blocked) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

FlatLemma sigma_resolvent(const Blocking& sigma, std::span<const Clause* const> clauses) {
  if (clauses.size() != sigma.size())
    throw std::invalid_argument("sigma_resolvent: one clause per blocking variable");
  FlatLemma out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const auto& a = sigma.assignments()[i];
    if (!clauses[i]->covers(a.var))
      throw std::invalid_argument("sigma_resolvent: clause does not cover variable");
    out.add(a.var, other_values(*clauses[i], a.var, a.value));
  }
  return out;
}

FlatLemma sigma_resolvent(const Blocking& sigma, std::span<const Clause> clauses) {
  FlatLemma out;
  for (const auto& a : sigma.assignments()) {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<Const> best_vals;
    for (const auto& c : clauses) {
      if (!c.covers(a.var)) continue;
      auto vals = other_values(c, a.var, a.value);
      if (vals.size() < best) {
        best = vals.size();
        best_vals = std::move(vals);
      }
    }
    if (best == std::numeric_limits<std::size_t>::max())
      throw std::invalid_argument("sigma_resolvent: blocking is not range restricted");
    out.add(a.var, best_vals);
  }
  return out;
}

bool is_true(const FlatLemma& l, const Substitution& theta) {
  for (const auto& e : l.entries()) {
    auto x = theta.get(e.var);
    if (x && std::binary_search(e.values.begin(), e.values.end(), *x)) return true;
  }
  return false;
}

bool is_false(const FlatLemma& l, const Substitution& theta) {
  for (const auto& e : l.entries()) {
    auto x = theta.get(e.var);
    if (!x || std::binary_search(e.values.begin(), e.values.end(), *x)) return false;
  }
  return true;
}

bool is_false_with(const FlatLemma& l, const Substitution& theta, const Substlet& s) {
  for (const auto& e : l.entries()) {
    auto x = s.value_of(e.var);
    if (!x) x = theta.get(e.var);
    if (!x || std::binary_search(e.values.begin(), e.values.end(), *x)) return false;
  }
  return true;
}

bool is_true(const FlatLemma& l, const SubstitutionStack& theta) {
  for (const auto& e : l.entries()) {
    if (!theta.has_entry(e.var)) continue;
    bool all_in = true;
    for (std::uint32_t c : theta.current(e.var))
      if (!std::binary_search(e.values.begin(), e.values.end(), Const{c})) {
        all_in = false;
        break;
      }
    if (all_in) return true;
  }
  return false;
}

bool is_false(const FlatLemma& l, const SubstitutionStack& theta) {
  for (const auto& e : l.entries()) {
    if (!theta.has_entry(e.var)) return false;
    for (Const c : e.values)
      if (theta.contains(e.var, c)) return false;
  }
  return true;
}

std::string to_string(const FlatLemma& l, const Symbols& sym) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& e : l.entries()) {
    os << (first ? " " : ", ") << sym.var_name(e.var) << "/{";
    for (std::size_t i = 0; i < e.values.size(); ++i)
      os << (i ? "," : "") << sym.const_name(e.values[i]);
    os << '}';
    first = false;
  }
  os << (first ? "}" : " }");
  return os.str();
}

}  // namespace gmatch
