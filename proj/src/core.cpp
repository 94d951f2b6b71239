#include "gmatch/core.hpp"

#include <algorithm>
#include <sstream>

namespace gmatch {

ConflictError::ConflictError(std::size_t a, std::size_t b)
    : std::runtime_error("substlets " + std::to_string(a) + " and " + std::to_string(b) +
                         " are in conflict"),
      first(a),
      second(b) {}

Substlet::Substlet(std::span<const Var> vars, std::span<const Const> values) {
  if (vars.size() != values.size()) throw std::invalid_argument("substlet: length mismatch");
  items_.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) items_.push_back({vars[i], values[i]});
  std::sort(items_.begin(), items_.end());
  for (std::size_t i = 1; i < items_.size(); ++i)
    if (items_[i - 1].var == items_[i].var)
      throw std::invalid_argument("substlet: repeated variable");
}

Substlet::Substlet(std::vector<Assignment> assignments) : items_(std::move(assignments)) {
  std::sort(items_.begin(), items_.end());
  for (std::size_t i = 1; i < items_.size(); ++i)
    if (items_[i - 1].var == items_[i].var)
      throw std::invalid_argument("substlet: repeated variable");
}

std::vector<Var> Substlet::domain() const {
  std::vector<Var> out;
  out.reserve(items_.size());
  for (const auto& a : items_) out.push_back(a.var);
  return out;
}

std::optional<Const> Substlet::value_of(Var v) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), v,
                             [](const Assignment& a, Var x) { return a.var < x; });
  if (it == items_.end() || it->var != v) return std::nullopt;
  return it->value;
}

bool substlets_conflict(const Substlet& a, const Substlet& b) {
  auto x = a.assignments();
  auto y = b.assignments();
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].var < y[j].var) {
      ++i;
    } else if (y[j].var < x[i].var) {
      ++j;
    } else {
      if (x[i].value != y[j].value) return true;
      ++i;
      ++j;
    }
  }
  return false;
}

Clause::Clause(std::vector<Var> domain, std::vector<Substlet> members)
    : domain_(std::move(domain)), members_(std::move(members)) {
  std::sort(domain_.begin(), domain_.end());
  if (std::adjacent_find(domain_.begin(), domain_.end()) != domain_.end())
    throw std::invalid_argument("clause: repeated domain variable");
  for (const auto& m : members_)
    if (m.domain() != domain_) throw std::invalid_argument("clause: member domain differs");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Clause::covers(Var v) const { return position_of(v) != npos; }

std::size_t Clause::position_of(Var v) const {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), v);
  if (it == domain_.end() || *it != v) return npos;
  return static_cast<std::size_t>(it - domain_.begin());
}

std::string Symbols::var_name(Var v) const {
  if (v.id < vars.size()) return vars[v.id];
  return "V" + std::to_string(v.id);
}

std::string Symbols::const_name(Const c) const {
  if (c.id < consts.size()) return consts[c.id];
  return "c" + std::to_string(c.id);
}

Var Symbols::intern_var(const std::string& name) {
  if (auto v = find_var(name)) return *v;
  vars.push_back(name);
  return Var{static_cast<std::uint32_t>(vars.size() - 1)};
}

Const Symbols::intern_const(const std::string& name) {
  if (auto c = find_const(name)) return *c;
  consts.push_back(name);
  return Const{static_cast<std::uint32_t>(consts.size() - 1)};
}

std::optional<Var> Symbols::find_var(const std::string& name) const {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) return std::nullopt;
  return Var{static_cast<std::uint32_t>(it - vars.begin())};
}

std::optional<Const> Symbols::find_const(const std::string& name) const {
  auto it = std::find(consts.begin(), consts.end(), name);
  if (it == consts.end()) return std::nullopt;
  return Const{static_cast<std::uint32_t>(it - consts.begin())};
}

namespace {

template <class F>
void for_each_substlet(const Gcsp& g, F&& f) {
  for (const auto& c : g.positive)
    for (const auto& s : c.members()) f(s);
  for (const auto& b : g.negative) f(b);
}

}  // namespace

std::size_t Gcsp::num_vars() const {
  std::size_t n = symbols.vars.size();
  for (const auto& c : positive)
    for (Var v : c.domain()) n = std::max<std::size_t>(n, v.id + 1);
  for (const auto& b : negative)
    for (const auto& a : b.assignments()) n = std::max<std::size_t>(n, a.var.id + 1);
  return n;
}

std::size_t Gcsp::num_consts() const {
  std::size_t n = symbols.consts.size();
  for_each_substlet(*this, [&](const Substlet& s) {
    for (const auto& a : s.assignments()) n = std::max<std::size_t>(n, a.value.id + 1);
  });
  return n;
}

bool Gcsp::range_restricted() const {
  for (const auto& b : negative)
    for (const auto& a : b.assignments()) {
      bool found = std::any_of(positive.begin(), positive.end(),
                               [&](const Clause& c) { return c.covers(a.var); });
      if (!found) return false;
    }
  return true;
}

std::vector<Var> Gcsp::clause_vars() const {
  std::vector<Var> out;
  for (const auto& c : positive) out.insert(out.end(), c.domain().begin(), c.domain().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Const> Gcsp::clause_consts() const {
  std::vector<Const> out;
  for (const auto& c : positive)
    for (const auto& s : c.members())
      for (const auto& a : s.assignments()) out.push_back(a.value);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Substitution::assign(Var v, Const c) {
  if (v.id >= value_.size()) {
    value_.resize(v.id + 1, kUnset);
    pos_.resize(v.id + 1, 0);
  }
  if (value_[v.id] != kUnset) throw std::logic_error("variable assigned twice");
  value_[v.id] = c.id;
  pos_[v.id] = static_cast<std::uint32_t>(stack_.size());
  stack_.push_back({v, c});
}

void Substitution::truncate(std::size_t n) {
  while (stack_.size() > n) {
    value_[stack_.back().var.id] = kUnset;
    stack_.pop_back();
  }
}

std::vector<Assignment> Substitution::sorted() const {
  std::vector<Assignment> out(stack_.begin(), stack_.end());
  std::sort(out.begin(), out.end());
  return out;
}

Substitution merge(std::span<const Substlet> substlets) {
  for (std::size_t i = 0; i < substlets.size(); ++i)
    for (std::size_t j = i + 1; j < substlets.size(); ++j)
      if (substlets_conflict(substlets[i], substlets[j])) throw ConflictError(i, j);
  Substitution out;
  for (const auto& s : substlets)
    for (const auto& a : s.assignments())
      if (!out.assigned(a.var)) out.assign(a.var, a.value);
  return out;
}

bool makes_true(const Substitution& theta, const Substlet& s) {
  for (const auto& a : s.assignments()) {
    auto v = theta.get(a.var);
    if (!v || *v != a.value) return false;
  }
  return true;
}

bool conflicts(const Substitution& theta, const Substlet& s) {
  for (const auto& a : s.assignments()) {
    auto v = theta.get(a.var);
    if (v && *v != a.value) return true;
  }
  return false;
}

ClauseStatus clause_status(const Substitution& theta, const Clause& c) {
  bool all_conflict = true;
  for (const auto& s : c.members()) {
    if (makes_true(theta, s)) return ClauseStatus::True;
    if (!conflicts(theta, s)) all_conflict = false;
  }
  return all_conflict ? ClauseStatus::False : ClauseStatus::Undecided;
}

bool is_solution(const Gcsp& gcsp, const Substitution& theta) {
  for (const auto& c : gcsp.positive)
    if (clause_status(theta, c) != ClauseStatus::True) return false;
  for (const auto& b : gcsp.negative)
    if (makes_true(theta, b)) return false;
  return true;
}

bool implies_with(const Substitution& theta, const Substlet& s, const Blocking& b) {
  for (const auto& a : b.assignments()) {
    if (auto v = s.value_of(a.var)) {
      if (*v != a.value) return false;
    } else {
      auto t = theta.get(a.var);
      if (!t || *t != a.value) return false;
    }
  }
  return true;
}

std::string to_string(const Substlet& s, const Symbols& sym) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i)
    os << (i ? "," : "") << sym.var_name(s.assignments()[i].var);
  os << ")/(";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << (i ? "," : "") << sym.const_name(s.assignments()[i].value);
  os << ')';
  return os.str();
}

std::string to_string(const Substitution& theta, const Symbols& sym) {
  std::ostringstream os;
  bool first = true;
  for (const auto& a : theta.sorted()) {
    os << (first ? "" : " ") << sym.var_name(a.var) << ":=" << sym.const_name(a.value);
    first = false;
  }
  return os.str();
}

}  // namespace gmatch
