#include "gmatch/geometric.hpp"

#include <algorithm>
#include <sstream>

namespace gmatch {

char truth_char(Truth t) {
  switch (t) {
    case Truth::F: return 'f';
    case Truth::E: return 'e';
    case Truth::T: return 't';
  }
  return '?';
}

std::optional<Truth> truth_from_char(char c) {
  switch (c) {
    case 'f': return Truth::F;
    case 'e': return Truth::E;
    case 't': return Truth::T;
    default: return std::nullopt;
  }
}

Interpretation::Interpretation() : preds_{"#"}, by_pred_(1) {}

std::uint32_t Interpretation::intern_pred(const std::string& name) {
  if (auto p = find_pred(name)) return *p;
  preds_.push_back(name);
  by_pred_.emplace_back();
  return static_cast<std::uint32_t>(preds_.size() - 1);
}

std::optional<std::uint32_t> Interpretation::find_pred(const std::string& name) const {
  auto it = std::find(preds_.begin(), preds_.end(), name);
  if (it == preds_.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - preds_.begin());
}

Const Interpretation::intern_const(const std::string& name) {
  if (auto c = find_const(name)) return *c;
  consts_.push_back(name);
  return Const{static_cast<std::uint32_t>(consts_.size() - 1)};
}

std::optional<Const> Interpretation::find_const(const std::string& name) const {
  auto it = std::find(consts_.begin(), consts_.end(), name);
  if (it == consts_.end()) return std::nullopt;
  return Const{static_cast<std::uint32_t>(it - consts_.begin())};
}

std::size_t Interpretation::add(GroundAtom atom) {
  if (atom.pred >= preds_.size()) throw std::invalid_argument("unknown predicate");
  for (Const c : atom.args)
    if (c.id >= consts_.size()) throw std::invalid_argument("unknown constant");
  auto key = std::make_pair(atom.pred, atom.args);
  if (auto it = index_.find(key); it != index_.end()) {
    if (atoms_[it->second].label != atom.label)
      throw std::invalid_argument("two labels for " + to_string(atom));
    return it->second;
  }
  atoms_.push_back(std::move(atom));
  index_.emplace(std::move(key), atoms_.size() - 1);
  by_pred_[atoms_.back().pred].push_back(atoms_.size() - 1);
  return atoms_.size() - 1;
}

std::optional<std::size_t> Interpretation::find(std::uint32_t pred,
                                                std::span<const Const> args) const {
  auto it = index_.find({pred, std::vector<Const>(args.begin(), args.end())});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> Interpretation::atoms_of(std::uint32_t pred) const {
  if (pred >= by_pred_.size()) return {};
  return by_pred_[pred];
}

bool Interpretation::range_restricted() const {
  std::vector<bool> has(consts_.size(), false);
  for (std::size_t i : atoms_of(kDomain))
    if (atoms_[i].label == Truth::T) has[atoms_[i].args[0].id] = true;
  for (const auto& a : atoms_)
    for (Const c : a.args)
      if (!has[c.id]) return false;
  return true;
}

std::string Interpretation::to_string(const GroundAtom& a) const {
  std::ostringstream os;
  os << preds_[a.pred] << '_' << truth_char(a.label) << '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) os << ',';
    if (a.args[i].id < consts_.size())
      os << consts_[a.args[i].id];
    else
      os << "c^";
  }
  os << ')';
  return os.str();
}

Literal Literal::atom(std::uint32_t pred, Truth label, std::vector<Var> args) {
  Literal l;
  l.kind = Kind::Atom;
  l.pred = pred;
  l.label = label;
  l.args = std::move(args);
  return l;
}

Literal Literal::equality(Var a, Var b) {
  if (a == b) throw std::invalid_argument("equality literal needs distinct variables");
  Literal l;
  l.kind = Kind::Equality;
  l.args = {a, b};
  return l;
}

Literal Literal::exists(Var bound, std::uint32_t pred, Truth label, std::vector<Var> args) {
  if (std::find(args.begin(), args.end(), bound) == args.end())
    throw std::invalid_argument("bound variable does not occur in existential atom");
  Literal l;
  l.kind = Kind::Exists;
  l.pred = pred;
  l.label = label;
  l.args = std::move(args);
  l.bound = bound;
  return l;
}

std::vector<Var> Literal::free_vars() const {
  std::vector<Var> out;
  for (Var v : args)
    if (kind != Kind::Exists || v != bound) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Var> Formula::premise_vars() const {
  std::vector<Var> out;
  for (const auto& a : premises) {
    auto f = a.free_vars();
    out.insert(out.end(), f.begin(), f.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Formula::range_restricted() const {
  auto pv = premise_vars();
  for (const auto& b : conclusions)
    for (Var v : b.free_vars())
      if (!std::binary_search(pv.begin(), pv.end(), v)) return false;
  return true;
}

const WeightSet& MatchInstance::weight_of(std::size_t atom) const {
  static const WeightSet kEmpty;
  return atom < weights.size() ? weights[atom] : kEmpty;
}

Symbols MatchInstance::symbols() const { return Symbols{var_names, interp.const_names()}; }

namespace {

Const value(const Substitution& theta, Var v) {
  auto c = theta.get(v);
  if (!c) throw UnboundVariable(v);
  return *c;
}

std::vector<Const> ground_args(const Literal& lit, const Substitution& theta) {
  std::vector<Const> out;
  out.reserve(lit.args.size());
  for (Var v : lit.args) out.push_back(value(theta, v));
  return out;
}

std::vector<Const> ground_with(const Literal& lit, const Substitution& theta, Const y) {
  std::vector<Const> out;
  out.reserve(lit.args.size());
  for (Var v : lit.args) out.push_back(v == lit.bound ? y : value(theta, v));
  return out;
}

}  // namespace

std::optional<std::size_t> conflict_atom(const Interpretation& I, const Literal& lit,
                                         const Substitution& theta) {
  if (lit.kind != Literal::Kind::Atom) {
    if (lit.kind == Literal::Kind::Equality) {
      value(theta, lit.args[0]);
      value(theta, lit.args[1]);
    }
    return std::nullopt;
  }
  auto idx = I.find(lit.pred, ground_args(lit, theta));
  if (idx && I.atom(*idx).label != lit.label) return idx;
  return std::nullopt;
}

bool literal_conflicts(const Interpretation& I, const Literal& lit, const Substitution& theta) {
  switch (lit.kind) {
    case Literal::Kind::Atom: return conflict_atom(I, lit, theta).has_value();
    case Literal::Kind::Equality:
      return value(theta, lit.args[0]) != value(theta, lit.args[1]);
    case Literal::Kind::Exists: return false;
  }
  return false;
}

bool literal_true(const Interpretation& I, const Literal& lit, const Substitution& theta) {
  switch (lit.kind) {
    case Literal::Kind::Atom: {
      auto idx = I.find(lit.pred, ground_args(lit, theta));
      return idx && I.atom(*idx).label == lit.label;
    }
    case Literal::Kind::Equality:
      return value(theta, lit.args[0]) == value(theta, lit.args[1]);
    case Literal::Kind::Exists:
      for (std::uint32_t c = 0; c < I.num_consts(); ++c) {
        auto idx = I.find(lit.pred, ground_with(lit, theta, Const{c}));
        if (idx && I.atom(*idx).label == lit.label) return true;
      }
      for (Var v : lit.free_vars()) value(theta, v);
      return false;
  }
  return false;
}

std::vector<GroundAtom> extension_set(const Interpretation& I, const Literal& lit,
                                      const Substitution& theta) {
  if (literal_true(I, lit, theta))
    throw PreconditionViolated("extension set of a true literal");
  switch (lit.kind) {
    case Literal::Kind::Atom: return {GroundAtom{lit.pred, lit.label, ground_args(lit, theta)}};
    case Literal::Kind::Equality: return {};
    case Literal::Kind::Exists: {
      std::vector<GroundAtom> out;
      for (std::uint32_t c = 0; c <= I.num_consts(); ++c)
        out.push_back(GroundAtom{lit.pred, lit.label, ground_with(lit, theta, Const{c})});
      return out;
    }
  }
  return {};
}

bool is_matching(const MatchInstance& inst, const Substitution& theta) {
  for (const auto& a : inst.formula.premises)
    if (!literal_conflicts(inst.interp, a, theta)) return false;
  for (const auto& b : inst.formula.conclusions)
    if (literal_true(inst.interp, b, theta)) return false;
  return true;
}

std::string to_string(const Literal& lit, const MatchInstance& inst) {
  auto vn = [&](Var v) {
    return v.id < inst.var_names.size() ? inst.var_names[v.id] : "V" + std::to_string(v.id);
  };
  std::ostringstream os;
  switch (lit.kind) {
    case Literal::Kind::Equality: os << vn(lit.args[0]) << " = " << vn(lit.args[1]); break;
    case Literal::Kind::Exists: os << "exists " << vn(lit.bound) << ' '; [[fallthrough]];
    case Literal::Kind::Atom:
      if (lit.pred == Interpretation::kDomain) {
        os << '#' << truth_char(lit.label);
      } else {
        os << inst.interp.pred_name(lit.pred) << ' ' << truth_char(lit.label);
      }
      for (Var v : lit.args) os << ' ' << vn(v);
      break;
  }
  return os.str();
}

}  // namespace gmatch
