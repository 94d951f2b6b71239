#include "gmatch/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gmatch {

ParseError::ParseError(std::size_t l, const std::string& message)
    : std::runtime_error("line " + std::to_string(l) + ": " + message), line(l) {}

RangeRestrictionError::RangeRestrictionError(std::size_t l, const std::string& message)
    : std::runtime_error("line " + std::to_string(l) + ": range restriction: " + message),
      line(l) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
         c == '-';
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

void check_name(std::size_t line, const std::string& n) {
  if (n.empty()) throw ParseError(line, "empty name");
  for (char c : n)
    if (!name_char(c)) throw ParseError(line, "bad character in name '" + n + "'");
}

std::optional<Truth> label_of(const std::string& w) {
  if (w.size() != 1) return std::nullopt;
  return truth_from_char(w[0]);
}

struct Line {
  std::size_t no;
  std::string text;
};

// Comma-separated names inside one pair of parentheses, starting at pos.
std::vector<std::string> paren_list(std::size_t line, std::string_view s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos >= s.size() || s[pos] != '(') throw ParseError(line, "expected '('");
  auto close = s.find(')', pos);
  if (close == std::string_view::npos) throw ParseError(line, "missing ')'");
  std::string_view inner = trim(s.substr(pos + 1, close - pos - 1));
  pos = close + 1;
  std::vector<std::string> out;
  if (inner.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = inner.find(',', start);
    std::string n(trim(inner.substr(start, comma == std::string_view::npos ? inner.npos
                                                                           : comma - start)));
    check_name(line, n);
    out.push_back(n);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find('\n', start);
      std::string_view raw =
          text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
      ++no;
      auto pct = raw.find('%');
      if (pct != std::string_view::npos) raw = raw.substr(0, pct);
      raw = trim(raw);
      if (!raw.empty()) lines_.push_back({no, std::string(raw)});
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }

  Instance run() {
    bool matching = false, gcsp = false;
    for (const auto& l : lines_) {
      auto w = words(l.text);
      if (w[0] == "interp:" || w[0] == "formula:" || w[0] == "weights:" || w[0] == "preds")
        matching = true;
      if (w[0] == "clause" || w[0] == "blocking") gcsp = true;
      if (matching && gcsp) throw ParseError(l.no, "file mixes GCSP and matching sections");
    }
    if (matching) return parse_matching();
    return parse_gcsp();
  }

 private:
  Gcsp parse_gcsp() {
    Gcsp g;
    std::vector<std::size_t> blocking_lines;
    for (const auto& l : lines_) {
      auto w = words(l.text);
      if (w[0] == "vars") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          check_name(l.no, w[i]);
          g.symbols.intern_var(w[i]);
        }
        continue;
      }
      if (w[0] == "consts") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          check_name(l.no, w[i]);
          g.symbols.intern_const(w[i]);
        }
        continue;
      }
      bool is_clause = w[0] == "clause";
      if (!is_clause && w[0] != "blocking") throw ParseError(l.no, "unknown keyword '" + w[0] + "'");
      std::string_view s = l.text;
      std::size_t pos = w[0].size();
      auto dom_names = paren_list(l.no, s, pos);
      std::vector<Var> dom;
      for (const auto& n : dom_names) dom.push_back(g.symbols.intern_var(n));
      {
        std::set<Var> uniq(dom.begin(), dom.end());
        if (uniq.size() != dom.size()) throw ParseError(l.no, "repeated variable");
      }
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos >= s.size() || s[pos] != ':') throw ParseError(l.no, "expected ':'");
      ++pos;
      std::vector<Substlet> members;
      while (true) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) break;
        auto vals = paren_list(l.no, s, pos);
        if (vals.size() != dom.size()) throw ParseError(l.no, "tuple length does not match domain");
        std::vector<Const> cs;
        for (const auto& n : vals) cs.push_back(g.symbols.intern_const(n));
        members.emplace_back(dom, cs);
      }
      if (is_clause) {
        g.positive.emplace_back(dom, std::move(members));
      } else {
        if (members.size() != 1) throw ParseError(l.no, "a blocking has exactly one tuple");
        g.negative.push_back(std::move(members[0]));
        blocking_lines.push_back(l.no);
      }
    }
    std::set<Var> covered;
    for (const auto& c : g.positive) covered.insert(c.domain().begin(), c.domain().end());
    for (std::size_t j = 0; j < g.negative.size(); ++j)
      for (const auto& a : g.negative[j].assignments())
        if (!covered.count(a.var))
          throw RangeRestrictionError(blocking_lines[j], "blocking variable " +
                                                             g.symbols.var_name(a.var) +
                                                             " occurs in no clause");
    return g;
  }

  // Reads "P t a b" or "# a" / "#t a" into predicate, label and names.
  void atom_words(std::size_t line, const std::vector<std::string>& w, std::size_t from,
                  std::size_t to, std::string& pred, Truth& label, std::vector<std::string>& args,
                  bool default_domain_label) {
    if (from >= to) throw ParseError(line, "missing atom");
    std::size_t i = from;
    if (w[i][0] == '#') {
      pred = "#";
      if (w[i].size() == 1) {
        if (!default_domain_label) throw ParseError(line, "missing label on '#'");
        label = Truth::T;
      } else {
        auto lb = label_of(w[i].substr(1));
        if (!lb) throw ParseError(line, "bad label in '" + w[i] + "'");
        label = *lb;
      }
      ++i;
    } else {
      pred = w[i];
      check_name(line, pred);
      if (i + 1 >= to) throw ParseError(line, "missing label");
      auto lb = label_of(w[i + 1]);
      if (!lb) throw ParseError(line, "bad label '" + w[i + 1] + "'");
      label = *lb;
      i += 2;
    }
    args.clear();
    for (; i < to; ++i) {
      check_name(line, w[i]);
      args.push_back(w[i]);
    }
    if (pred == "#" && args.size() != 1) throw ParseError(line, "'#' takes one argument");
  }

  MatchInstance parse_matching() {
    MatchInstance inst;
    auto& I = inst.interp;
    enum class Section { None, Interp, Formula, Weights } sec = Section::None;
    std::vector<std::size_t> atom_line;
    std::string formula_text;
    std::size_t formula_line = 0;
    std::vector<std::pair<std::size_t, std::string>> weight_lines;
    std::vector<std::pair<std::size_t, std::string>> interp_lines;

    auto var_id = [&](const std::string& n) {
      auto it = std::find(inst.var_names.begin(), inst.var_names.end(), n);
      if (it != inst.var_names.end()) return Var{static_cast<std::uint32_t>(it - inst.var_names.begin())};
      inst.var_names.push_back(n);
      return Var{static_cast<std::uint32_t>(inst.var_names.size() - 1)};
    };

    for (const auto& l : lines_) {
      auto w = words(l.text);
      if (l.text == "interp:") { sec = Section::Interp; continue; }
      if (l.text == "formula:") {
        sec = Section::Formula;
        formula_line = l.no;
        continue;
      }
      if (l.text == "weights:") { sec = Section::Weights; continue; }
      if (sec == Section::None) {
        if (w[0] == "preds") {
          for (std::size_t i = 1; i < w.size(); ++i) {
            check_name(l.no, w[i]);
            I.intern_pred(w[i]);
          }
        } else if (w[0] == "consts") {
          for (std::size_t i = 1; i < w.size(); ++i) {
            check_name(l.no, w[i]);
            I.intern_const(w[i]);
          }
        } else if (w[0] == "vars") {
          for (std::size_t i = 1; i < w.size(); ++i) {
            check_name(l.no, w[i]);
            var_id(w[i]);
          }
        } else {
          throw ParseError(l.no, "expected a declaration or section header");
        }
        continue;
      }
      if (sec == Section::Interp) interp_lines.emplace_back(l.no, l.text);
      if (sec == Section::Formula) {
        if (formula_text.empty()) formula_line = l.no;
        formula_text += ' ' + l.text;
      }
      if (sec == Section::Weights) weight_lines.emplace_back(l.no, l.text);
    }

    std::map<Const, std::size_t> first_use;
    for (const auto& [no, text] : interp_lines) {
      auto w = words(text);
      std::string pred;
      Truth label;
      std::vector<std::string> args;
      atom_words(no, w, 0, w.size(), pred, label, args, true);
      GroundAtom a;
      a.pred = I.intern_pred(pred);
      a.label = label;
      for (const auto& n : args) {
        Const c = I.intern_const(n);
        first_use.emplace(c, no);
        a.args.push_back(c);
      }
      std::size_t before = I.atoms().size();
      try {
        I.add(a);
      } catch (const std::invalid_argument& e) {
        throw ParseError(no, e.what());
      }
      if (I.atoms().size() > before) atom_line.push_back(no);
    }
    for (const auto& [c, no] : first_use) {
      std::vector<Const> arg{c};
      auto idx = I.find(Interpretation::kDomain, arg);
      if (!idx || I.atom(*idx).label != Truth::T)
        throw RangeRestrictionError(no, "constant " + I.const_name(c) + " has no '# " +
                                            I.const_name(c) + "' atom");
    }

    if (formula_line == 0) throw ParseError(lines_.empty() ? 1 : lines_.back().no, "missing formula");
    auto bar = formula_text.find('|');
    if (bar == std::string::npos) throw ParseError(formula_line, "formula needs '|'");
    if (formula_text.find('|', bar + 1) != std::string::npos)
      throw ParseError(formula_line, "formula has more than one '|'");
    auto parse_side = [&](std::string_view side, std::vector<Literal>& out) {
      side = trim(side);
      if (side.empty()) return;
      std::size_t start = 0;
      while (true) {
        auto comma = side.find(',', start);
        auto piece = trim(side.substr(start, comma == side.npos ? side.npos : comma - start));
        out.push_back(parse_literal(formula_line, piece, I, var_id));
        if (comma == side.npos) break;
        start = comma + 1;
      }
    };
    parse_side(std::string_view(formula_text).substr(0, bar), inst.formula.premises);
    parse_side(std::string_view(formula_text).substr(bar + 1), inst.formula.conclusions);
    if (!inst.formula.range_restricted())
      throw RangeRestrictionError(formula_line, "a conclusion variable is not in the premises");

    inst.weights.assign(I.atoms().size(), {});
    for (const auto& [no, text] : weight_lines) {
      auto colon = text.find(':');
      if (colon == std::string::npos) throw ParseError(no, "weight line needs ':'");
      auto w = words(std::string_view(text).substr(0, colon));
      std::string pred;
      Truth label;
      std::vector<std::string> args;
      atom_words(no, w, 0, w.size(), pred, label, args, true);
      auto p = I.find_pred(pred);
      std::vector<Const> cs;
      for (const auto& n : args) {
        auto c = I.find_const(n);
        if (!c) throw ParseError(no, "unknown constant '" + n + "'");
        cs.push_back(*c);
      }
      std::optional<std::size_t> idx;
      if (p) idx = I.find(*p, cs);
      if (!idx || I.atom(*idx).label != label) throw ParseError(no, "weight for an atom not in interp");
      std::string_view set = trim(std::string_view(text).substr(colon + 1));
      if (set.size() < 2 || set.front() != '{' || set.back() != '}')
        throw ParseError(no, "expected {n1,n2,...}");
      set = trim(set.substr(1, set.size() - 2));
      WeightSet ws;
      std::size_t start = 0;
      while (!set.empty()) {
        auto comma = set.find(',', start);
        std::string n(trim(set.substr(start, comma == set.npos ? set.npos : comma - start)));
        if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          throw ParseError(no, "bad weight '" + n + "'");
        ws.push_back(static_cast<std::uint32_t>(std::stoul(n)));
        if (comma == set.npos) break;
        start = comma + 1;
      }
      std::sort(ws.begin(), ws.end());
      ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
      inst.weights[*idx] = std::move(ws);
    }
    return inst;
  }

  template <class VarId>
  Literal parse_literal(std::size_t line, std::string_view piece, Interpretation& I, VarId& var_id) {
    auto w = words(piece);
    if (w.empty()) throw ParseError(line, "empty literal");
    if (w.size() == 3 && w[1] == "=") {
      check_name(line, w[0]);
      check_name(line, w[2]);
      if (w[0] == w[2]) throw ParseError(line, "equality needs two distinct variables");
      return Literal::equality(var_id(w[0]), var_id(w[2]));
    }
    std::size_t from = 0;
    std::optional<std::string> bound;
    if (w[0] == "exists") {
      if (w.size() < 2) throw ParseError(line, "exists needs a variable");
      check_name(line, w[1]);
      bound = w[1];
      from = 2;
    }
    std::string pred;
    Truth label;
    std::vector<std::string> args;
    atom_words(line, w, from, w.size(), pred, label, args, false);
    std::uint32_t p = I.intern_pred(pred);
    std::vector<Var> vs;
    for (const auto& n : args) vs.push_back(var_id(n));
    if (!bound) return Literal::atom(p, label, std::move(vs));
    if (std::find(args.begin(), args.end(), *bound) == args.end())
      throw ParseError(line, "bound variable does not occur in the atom");
    return Literal::exists(var_id(*bound), p, label, std::move(vs));
  }

  std::vector<Line> lines_;
};

}  // namespace

Instance parse_instance(std::string_view text) { return Parser(text).run(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Instance read_instance_file(const std::string& path) { return parse_instance(read_file(path)); }

std::string print_gcsp(const Gcsp& g) {
  std::ostringstream os;
  std::size_t nv = g.num_vars(), nc = g.num_consts();
  if (nv) {
    os << "vars";
    for (std::uint32_t v = 0; v < nv; ++v) os << ' ' << g.symbols.var_name(Var{v});
    os << '\n';
  }
  if (nc) {
    os << "consts";
    for (std::uint32_t c = 0; c < nc; ++c) os << ' ' << g.symbols.const_name(Const{c});
    os << '\n';
  }
  auto tuple = [&](auto&& items, auto&& name) {
    os << '(';
    bool first = true;
    for (const auto& x : items) {
      os << (first ? "" : ",") << name(x);
      first = false;
    }
    os << ')';
  };
  auto vname = [&](Var v) { return g.symbols.var_name(v); };
  for (const auto& c : g.positive) {
    os << "clause ";
    tuple(c.domain(), vname);
    os << ':';
    for (const auto& s : c.members()) {
      os << ' ';
      tuple(s.assignments(), [&](const Assignment& a) { return g.symbols.const_name(a.value); });
    }
    os << '\n';
  }
  for (const auto& b : g.negative) {
    os << "blocking ";
    tuple(b.assignments(), [&](const Assignment& a) { return g.symbols.var_name(a.var); });
    os << ": ";
    tuple(b.assignments(), [&](const Assignment& a) { return g.symbols.const_name(a.value); });
    os << '\n';
  }
  return os.str();
}

std::string print_match_instance(const MatchInstance& inst) {
  const auto& I = inst.interp;
  std::ostringstream os;
  if (I.num_preds() > 1) {
    os << "preds";
    for (std::uint32_t p = 1; p < I.num_preds(); ++p) os << ' ' << I.pred_name(p);
    os << '\n';
  }
  if (I.num_consts()) {
    os << "consts";
    for (const auto& c : I.const_names()) os << ' ' << c;
    os << '\n';
  }
  if (!inst.var_names.empty()) {
    os << "vars";
    for (const auto& v : inst.var_names) os << ' ' << v;
    os << '\n';
  }
  auto atom_text = [&](const GroundAtom& a) {
    std::ostringstream as;
    if (a.pred == Interpretation::kDomain)
      as << '#' << truth_char(a.label);
    else
      as << I.pred_name(a.pred) << ' ' << truth_char(a.label);
    for (Const c : a.args) as << ' ' << I.const_name(c);
    return as.str();
  };
  os << "interp:\n";
  for (const auto& a : I.atoms()) os << atom_text(a) << '\n';
  os << "formula:\n";
  auto side = [&](const std::vector<Literal>& lits) {
    for (std::size_t i = 0; i < lits.size(); ++i) os << (i ? ", " : "") << to_string(lits[i], inst);
  };
  side(inst.formula.premises);
  os << (inst.formula.premises.empty() ? "|" : " |");
  if (!inst.formula.conclusions.empty()) os << ' ';
  side(inst.formula.conclusions);
  os << '\n';
  bool any = false;
  for (std::size_t i = 0; i < I.atoms().size(); ++i) {
    const auto& w = inst.weight_of(i);
    if (w.empty()) continue;
    if (!any) os << "weights:\n";
    any = true;
    os << atom_text(I.atom(i)) << " : {";
    for (std::size_t j = 0; j < w.size(); ++j) os << (j ? "," : "") << w[j];
    os << "}\n";
  }
  return os.str();
}

std::string print_instance(const Instance& inst) {
  if (auto m = std::get_if<MatchInstance>(&inst)) return print_match_instance(*m);
  return print_gcsp(std::get<Gcsp>(inst));
}

bool same_instance(const MatchInstance& a, const MatchInstance& b) {
  const auto& A = a.interp;
  const auto& B = b.interp;
  if (A.num_preds() != B.num_preds() || A.const_names() != B.const_names()) return false;
  for (std::uint32_t p = 0; p < A.num_preds(); ++p)
    if (A.pred_name(p) != B.pred_name(p)) return false;
  if (!std::equal(A.atoms().begin(), A.atoms().end(), B.atoms().begin(), B.atoms().end()))
    return false;
  if (!(a.formula == b.formula) || a.var_names != b.var_names) return false;
  for (std::size_t i = 0; i < A.atoms().size(); ++i)
    if (a.weight_of(i) != b.weight_of(i)) return false;
  return true;
}

bool same_instance(const Gcsp& a, const Gcsp& b) {
  return a.positive == b.positive && a.negative == b.negative &&
         a.symbols.vars == b.symbols.vars && a.symbols.consts == b.symbols.consts;
}

}  // namespace gmatch
