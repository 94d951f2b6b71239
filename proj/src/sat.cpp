#include "gmatch/sat.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace gmatch {

std::vector<std::vector<int>> Encoding::part(std::size_t i) const {
  std::size_t begin = parts.at(i);
  std::size_t end = i + 1 < parts.size() ? parts[i + 1] : cnf.clauses.size();
  return {cnf.clauses.begin() + begin, cnf.clauses.begin() + end};
}

namespace {

bool share_variable(const Clause& a, const Clause& b) {
  for (Var v : a.domain())
    if (b.covers(v)) return true;
  return false;
}

void number_substlets(const Gcsp& g, AtomMap& map) {
  map.substlet_atom.resize(g.positive.size());
  for (std::uint32_t i = 0; i < g.positive.size(); ++i)
    for (std::uint32_t j = 0; j < g.positive[i].size(); ++j) {
      map.keys.push_back({AtomKey::Kind::Substlet, i, j});
      map.substlet_atom[i].push_back(static_cast<int>(map.keys.size()));
    }
}

void at_least_one(const Gcsp& g, const AtomMap& map, Cnf& cnf) {
  for (const auto& atoms : map.substlet_atom) cnf.clauses.push_back(atoms);
  (void)g;
}

// Clauses of C_sigma: greedy cover of sigma's variables.
std::optional<std::vector<std::uint32_t>> cover(const Gcsp& g, const Blocking& sigma) {
  std::vector<Var> open = sigma.domain();
  std::vector<std::uint32_t> chosen;
  while (!open.empty()) {
    std::optional<std::uint32_t> best;
    std::size_t best_size = 0, best_new = 0;
    for (std::uint32_t i = 0; i < g.positive.size(); ++i) {
      std::size_t fresh = 0;
      for (Var v : open) fresh += g.positive[i].covers(v);
      if (fresh == 0) continue;
      std::size_t size = g.positive[i].size();
      if (!best || size < best_size || (size == best_size && fresh > best_new)) {
        best = i;
        best_size = size;
        best_new = fresh;
      }
    }
    if (!best) return std::nullopt;
    chosen.push_back(*best);
    std::erase_if(open, [&](Var v) { return g.positive[*best].covers(v); });
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

Encoding translate_v1(const Gcsp& g) {
  Encoding enc;
  enc.version = 1;
  number_substlets(g, enc.map);
  auto& cnf = enc.cnf;
  const auto& atom = enc.map.substlet_atom;

  enc.parts.push_back(0);
  at_least_one(g, enc.map, cnf);
  for (std::size_t i = 0; i < g.positive.size(); ++i)
    for (std::size_t a = 0; a < atom[i].size(); ++a)
      for (std::size_t b = a + 1; b < atom[i].size(); ++b)
        cnf.clauses.push_back({-atom[i][a], -atom[i][b]});

  enc.parts.push_back(cnf.clauses.size());
  for (std::size_t i1 = 0; i1 < g.positive.size(); ++i1)
    for (std::size_t i2 = 0; i2 < g.positive.size(); ++i2) {
      if (i1 == i2 || !share_variable(g.positive[i1], g.positive[i2])) continue;
      for (std::size_t j = 0; j < g.positive[i1].size(); ++j) {
        std::vector<int> cl{-atom[i1][j]};
        for (std::size_t k = 0; k < g.positive[i2].size(); ++k)
          if (!substlets_conflict(g.positive[i1][j], g.positive[i2][k]))
            cl.push_back(atom[i2][k]);
        cnf.clauses.push_back(std::move(cl));
      }
    }

  enc.parts.push_back(cnf.clauses.size());
  for (const auto& sigma : g.negative) {
    auto cs = cover(g, sigma);
    if (!cs) continue;  // some variable occurs in no clause: never implied
    std::vector<int> cl;
    for (std::uint32_t i : *cs)
      for (std::size_t j = 0; j < g.positive[i].size(); ++j)
        if (substlets_conflict(g.positive[i][j], sigma)) cl.push_back(atom[i][j]);
    cnf.clauses.push_back(std::move(cl));
  }
  cnf.num_vars = static_cast<std::uint32_t>(enc.map.keys.size());
  return enc;
}

Encoding translate_v2(const Gcsp& g) {
  Encoding enc;
  enc.version = 2;
  number_substlets(g, enc.map);
  auto& cnf = enc.cnf;
  auto& map = enc.map;

  std::size_t nv = g.num_vars(), nc = g.num_consts();
  map.assign_atom.assign(nv, std::vector<int>(nc, 0));
  std::vector<std::vector<bool>> occurs(nv, std::vector<bool>(nc, false));
  for (const auto& c : g.positive)
    for (const auto& s : c.members())
      for (const auto& a : s.assignments()) occurs[a.var.id][a.value.id] = true;
  for (std::uint32_t v = 0; v < nv; ++v)
    for (std::uint32_t x = 0; x < nc; ++x)
      if (occurs[v][x]) {
        map.keys.push_back({AtomKey::Kind::Assign, v, x});
        map.assign_atom[v][x] = static_cast<int>(map.keys.size());
      }

  enc.parts.push_back(0);
  at_least_one(g, map, cnf);

  enc.parts.push_back(cnf.clauses.size());
  for (std::size_t i = 0; i < g.positive.size(); ++i)
    for (std::size_t j = 0; j < g.positive[i].size(); ++j)
      for (const auto& a : g.positive[i][j].assignments())
        cnf.clauses.push_back({-map.substlet_atom[i][j], map.assign_atom[a.var.id][a.value.id]});

  enc.parts.push_back(cnf.clauses.size());
  for (std::uint32_t v = 0; v < nv; ++v)
    for (std::uint32_t x1 = 0; x1 < nc; ++x1)
      for (std::uint32_t x2 = x1 + 1; x2 < nc; ++x2)
        if (occurs[v][x1] && occurs[v][x2])
          cnf.clauses.push_back({-map.assign_atom[v][x1], -map.assign_atom[v][x2]});

  enc.parts.push_back(cnf.clauses.size());
  for (const auto& sigma : g.negative) {
    std::vector<int> cl;
    bool possible = true;
    for (const auto& a : sigma.assignments()) {
      int atom = a.var.id < nv && a.value.id < nc ? map.assign_atom[a.var.id][a.value.id] : 0;
      if (atom == 0) {
        possible = false;
        break;
      }
      cl.push_back(-atom);
    }
    if (possible) cnf.clauses.push_back(std::move(cl));
  }
  cnf.num_vars = static_cast<std::uint32_t>(map.keys.size());
  return enc;
}

std::string emit_dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars) + " " +
                    std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& cl : cnf.clauses) {
    for (int l : cl) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::size_t expected = 0;
  std::vector<int> current;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      long long vars = -1, clauses = -1;
      ls >> p >> fmt >> vars >> clauses;
      if (fmt != "cnf" || vars < 0 || clauses < 0) throw DimacsParseError("bad header: " + line);
      cnf.num_vars = static_cast<std::uint32_t>(vars);
      expected = static_cast<std::size_t>(clauses);
      header = true;
      continue;
    }
    if (!header) throw DimacsParseError("clause before header");
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::llabs(lit) > cnf.num_vars) throw DimacsParseError("literal out of range");
      current.push_back(static_cast<int>(lit));
    }
    if (!ls.eof()) throw DimacsParseError("bad token in: " + line);
  }
  if (!header) throw DimacsParseError("missing header");
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (cnf.clauses.size() != expected) throw DimacsParseError("clause count mismatch");
  return cnf;
}

Substitution decode_model(const Gcsp& g, const Encoding& enc, const std::vector<bool>& model) {
  if (model.size() < enc.map.keys.size()) throw InconsistentModel("model is not total");
  if (enc.version == 1) {
    std::vector<Substlet> chosen;
    for (std::size_t n = 0; n < enc.map.keys.size(); ++n) {
      const AtomKey& k = enc.map.keys[n];
      if (model[n] && k.kind == AtomKey::Kind::Substlet)
        chosen.push_back(g.positive[k.first][k.second]);
    }
    try {
      Substitution merged = merge(chosen);
      Substitution out(g.num_vars());
      for (const auto& a : merged.sorted()) out.assign(a.var, a.value);
      return out;
    } catch (const ConflictError&) {
      throw InconsistentModel("true substlets conflict");
    }
  }
  Substitution out(g.num_vars());
  for (std::size_t n = 0; n < enc.map.keys.size(); ++n) {
    const AtomKey& k = enc.map.keys[n];
    if (!model[n] || k.kind != AtomKey::Kind::Assign) continue;
    if (out.assigned(Var{k.first})) throw InconsistentModel("two values for one variable");
    out.assign(Var{k.first}, Const{k.second});
  }
  return out;
}

namespace {

class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : cnf_(cnf), val_(cnf.num_vars + 1, 0) {}

  DpllStats stats;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  // Visits total models; stops when f returns false.
  bool search(const std::function<bool(const std::vector<bool>&)>& f) {
    if (deadline && (++ticks_ & 255) == 0 && std::chrono::steady_clock::now() > *deadline)
      throw DeadlineReached();
    std::size_t mark = trail_.size();
    if (!propagate()) {
      ++stats.conflicts;
      undo(mark);
      return true;
    }
    std::uint32_t pick = 0;
    for (std::uint32_t v = 1; v <= cnf_.num_vars; ++v)
      if (val_[v] == 0) {
        pick = v;
        break;
      }
    if (pick == 0) {
      std::vector<bool> model(cnf_.num_vars);
      for (std::uint32_t v = 1; v <= cnf_.num_vars; ++v) model[v - 1] = val_[v] > 0;
      bool go_on = f(model);
      undo(mark);
      return go_on;
    }
    for (int sign : {1, -1}) {
      ++stats.decisions;
      set(static_cast<int>(pick) * sign);
      bool go_on = search(f);
      undo(trail_.size() - 1);
      if (!go_on) {
        undo(mark);
        return false;
      }
    }
    undo(mark);
    return true;
  }

 private:
  int value(int lit) const { return lit > 0 ? val_[lit] : -val_[-lit]; }
  void set(int lit) {
    val_[std::abs(lit)] = lit > 0 ? 1 : -1;
    trail_.push_back(std::abs(lit));
  }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& cl : cnf_.clauses) {
        int open = 0, last = 0;
        bool sat = false;
        for (int l : cl) {
          int v = value(l);
          if (v > 0) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++open;
            last = l;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          set(last);
          changed = true;
        }
      }
    }
    return true;
  }

  const Cnf& cnf_;
  std::vector<std::int8_t> val_;
  std::vector<std::uint32_t> trail_;
  std::uint64_t ticks_ = 0;
};

}  // namespace

std::optional<std::vector<bool>> dpll_solve(
    const Cnf& cnf, DpllStats* stats, std::optional<std::chrono::steady_clock::time_point> deadline) {
  Dpll d(cnf);
  d.deadline = deadline;
  std::optional<std::vector<bool>> found;
  d.search([&](const std::vector<bool>& m) {
    found = m;
    return false;
  });
  if (stats) *stats = d.stats;
  return found;
}

std::size_t dpll_enumerate(const Cnf& cnf, const std::function<bool(const std::vector<bool>&)>& f) {
  Dpll d(cnf);
  std::size_t n = 0;
  d.search([&](const std::vector<bool>& m) {
    ++n;
    return f(m);
  });
  return n;
}

ExternalAnswer parse_solver_output(std::string_view out, std::uint32_t num_vars) {
  ExternalAnswer ans;
  ans.model.assign(num_vars, false);
  std::optional<bool> status;
  std::istringstream in{std::string(out)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      std::string word = line.substr(2);
      while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back()))) word.pop_back();
      if (word == "SATISFIABLE")
        status = true;
      else if (word == "UNSATISFIABLE")
        status = false;
      else
        throw SolverOutputParseError("unexpected status line: " + line);
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        char* end = nullptr;
        long lit = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0') throw SolverOutputParseError("bad literal: " + tok);
        if (lit == 0) continue;
        if (static_cast<std::uint32_t>(std::labs(lit)) > num_vars)
          throw SolverOutputParseError("literal out of range: " + tok);
        if (lit > 0) ans.model[lit - 1] = true;
      }
    }
  }
  if (!status) throw SolverOutputParseError("no status line in solver output");
  ans.sat = *status;
  return ans;
}

ExternalAnswer run_external(const Cnf& cnf, const std::string& command, double timeout_seconds) {
  char path[] = "/tmp/gmatch-XXXXXX.cnf";
  int fd = mkstemps(path, 4);
  if (fd < 0) throw SolverLaunchError(std::string("cannot create temp file: ") + std::strerror(errno));
  std::string text = emit_dimacs(cnf);
  if (write(fd, text.data(), text.size()) != static_cast<ssize_t>(text.size())) {
    close(fd);
    unlink(path);
    throw SolverLaunchError("cannot write temp file");
  }
  close(fd);

  std::vector<std::string> args;
  {
    std::istringstream in(command);
    std::string tok;
    bool placed = false;
    while (in >> tok) {
      auto at = tok.find("{cnf}");
      if (at != std::string::npos) {
        tok.replace(at, 5, path);
        placed = true;
      }
      args.push_back(tok);
    }
    if (!placed) args.push_back(path);
  }
  if (args.empty()) {
    unlink(path);
    throw SolverLaunchError("empty solver command");
  }

  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0) {
    unlink(path);
    throw SolverLaunchError("pipe failed");
  }
  pid_t pid = fork();
  if (pid < 0) {
    unlink(path);
    throw SolverLaunchError("fork failed");
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    int e = errno;
    (void)!write(err_pipe[1], &e, sizeof e);
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);
  int exec_errno = 0;
  ssize_t got = read(err_pipe[0], &exec_errno, sizeof exec_errno);
  close(err_pipe[0]);
  if (got > 0) {
    close(out_pipe[0]);
    waitpid(pid, nullptr, 0);
    unlink(path);
    throw SolverLaunchError("cannot execute '" + args[0] + "': " + std::strerror(exec_errno));
  }

  std::string output;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
  char buf[4096];
  bool timed_out = false;
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{out_pipe[0], POLLIN, 0};
    int r = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0 && errno == EINTR) continue;
    if (r <= 0) continue;
    ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  close(out_pipe[0]);
  if (timed_out) kill(-pid, SIGKILL);
  waitpid(pid, nullptr, 0);
  unlink(path);
  if (timed_out) throw SolverTimeout();
  return parse_solver_output(output, cnf.num_vars);
}

SolveResult solve_sat(const Gcsp& g, const SatConfig& cfg) {
  SolveResult res;
  Encoding enc = cfg.version == 2 ? translate_v2(g) : translate_v1(g);
  std::optional<std::vector<bool>> model;
  if (cfg.external) {
    ExternalAnswer ans;
    try {
      ans = run_external(enc.cnf, *cfg.external, cfg.timeout_seconds);
    } catch (const SolverTimeout&) {
      res.status = SolveStatus::Unknown;
      res.reason = "external solver timed out";
      return res;
    }
    if (ans.sat) model = std::move(ans.model);
  } else {
    DpllStats st;
    try {
      model = dpll_solve(enc.cnf, &st, cfg.deadline);
    } catch (const DeadlineReached&) {
      res.status = SolveStatus::Unknown;
      res.reason = "deadline reached";
      return res;
    }
    res.stats.decisions = st.decisions;
    res.stats.sat_conflicts = st.conflicts;
  }
  if (!model) {
    res.status = SolveStatus::Unsat;
    return res;
  }
  res.status = SolveStatus::Sat;
  res.solution = decode_model(g, enc, *model);
  return res;
}

}  // namespace gmatch
