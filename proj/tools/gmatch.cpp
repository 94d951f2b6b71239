// gmatch command-line driver.
//
// Exit codes: 10 SAT, 20 UNSAT, 4 gave up (deadline), 3 a backend answer
// failed verification, 1 any other error.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gmatch/filter.hpp"
#include "gmatch/generate.hpp"
#include "gmatch/io.hpp"
#include "gmatch/optimal.hpp"
#include "gmatch/oracle.hpp"
#include "gmatch/pipeline.hpp"
#include "gmatch/sat.hpp"
#include "gmatch/translate.hpp"

using namespace gmatch;
namespace fs = std::filesystem;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 4;
constexpr int kExitVerify = 3;
constexpr int kExitError = 1;

int exit_for(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return kExitSat;
    case SolveStatus::Unsat:
    case SolveStatus::TriviallyUnsat: return kExitUnsat;
    case SolveStatus::Unknown: return kExitUnknown;
  }
  return kExitError;
}

std::string csv_header() {
  return "instance,backend,result,wall_ms,decisions,propagations,lemmas,filtered,sat_conflicts,"
         "t_lambda";
}

std::string csv_row(const std::string& name, const std::string& backend, const SolveResult& r,
                    double wall_ms) {
  std::ostringstream os;
  os << name << ',' << backend << ',' << to_string(r.status) << ',' << std::fixed
     << std::setprecision(3) << wall_ms << ',' << r.stats.decisions << ','
     << r.stats.propagations << ',' << r.stats.lemmas << ',' << r.stats.filtered << ','
     << r.stats.sat_conflicts << ',' << std::setprecision(3) << wall_ms / 1000.0 << '('
     << r.stats.lemmas << ')';
  return os.str();
}

Substitution parse_hint(const std::string& text, const Symbols& sym) {
  Substitution theta(sym.vars.size());
  std::istringstream is(text);
  std::string item;
  while (is >> item) {
    auto eq = item.find(":=");
    if (eq == std::string::npos) throw std::runtime_error("hint items look like X:=c");
    auto v = sym.find_var(item.substr(0, eq));
    auto c = sym.find_const(item.substr(eq + 2));
    if (!v || !c) throw std::runtime_error("unknown name in hint item " + item);
    theta.assign(*v, *c);
  }
  return theta;
}

Symbols symbols_of(const Instance& inst) {
  if (auto m = std::get_if<MatchInstance>(&inst)) return m->symbols();
  return std::get<Gcsp>(inst).symbols;
}

Gcsp gcsp_of(const Instance& inst) {
  if (auto m = std::get_if<MatchInstance>(&inst)) return translate(*m).gcsp;
  return std::get<Gcsp>(inst);
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct Common {
  std::string backend = "backtrack";
  int filter = 0;
  std::string external;
  double timeout = 60.0;
  std::string hint;

  PipelineConfig config(const Symbols& sym) const {
    PipelineConfig cfg;
    auto b = backend_from_string(backend);
    if (!b) throw std::runtime_error("unknown backend " + backend);
    cfg.backend = *b;
    if (filter > 0) cfg.filter = filter;
    if (!external.empty()) cfg.external = external;
    cfg.timeout_seconds = timeout;
    cfg.solver.deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
    if (!hint.empty()) cfg.solver.hint = parse_hint(hint, sym);
    return cfg;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--backend,-b", c.backend, "backtrack | refine | sat1 | sat2")
      ->check(CLI::IsMember({"backtrack", "refine", "sat1", "sat2"}));
  app->add_option("--filter", c.filter, "run local consistency with this S first (0 = off)");
  app->add_option("--external", c.external,
                  "SAT solver command for sat1/sat2; {cnf} is replaced by the file");
  app->add_option("--timeout", c.timeout, "seconds per solver run");
  app->add_option("--hint", c.hint, "preferred branches, e.g. \"X:=x0 Y:=x1\"");
}

int cmd_solve(const std::string& file, const Common& c, bool csv) {
  Instance inst = read_instance_file(file);
  auto cfg = c.config(symbols_of(inst));
  auto t0 = std::chrono::steady_clock::now();
  SolveResult r;
  Symbols sym = symbols_of(inst);
  if (auto m = std::get_if<MatchInstance>(&inst))
    r = solve_matching(*m, cfg);
  else
    r = solve_gcsp(std::get<Gcsp>(inst), cfg);
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << to_string(r.status) << '\n';
  if (r.status == SolveStatus::Sat) std::cout << to_string(r.solution, sym) << '\n';
  if (!r.reason.empty() && r.status != SolveStatus::Sat) std::cout << "reason: " << r.reason << '\n';
  if (csv) std::cerr << csv_header() << '\n' << csv_row(file, c.backend, r, ms) << '\n';
  return exit_for(r.status);
}

int cmd_translate(const std::string& file, const std::string& encoding, const std::string& out,
                  bool pre) {
  Instance inst = read_instance_file(file);
  Gcsp g = gcsp_of(inst);
  if (pre) {
    auto p = preprocess(g);
    if (auto t = std::get_if<TriviallyUnsat>(&p)) {
      std::cerr << "trivially unsolvable: " << t->reason << '\n';
      return kExitUnsat;
    }
    g = std::get<Gcsp>(p);
  }
  if (encoding == "gcsp") {
    write_out(out, print_gcsp(g));
  } else {
    Encoding enc = encoding == "v2" ? translate_v2(g) : translate_v1(g);
    write_out(out, emit_dimacs(enc.cnf));
  }
  return 0;
}

int cmd_filter(const std::string& file, int S) {
  Instance inst = read_instance_file(file);
  auto p = preprocess(gcsp_of(inst));
  if (auto t = std::get_if<TriviallyUnsat>(&p)) {
    std::cout << "BOTTOM\nreason: " << t->reason << '\n';
    return kExitUnsat;
  }
  auto f = filter_gcsp(std::get<Gcsp>(p), S);
  std::cout << "% removed " << f.stats.removed << " circles " << f.stats.circles << '\n';
  if (f.bottom) {
    std::cout << "BOTTOM\n";
    return kExitUnsat;
  }
  std::cout << print_gcsp(f.gcsp);
  return 0;
}

int cmd_optimal(const std::string& file, const Common& c, bool show) {
  Instance inst = read_instance_file(file);
  auto* m = std::get_if<MatchInstance>(&inst);
  if (!m) throw std::runtime_error("optimal needs a matching instance");
  auto res = optimal_match(*m, make_gcsp_solver(c.config(m->symbols())));
  auto wtext = [](const WeightSet& w) {
    std::string s = "{";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s + "}";
  };
  for (const auto& st : res.trace) {
    std::cout << "% k=" << st.k << " alpha=" << wtext(st.alpha) << ' '
              << (st.skipped ? "skipped" : st.improved ? "improved " + wtext(st.weight) : "no solution")
              << '\n';
    if (show) {
      std::istringstream is(print_gcsp(st.translation));
      std::string line;
      while (std::getline(is, line))
        if (line.rfind("clause", 0) == 0 || line.rfind("blocking", 0) == 0) std::cout << "%   " << line << '\n';
    }
  }
  if (!res.found) {
    std::cout << "UNSAT\n";
    return kExitUnsat;
  }
  if (!is_matching(*m, res.theta)) throw VerificationError("optimal returned a non-matching");
  std::cout << "SAT\n" << to_string(res.theta, m->symbols()) << "\nweight " << wtext(res.weight) << '\n';
  return kExitSat;
}

int cmd_oracle(const std::string& file) {
  Instance inst = read_instance_file(file);
  if (auto m = std::get_if<MatchInstance>(&inst)) {
    auto all = enumerate_matchings(*m);
    std::cout << all.size() << " matching(s)\n";
    for (const auto& t : all) std::cout << to_string(t, m->symbols()) << '\n';
    if (auto w = minimal_weight(*m)) {
      std::cout << "minimal weight {";
      for (std::size_t i = 0; i < w->size(); ++i) std::cout << (i ? "," : "") << (*w)[i];
      std::cout << "}\n";
    }
    return all.empty() ? kExitUnsat : kExitSat;
  }
  const auto& g = std::get<Gcsp>(inst);
  auto all = enumerate_solutions(g);
  std::cout << all.size() << " solution(s)\n";
  for (const auto& t : all) std::cout << to_string(t, g.symbols) << '\n';
  return all.empty() ? kExitUnsat : kExitSat;
}

struct GenOptions {
  std::string kind = "gcsp";
  std::size_t vars = 6, consts = 4, clauses = 6, members = 8, blockings = 4, n = 2, count = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string dir;
};

std::string generate_one(const GenOptions& o, std::mt19937_64& rng) {
  if (o.kind == "parity") return print_gcsp(parity_chain(o.n));
  if (o.kind == "match") {
    MatchParams p;
    p.max_vars = o.vars;
    p.max_consts = o.consts;
    return print_match_instance(random_match_instance(rng, p));
  }
  GcspParams p;
  p.max_vars = o.vars;
  p.max_consts = o.consts;
  p.max_clauses = o.clauses;
  p.max_members = o.members;
  p.max_blockings = o.blockings;
  return print_gcsp(random_gcsp(rng, p));
}

int cmd_gen(const GenOptions& o) {
  std::mt19937_64 rng(o.seed);
  if (o.dir.empty()) {
    if (o.count > 1) throw std::runtime_error("--count > 1 needs --dir");
    write_out(o.out, generate_one(o, rng));
    return 0;
  }
  fs::create_directories(o.dir);
  for (std::size_t i = 0; i < o.count; ++i) {
    std::ostringstream name;
    name << o.kind << '_' << std::setw(5) << std::setfill('0') << i << ".txt";
    write_out((fs::path(o.dir) / name.str()).string(), generate_one(o, rng));
  }
  return 0;
}

int cmd_bench(const std::string& dir, const std::string& backends, const Common& c, int jobs,
              const std::string& out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::string> names;
  {
    std::istringstream is(backends);
    std::string b;
    while (std::getline(is, b, ','))
      if (!b.empty()) {
        if (!backend_from_string(b)) throw std::runtime_error("unknown backend " + b);
        names.push_back(b);
      }
  }
  struct Job {
    std::size_t file, backend;
  };
  std::vector<Job> work;
  for (std::size_t f = 0; f < files.size(); ++f)
    for (std::size_t b = 0; b < names.size(); ++b) work.push_back({f, b});
  std::vector<std::string> rows(work.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> verify_failed{false};
  auto worker = [&] {
    for (std::size_t j; (j = next++) < work.size();) {
      const auto& w = work[j];
      Common cc = c;
      cc.backend = names[w.backend];
      std::string label = files[w.file].filename().string();
      SolveResult r;
      double ms = 0;
      try {
        Instance inst = read_instance_file(files[w.file].string());
        auto cfg = cc.config(symbols_of(inst));
        auto t0 = std::chrono::steady_clock::now();
        if (auto m = std::get_if<MatchInstance>(&inst))
          r = solve_matching(*m, cfg);
        else
          r = solve_gcsp(std::get<Gcsp>(inst), cfg);
        ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rows[j] = csv_row(label, cc.backend, r, ms);
      } catch (const VerificationError& e) {
        verify_failed = true;
        rows[j] = label + ',' + cc.backend + ",VERIFY_FAILED,0,0,0,0,0,0,";
      } catch (const std::exception& e) {
        rows[j] = label + ',' + cc.backend + ",ERROR,0,0,0,0,0,0,";
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& r : rows) os << r << '\n';
  write_out(out, os.str());
  return verify_failed ? kExitVerify : 0;
}

// Behaves like a conventional SAT solver on a DIMACS file.
int cmd_dimacs(const std::string& file) {
  Cnf cnf = parse_dimacs(read_file(file));
  auto model = dpll_solve(cnf);
  if (!model) {
    std::cout << "s UNSATISFIABLE\n";
    return kExitUnsat;
  }
  std::cout << "s SATISFIABLE\nv";
  for (std::size_t i = 0; i < model->size(); ++i)
    std::cout << ' ' << ((*model)[i] ? "" : "-") << (i + 1);
  std::cout << " 0\n";
  return kExitSat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmatch: matching geometric formulas via GCSP solving"};
  app.require_subcommand(1);

  std::string file;
  Common common;
  bool csv = false;
  auto* solve = app.add_subcommand("solve", "solve a GCSP or matching instance");
  solve->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(solve, common);
  solve->add_flag("--csv", csv, "print a stats row on stderr");

  std::string encoding = "v1", out;
  bool pre = false;
  auto* tr = app.add_subcommand("translate", "print the GCSP or its DIMACS encoding");
  tr->add_option("file", file)->required()->check(CLI::ExistingFile);
  tr->add_option("--encoding,-e", encoding, "gcsp | v1 | v2")->check(CLI::IsMember({"gcsp", "v1", "v2"}));
  tr->add_option("--out,-o", out, "output file (default stdout)");
  tr->add_flag("--preprocess", pre, "preprocess before encoding");

  int S = 2;
  auto* fl = app.add_subcommand("filter", "run local consistency checking");
  fl->add_option("file", file)->required()->check(CLI::ExistingFile);
  fl->add_option("-S,--size", S, "largest circle parameter")->check(CLI::Range(1, 16));

  bool show = false;
  auto* opt = app.add_subcommand("optimal", "find a multiset-minimal matching");
  opt->add_option("file", file)->required()->check(CLI::ExistingFile);
  add_common(opt, common);
  opt->add_flag("--show-translations", show, "print each restricted translation");

  auto* ora = app.add_subcommand("oracle", "enumerate all solutions by brute force");
  ora->add_option("file", file)->required()->check(CLI::ExistingFile);

  std::string dir, backends = "backtrack,refine,sat1,sat2";
  int jobs = 1;
  auto* bench = app.add_subcommand("bench", "run backends over a corpus directory, CSV out");
  bench->add_option("dir", dir)->required()->check(CLI::ExistingDirectory);
  bench->add_option("--backends", backends, "comma-separated list");
  bench->add_option("--filter", common.filter, "local consistency S (0 = off)");
  bench->add_option("--timeout", common.timeout, "seconds per run");
  bench->add_option("--external", common.external, "SAT solver command template");
  bench->add_option("--jobs,-j", jobs, "worker threads");
  bench->add_option("--out,-o", out, "CSV file (default stdout)");

  GenOptions g;
  auto* gen = app.add_subcommand("gen", "generate random instances");
  gen->add_option("--kind", g.kind, "gcsp | match | parity")->check(CLI::IsMember({"gcsp", "match", "parity"}));
  gen->add_option("--vars", g.vars, "maximum variables");
  gen->add_option("--consts", g.consts, "maximum constants");
  gen->add_option("--clauses", g.clauses, "maximum clauses");
  gen->add_option("--members", g.members, "maximum substlets per clause");
  gen->add_option("--blockings", g.blockings, "maximum blockings");
  gen->add_option("--n", g.n, "parity chain length")->check(CLI::Range(2, 1000));
  gen->add_option("--seed", g.seed, "random seed");
  gen->add_option("--count", g.count, "number of instances (with --dir)");
  gen->add_option("--dir", g.dir, "write instances into this directory");
  gen->add_option("--out,-o", g.out, "output file (default stdout)");

  auto* dim = app.add_subcommand("dimacs", "solve a DIMACS file, print s/v lines");
  dim->add_option("file", file)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(file, common, csv);
    if (*tr) return cmd_translate(file, encoding, out, pre);
    if (*fl) return cmd_filter(file, S);
    if (*opt) return cmd_optimal(file, common, show);
    if (*ora) return cmd_oracle(file);
    if (*bench) return cmd_bench(dir, backends, common, jobs, out);
    if (*gen) return cmd_gen(g);
    if (*dim) return cmd_dimacs(file);
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
