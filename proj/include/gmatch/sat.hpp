#pragma once

// Propositional encodings of a GCSP, DIMACS text, and the two ways of
// solving them: a small internal DPLL and an external solver process.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmatch/core.hpp"
#include "gmatch/solver.hpp"

namespace gmatch {

struct Cnf {
  std::uint32_t num_vars = 0;
  std::vector<std::vector<int>> clauses;
  friend bool operator==(const Cnf&, const Cnf&) = default;
};

struct AtomKey {
  enum class Kind : std::uint8_t { Substlet, Assign };
  Kind kind = Kind::Substlet;
  std::uint32_t first = 0;   // clause index, or variable id
  std::uint32_t second = 0;  // member index, or constant id
  friend auto operator<=>(const AtomKey&, const AtomKey&) = default;
};

// Atom n (1-based) is keys[n-1].
struct AtomMap {
  std::vector<AtomKey> keys;
  std::vector<std::vector<int>> substlet_atom;  // [clause][member]
  std::vector<std::vector<int>> assign_atom;    // [var][const], 0 if absent
};

struct Encoding {
  int version = 1;
  Cnf cnf;
  AtomMap map;
  // Index of the first clause of each part; parts.size() == number of parts.
  std::vector<std::size_t> parts;

  std::vector<std::vector<int>> part(std::size_t i) const;
};

Encoding translate_v1(const Gcsp& gcsp);
Encoding translate_v2(const Gcsp& gcsp);

std::string emit_dimacs(const Cnf& cnf);

class DimacsParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
Cnf parse_dimacs(std::string_view text);

class InconsistentModel : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// model[i] is the value of atom i+1.
Substitution decode_model(const Gcsp& gcsp, const Encoding& enc, const std::vector<bool>& model);

struct DpllStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
};

std::optional<std::vector<bool>> dpll_solve(
    const Cnf& cnf, DpllStats* stats = nullptr,
    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

// Calls f on every total model until f returns false; returns the count seen.
std::size_t dpll_enumerate(const Cnf& cnf, const std::function<bool(const std::vector<bool>&)>& f);

class SolverLaunchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SolverOutputParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SolverTimeout : public std::runtime_error {
 public:
  SolverTimeout() : std::runtime_error("external solver timed out") {}
};

struct ExternalAnswer {
  bool sat = false;
  std::vector<bool> model;
};

// `command` is split on whitespace; a "{cnf}" token is replaced by the CNF
// path, otherwise the path is appended as the last argument.
ExternalAnswer run_external(const Cnf& cnf, const std::string& command, double timeout_seconds);

// Parses conventional "s ..." / "v ..." solver output.
ExternalAnswer parse_solver_output(std::string_view out, std::uint32_t num_vars);

struct SatConfig {
  int version = 1;
  std::optional<std::string> external;  // command template
  double timeout_seconds = 60.0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

SolveResult solve_sat(const Gcsp& gcsp, const SatConfig& cfg);

}  // namespace gmatch
