#pragma once

// Undoable refinement histories. Both stacks keep, per key, a permutation of
// the key's universe whose first n elements are active; refining swaps the
// dropped elements behind the active prefix, and restoring only has to
// reinstate the older prefix length.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gmatch/core.hpp"

namespace gmatch {

class NotStrictSubset : public std::logic_error {
 public:
  NotStrictSubset() : std::logic_error("refinement is not a strict subset") {}
};

class InvalidMark : public std::logic_error {
 public:
  InvalidMark() : std::logic_error("mark no longer refers to this stack state") {}
};

struct StackMark {
  std::size_t size = 0;
  std::uint64_t serial = 0;
};

namespace detail {

// Shared machinery: keys own universes of dense element ids.
class IntervalStack {
 public:
  struct Entry {
    std::uint32_t key;
    std::uint32_t active;  // prefix length after this entry
    std::uint32_t prev;    // previous entry of the same key, or kNone
    std::uint64_t serial;
  };
  static constexpr std::uint32_t kNone = 0xffffffffu;

  void reset(std::vector<std::uint32_t> universe_sizes);

  std::size_t size() const { return entries_.size(); }
  std::size_t num_keys() const { return perm_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  bool is_current(std::size_t i) const { return last_[entries_[i].key] == i; }
  bool has_entry(std::uint32_t key) const { return last_[key] != kNone; }
  std::uint32_t current_entry(std::uint32_t key) const { return last_[key]; }
  std::span<const std::uint32_t> active(std::uint32_t key) const;
  std::span<const std::uint32_t> inactive(std::uint32_t key) const;
  bool is_active(std::uint32_t key, std::uint32_t elem) const;
  std::uint32_t universe(std::uint32_t key) const {
    return static_cast<std::uint32_t>(perm_[key].size());
  }

  std::size_t push_initial(std::uint32_t key, std::span<const std::uint32_t> elems);
  std::size_t push(std::uint32_t key, std::span<const std::uint32_t> kept, bool allow_empty);

  StackMark mark() const;
  void restore(const StackMark& m);
  std::optional<std::size_t> next_current(std::size_t k) const;

 private:
  void swap_to(std::uint32_t key, std::uint32_t elem, std::uint32_t slot);

  std::vector<Entry> entries_;
  std::vector<std::vector<std::uint32_t>> perm_;
  std::vector<std::vector<std::uint32_t>> pos_;
  std::vector<std::uint32_t> last_;
  std::vector<std::uint8_t> scratch_;
  std::uint64_t next_serial_ = 1;
};

}  // namespace detail

// Refinements c_i => d_i of the clauses of one GCSP. Element ids are member
// indices of the original clause.
class RefinementStack {
 public:
  RefinementStack() = default;
  explicit RefinementStack(std::span<const Clause> clauses);

  std::size_t size() const { return s_.size(); }
  std::size_t num_clauses() const { return clauses_.size(); }
  const Clause& clause(std::uint32_t c) const { return clauses_[c]; }
  std::uint32_t clause_of(std::size_t entry) const { return s_.entry(entry).key; }
  bool is_current(std::size_t entry) const { return s_.is_current(entry); }
  bool has_entry(std::uint32_t c) const { return s_.has_entry(c); }
  std::uint32_t current_entry(std::uint32_t c) const { return s_.current_entry(c); }
  std::span<const std::uint32_t> active(std::uint32_t c) const { return s_.active(c); }
  std::span<const std::uint32_t> inactive(std::uint32_t c) const { return s_.inactive(c); }
  bool is_active(std::uint32_t c, std::uint32_t member) const { return s_.is_active(c, member); }
  // Entry's active count, as of when it was the newest refinement.
  std::uint32_t entry_size(std::size_t entry) const { return s_.entry(entry).active; }

  // Appends c => c.
  std::size_t add_initial(std::uint32_t c);
  // Appends c => kept; kept must be a non-empty strict subset of the
  // currently active members.
  std::size_t refine(std::uint32_t c, std::span<const std::uint32_t> kept);

  StackMark mark() const { return s_.mark(); }
  void restore(const StackMark& m) { s_.restore(m); }
  // First current entry at index >= k.
  std::optional<std::size_t> next_current(std::size_t k) const { return s_.next_current(k); }

 private:
  std::vector<Clause> clauses_;
  detail::IntervalStack s_;
};

// Domain refinements v/V over constants 0..num_consts-1.
class SubstitutionStack {
 public:
  SubstitutionStack() = default;
  SubstitutionStack(std::size_t num_vars, std::size_t num_consts);

  std::size_t size() const { return s_.size(); }
  std::size_t num_vars() const { return s_.num_keys(); }
  Var var_of(std::size_t entry) const { return Var{s_.entry(entry).key}; }
  bool is_current(std::size_t entry) const { return s_.is_current(entry); }
  bool has_entry(Var v) const { return s_.has_entry(v.id); }
  std::uint32_t entry_size(std::size_t entry) const { return s_.entry(entry).active; }
  std::span<const std::uint32_t> current(Var v) const { return s_.active(v.id); }
  bool contains(Var v, Const c) const { return s_.is_active(v.id, c.id); }
  std::size_t domain_size(Var v) const { return s_.active(v.id).size(); }

  std::size_t add_initial(Var v, std::span<const std::uint32_t> values);
  // kept must be a strict subset of the current domain; it may be empty.
  std::size_t domain_refine(Var v, std::span<const std::uint32_t> kept);

  // Every variable with an entry has a singleton domain.
  bool unary() const;

  StackMark mark() const { return s_.mark(); }
  void restore(const StackMark& m) { s_.restore(m); }
  std::optional<std::size_t> next_current(std::size_t k) const { return s_.next_current(k); }

 private:
  detail::IntervalStack s_;
};

}  // namespace gmatch
