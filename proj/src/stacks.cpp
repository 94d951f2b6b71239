#include "gmatch/stacks.hpp"

#include <numeric>

namespace gmatch {
namespace detail {

void IntervalStack::reset(std::vector<std::uint32_t> sizes) {
  entries_.clear();
  perm_.assign(sizes.size(), {});
  pos_.assign(sizes.size(), {});
  last_.assign(sizes.size(), kNone);
  std::uint32_t widest = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    perm_[k].resize(sizes[k]);
    std::iota(perm_[k].begin(), perm_[k].end(), 0u);
    pos_[k] = perm_[k];
    widest = std::max(widest, sizes[k]);
  }
  scratch_.assign(widest, 0);
}

std::span<const std::uint32_t> IntervalStack::active(std::uint32_t key) const {
  if (last_[key] == kNone) return {};
  return std::span<const std::uint32_t>(perm_[key]).first(entries_[last_[key]].active);
}

std::span<const std::uint32_t> IntervalStack::inactive(std::uint32_t key) const {
  std::size_t n = last_[key] == kNone ? 0 : entries_[last_[key]].active;
  return std::span<const std::uint32_t>(perm_[key]).subspan(n);
}

bool IntervalStack::is_active(std::uint32_t key, std::uint32_t elem) const {
  if (last_[key] == kNone || elem >= pos_[key].size()) return false;
  return pos_[key][elem] < entries_[last_[key]].active;
}

void IntervalStack::swap_to(std::uint32_t key, std::uint32_t elem, std::uint32_t slot) {
  auto& perm = perm_[key];
  auto& pos = pos_[key];
  std::uint32_t from = pos[elem];
  std::uint32_t other = perm[slot];
  perm[slot] = elem;
  perm[from] = other;
  pos[elem] = slot;
  pos[other] = from;
}

std::size_t IntervalStack::push_initial(std::uint32_t key, std::span<const std::uint32_t> elems) {
  if (last_[key] != kNone) throw std::logic_error("key already has an entry");
  std::uint32_t n = 0;
  for (std::uint32_t e : elems) swap_to(key, e, n++);
  entries_.push_back({key, n, kNone, next_serial_++});
  last_[key] = static_cast<std::uint32_t>(entries_.size() - 1);
  return entries_.size() - 1;
}

std::size_t IntervalStack::push(std::uint32_t key, std::span<const std::uint32_t> kept,
                                bool allow_empty) {
  if (last_[key] == kNone) throw std::logic_error("key has no entry to refine");
  std::uint32_t n = entries_[last_[key]].active;
  if (kept.size() >= n || (kept.empty() && !allow_empty)) throw NotStrictSubset();
  for (std::uint32_t e : kept) {
    if (!is_active(key, e) || scratch_[e]) {
      for (std::uint32_t f : kept) scratch_[f] = 0;
      throw NotStrictSubset();
    }
    scratch_[e] = 1;
  }
  std::uint32_t slot = 0;
  for (std::uint32_t e : kept) {
    scratch_[e] = 0;
    swap_to(key, e, slot++);
  }
  entries_.push_back({key, slot, last_[key], next_serial_++});
  last_[key] = static_cast<std::uint32_t>(entries_.size() - 1);
  return entries_.size() - 1;
}

StackMark IntervalStack::mark() const {
  if (entries_.empty()) return {0, 0};
  return {entries_.size(), entries_.back().serial};
}

void IntervalStack::restore(const StackMark& m) {
  if (m.size > entries_.size()) throw InvalidMark();
  if (m.size > 0 && entries_[m.size - 1].serial != m.serial) throw InvalidMark();
  while (entries_.size() > m.size) {
    const Entry& e = entries_.back();
    last_[e.key] = e.prev;
    entries_.pop_back();
  }
}

std::optional<std::size_t> IntervalStack::next_current(std::size_t k) const {
  for (; k < entries_.size(); ++k)
    if (is_current(k)) return k;
  return std::nullopt;
}

}  // namespace detail

RefinementStack::RefinementStack(std::span<const Clause> clauses)
    : clauses_(clauses.begin(), clauses.end()) {
  std::vector<std::uint32_t> sizes;
  for (const auto& c : clauses_) sizes.push_back(static_cast<std::uint32_t>(c.size()));
  s_.reset(std::move(sizes));
}

std::size_t RefinementStack::add_initial(std::uint32_t c) {
  std::vector<std::uint32_t> all(clauses_[c].size());
  std::iota(all.begin(), all.end(), 0u);
  return s_.push_initial(c, all);
}

std::size_t RefinementStack::refine(std::uint32_t c, std::span<const std::uint32_t> kept) {
  return s_.push(c, kept, false);
}

SubstitutionStack::SubstitutionStack(std::size_t num_vars, std::size_t num_consts) {
  s_.reset(std::vector<std::uint32_t>(num_vars, static_cast<std::uint32_t>(num_consts)));
}

std::size_t SubstitutionStack::add_initial(Var v, std::span<const std::uint32_t> values) {
  return s_.push_initial(v.id, values);
}

std::size_t SubstitutionStack::domain_refine(Var v, std::span<const std::uint32_t> kept) {
  return s_.push(v.id, kept, true);
}

bool SubstitutionStack::unary() const {
  for (std::uint32_t v = 0; v < s_.num_keys(); ++v)
    if (s_.has_entry(v) && s_.active(v).size() != 1) return false;
  return true;
}

}  // namespace gmatch
