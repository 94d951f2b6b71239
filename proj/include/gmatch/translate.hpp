#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gmatch/core.hpp"
#include "gmatch/geometric.hpp"

namespace gmatch {

// A set of naturals, or all of them.
struct Alpha {
  bool everything = true;
  WeightSet elems;

  static Alpha all() { return {}; }
  static Alpha of(WeightSet s);
  bool admits(const WeightSet& w) const;  // w is a subset
};

struct SubstletOrigin {
  std::size_t premise = 0;
  std::optional<std::size_t> atom;  // clashing interpretation atom
};

struct BlockingOrigin {
  std::size_t conclusion = 0;
  bool from_weight = false;  // added by the restricted translation only
};

struct TranslationOutput {
  Gcsp gcsp;
  // Parallel to gcsp.positive[i].members().
  std::vector<std::vector<SubstletOrigin>> substlet_origin;
  // Parallel to gcsp.negative.
  std::vector<BlockingOrigin> blocking_origin;
};

TranslationOutput translate(const MatchInstance& inst);
TranslationOutput translate_restricted(const MatchInstance& inst, const Alpha& alpha);

struct TriviallyUnsat {
  std::string reason;
};

using PreprocessResult = std::variant<Gcsp, TriviallyUnsat>;

PreprocessResult preprocess(const Gcsp& gcsp);

}  // namespace gmatch
