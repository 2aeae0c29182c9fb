#pragma once

#include <optional>

#include "pluralis/formula.hpp"
#include "pluralis/model.hpp"

namespace pluralis {

// Denotation of a plural term at `s`; nullopt when undefined there.
// Adjunction is strict in its base.
[[nodiscard]] std::optional<ElementSet> denote_plural(const Model& m, const World& s,
                                                      const Valuation& v, const Term& tt);

// Satisfaction at a world under a valuation.  Abbreviations are expanded
// internally.  Throws Error for an invalid model or valuation, an unknown
// world, an uninterpreted symbol, an unassigned free variable, or E! in a
// fixed-domain model.
[[nodiscard]] bool satisfies(const Model& m, const World& s, const Valuation& v, const Formula& f);

// True at every world under every assignment to the free variables of f.
[[nodiscard]] bool true_in_model(const Model& m, const Formula& f);

}  // namespace pluralis
