#pragma once

// Concrete ASCII syntax for formulas.
//
//   terms      x y z x1 (singular vars)   xx yy xx1 (plural vars)
//              a b c a1 (singular consts) aa bb aa1 (plural consts)
//              tt + t   (adjunction, left associative)
//   atoms      P(t1,...,tn)  FF(tt)  t in tt  t = t  E! t  E! tt  tt == uu
//   operators  ~ [] <>  >  &  >  |  >  -> (right assoc)  >  <->
//   binders    forall v. phi   exists v. phi   (scope extends maximally right)
//
// Unicode aliases (≺ □ ◇ ≡ ¬ ∧ ∨ → ↔ ∀ ∃) are accepted on input only.

#include <string>
#include <string_view>

#include "pluralis/error.hpp"
#include "pluralis/formula.hpp"

namespace pluralis {

// Parses and type-checks against the signature inferred from the text.
[[nodiscard]] Formula parse_formula(std::string_view text);
// Parses and type-checks against `sig`; violations become ParseErrors.
[[nodiscard]] Formula parse_formula(std::string_view text, const Signature& sig);
[[nodiscard]] Term parse_term(std::string_view text);

[[nodiscard]] std::string print_formula(const Formula& f);
[[nodiscard]] std::string print_term(const Term& t);

}  // namespace pluralis
