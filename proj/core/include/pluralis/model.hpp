#pragma once

// Kripke models for the plural language, in fixed- and variable-domain form.
// Worlds and elements are opaque strings.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pluralis/formula.hpp"

namespace pluralis {

using World = std::string;
using Element = std::string;
using ElementSet = std::set<Element>;
using Tuple = std::vector<Element>;

enum class DomainMode { Fixed, Variable };

[[nodiscard]] const char* mode_name(DomainMode mode);
// Accepts "fixed" and "variable"; throws Error otherwise.
[[nodiscard]] DomainMode parse_mode(std::string_view text);

struct Model {
  std::vector<World> worlds;
  std::set<std::pair<World, World>> access;
  std::vector<Element> domain;
  // Present exactly in variable-domain mode.
  std::optional<std::map<World, ElementSet>> inner_domains;

  std::map<std::string, Element> singular_consts;
  // A list rather than a map so that a second extension at one world can be
  // represented (and diagnosed).
  std::map<std::string, std::vector<std::pair<World, ElementSet>>> plural_consts;
  std::map<std::string, std::map<World, std::set<Tuple>>> singular_preds;
  std::map<std::string, std::map<World, std::set<ElementSet>>> plural_preds;

  [[nodiscard]] DomainMode mode() const {
    return inner_domains ? DomainMode::Variable : DomainMode::Fixed;
  }

  friend bool operator==(const Model&, const Model&) = default;
};

struct Valuation {
  std::map<std::string, Element> singular;
  std::map<std::string, std::map<World, ElementSet>> plural;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

// Empty iff every model invariant holds.
[[nodiscard]] std::vector<std::string> validate_model(const Model& m);

// Checks a valuation against a model: elements in D, worlds in S, non-empty
// extensions, and totality on S for plural variables in fixed mode.
[[nodiscard]] std::vector<std::string> validate_valuation(const Model& m, const Valuation& v);

// Symbols interpreted by the model.  Predicate arity is taken from the
// tuples; a predicate with no tuples at all is reported with arity -1.
[[nodiscard]] std::map<std::string, int> singular_pred_arities(const Model& m);
[[nodiscard]] Signature signature_of(const Model& m);

}  // namespace pluralis
