#pragma once

// Typed abstract syntax for modal plural first-order logic: terms, formulas,
// signatures, well-formedness, abbreviation expansion and substitution.

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pluralis {

enum class Sort { Singular, Plural };

// Lexical family of an identifier.  Singular variables are one letter from
// u..z, singular constants one letter from a..t; doubling the letter gives the
// plural counterpart (xx, aa).  Predicates follow the same scheme in upper
// case (P, FF).  Any family may carry a numeric suffix (x1, aa2, FF3).
enum class NameClass {
  SingularVar,
  PluralVar,
  SingularConst,
  PluralConst,
  SingularPred,
  PluralPred,
  Invalid,
};

[[nodiscard]] NameClass classify_name(std::string_view name);

struct Variable {
  Sort sort = Sort::Singular;
  std::string name;

  auto operator<=>(const Variable&) const = default;
};

class Term {
public:
  enum class Kind { SingularVar, SingularConst, PluralVar, PluralConst, Adjunction };

  static Term singular_var(std::string name);
  static Term singular_const(std::string name);
  static Term plural_var(std::string name);
  static Term plural_const(std::string name);
  // No sort checking here; well_formed() reports misuse.
  static Term adjoin(Term base, Term adjunct);
  static Term variable(const Variable& v);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] Sort sort() const;
  [[nodiscard]] bool is_variable() const;
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] const Term& base() const;
  [[nodiscard]] const Term& adjunct() const;
  [[nodiscard]] Variable as_variable() const;

  friend bool operator==(const Term& a, const Term& b);

private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_{std::move(node)} {}
  std::shared_ptr<const Node> node_;
};

class Formula {
public:
  enum class Kind {
    SingularPred,
    PluralPred,
    IsOneOf,
    Identity,
    ExistsPredS,
    ExistsPredP,
    Not,
    And,
    Or,
    Implies,
    Iff,
    ForallS,
    ExistsS,
    ForallP,
    ExistsP,
    Box,
    Diamond,
    SamePlurality,
  };

  // Unchecked constructor.  `name` is the predicate name for predications and
  // the bound variable for quantifiers; unused otherwise.
  static Formula make(Kind kind, std::string name, std::vector<Term> terms,
                      std::vector<Formula> children);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] const std::vector<Term>& terms() const;
  [[nodiscard]] const std::vector<Formula>& children() const;

  [[nodiscard]] const Formula& operand() const { return children()[0]; }
  [[nodiscard]] const Formula& lhs() const { return children()[0]; }
  [[nodiscard]] const Formula& rhs() const { return children()[1]; }
  [[nodiscard]] const Formula& body() const { return children()[0]; }

  [[nodiscard]] bool is_atomic() const;
  [[nodiscard]] bool is_binary() const;
  [[nodiscard]] bool is_unary() const;
  [[nodiscard]] bool is_quantifier() const;
  [[nodiscard]] Variable bound_variable() const;

  friend bool operator==(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_{std::move(node)} {}
  std::shared_ptr<const Node> node_;
};

[[nodiscard]] Sort bound_sort(Formula::Kind quantifier);
[[nodiscard]] const char* kind_name(Formula::Kind kind);

// Term builders.
[[nodiscard]] Term svar(std::string name);
[[nodiscard]] Term pvar(std::string name);
[[nodiscard]] Term sconst(std::string name);
[[nodiscard]] Term pconst(std::string name);
[[nodiscard]] Term adjoin(Term base, Term adjunct);
// Builds a term from a lexically classified name; throws Error otherwise.
[[nodiscard]] Term term(std::string_view name);

// Formula builders.
[[nodiscard]] Formula predicate(std::string name, std::vector<Term> args);
[[nodiscard]] Formula plural_predicate(std::string name, Term arg);
[[nodiscard]] Formula one_of(Term t, Term tt);
[[nodiscard]] Formula equals(Term a, Term b);
[[nodiscard]] Formula exists_pred(Term t);  // picks ExistsPredS/ExistsPredP by sort
[[nodiscard]] Formula same_things(Term tt, Term uu);
[[nodiscard]] Formula neg(Formula f);
[[nodiscard]] Formula conj(Formula a, Formula b);
[[nodiscard]] Formula disj(Formula a, Formula b);
[[nodiscard]] Formula implies(Formula a, Formula b);
[[nodiscard]] Formula iff(Formula a, Formula b);
[[nodiscard]] Formula box(Formula f);
[[nodiscard]] Formula diamond(Formula f);
// Quantifier sort is taken from the lexical class of `var`.
[[nodiscard]] Formula forall(std::string var, Formula body);
[[nodiscard]] Formula exists(std::string var, Formula body);
[[nodiscard]] Formula quantifier(Formula::Kind kind, std::string var, Formula body);

struct Signature {
  std::set<std::string> singular_consts;
  std::set<std::string> plural_consts;
  std::map<std::string, int> singular_preds;  // name -> arity
  std::set<std::string> plural_preds;
  bool has_existence_pred = false;

  // Union; throws Error on an arity conflict.
  void merge(const Signature& other);
  [[nodiscard]] std::size_t symbol_count() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Collects every non-logical symbol of `f`.  Throws Error when a predicate is
// used with two arities.
[[nodiscard]] Signature infer_signature(const Formula& f);

struct Violation {
  enum class Kind {
    UndeclaredSymbol,
    ArityMismatch,
    TypeClash,
    ExistencePredicate,
    LexicalFamily,
    Malformed,
  };
  Kind kind;
  std::string message;
};

struct TypingReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

[[nodiscard]] TypingReport well_formed(const Formula& f, const Signature& sig);

// Replaces SamePlurality and Diamond nodes by their definitions.
[[nodiscard]] Formula expand_abbreviations(const Formula& f);

struct FreeVariables {
  std::set<std::string> singular;
  std::set<std::string> plural;

  [[nodiscard]] bool contains(const Variable& v) const;
  [[nodiscard]] bool empty() const { return singular.empty() && plural.empty(); }
  friend bool operator==(const FreeVariables&, const FreeVariables&) = default;
};

[[nodiscard]] FreeVariables free_variables(const Formula& f);
[[nodiscard]] FreeVariables free_variables(const Term& t);

using Substitution = std::map<Variable, Term>;

// Capture-avoiding substitution of `t` for the free occurrences of `v`.
// Throws Error if the sorts differ.
[[nodiscard]] Formula substitute(const Formula& f, const Variable& v, const Term& t);
// Simultaneous capture-avoiding substitution.
[[nodiscard]] Formula substitute(const Formula& f, const Substitution& sigma);

// Every variable name occurring in `f`, free or bound.
[[nodiscard]] std::set<std::string> variable_names(const Formula& f);

// `base` itself if unused, else base1, base2, ... (first unused).
[[nodiscard]] std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

[[nodiscard]] int modal_depth(const Formula& f);
[[nodiscard]] bool is_modal(const Formula& f);
[[nodiscard]] bool uses_existence(const Formula& f);

}  // namespace pluralis
