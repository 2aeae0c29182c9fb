#include "pluralis/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "pluralis/error.hpp"

namespace pluralis {

namespace {

// Splits "xx12" into letters "xx" and digits "12"; false if malformed.
bool split_identifier(std::string_view name, std::string_view& letters) {
  std::size_t i = 0;
  while (i < name.size() && std::isalpha(static_cast<unsigned char>(name[i]))) ++i;
  if (i == 0) return false;
  for (std::size_t j = i; j < name.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(name[j]))) return false;
  }
  letters = name.substr(0, i);
  return true;
}

}  // namespace

NameClass classify_name(std::string_view name) {
  std::string_view letters;
  if (!split_identifier(name, letters)) return NameClass::Invalid;
  const bool lower = std::all_of(letters.begin(), letters.end(),
                                 [](char c) { return c >= 'a' && c <= 'z'; });
  const bool upper = std::all_of(letters.begin(), letters.end(),
                                 [](char c) { return c >= 'A' && c <= 'Z'; });
  const bool doubled = letters.size() == 2 && letters[0] == letters[1];
  if (letters.size() != 1 && !doubled) return NameClass::Invalid;
  if (lower) {
    const bool var = letters[0] >= 'u';
    if (doubled) return var ? NameClass::PluralVar : NameClass::PluralConst;
    return var ? NameClass::SingularVar : NameClass::SingularConst;
  }
  if (upper) return doubled ? NameClass::PluralPred : NameClass::SingularPred;
  return NameClass::Invalid;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Term> parts;  // base, adjunct for Adjunction
};

Term Term::singular_var(std::string name) {
  return Term{std::make_shared<const Node>(Node{Kind::SingularVar, std::move(name), {}})};
}
Term Term::singular_const(std::string name) {
  return Term{std::make_shared<const Node>(Node{Kind::SingularConst, std::move(name), {}})};
}
Term Term::plural_var(std::string name) {
  return Term{std::make_shared<const Node>(Node{Kind::PluralVar, std::move(name), {}})};
}
Term Term::plural_const(std::string name) {
  return Term{std::make_shared<const Node>(Node{Kind::PluralConst, std::move(name), {}})};
}
Term Term::adjoin(Term base, Term adjunct) {
  return Term{std::make_shared<const Node>(
      Node{Kind::Adjunction, {}, {std::move(base), std::move(adjunct)}})};
}
Term Term::variable(const Variable& v) {
  return v.sort == Sort::Singular ? singular_var(v.name) : plural_var(v.name);
}

Term::Kind Term::kind() const { return node_->kind; }

Sort Term::sort() const {
  switch (node_->kind) {
    case Kind::SingularVar:
    case Kind::SingularConst:
      return Sort::Singular;
    default:
      return Sort::Plural;
  }
}

bool Term::is_variable() const {
  return node_->kind == Kind::SingularVar || node_->kind == Kind::PluralVar;
}
const std::string& Term::name() const { return node_->name; }
const Term& Term::base() const { return node_->parts.at(0); }
const Term& Term::adjunct() const { return node_->parts.at(1); }

Variable Term::as_variable() const {
  if (!is_variable()) throw Error("term is not a variable");
  return Variable{sort(), name()};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->kind == b.node_->kind && a.node_->name == b.node_->name &&
         a.node_->parts == b.node_->parts;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> children;
};

Formula Formula::make(Kind kind, std::string name, std::vector<Term> terms,
                      std::vector<Formula> children) {
  return Formula{std::make_shared<const Node>(
      Node{kind, std::move(name), std::move(terms), std::move(children)})};
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const std::vector<Formula>& Formula::children() const { return node_->children; }

bool Formula::is_atomic() const {
  switch (node_->kind) {
    case Kind::SingularPred:
    case Kind::PluralPred:
    case Kind::IsOneOf:
    case Kind::Identity:
    case Kind::ExistsPredS:
    case Kind::ExistsPredP:
    case Kind::SamePlurality:
      return true;
    default:
      return false;
  }
}

bool Formula::is_binary() const {
  switch (node_->kind) {
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return true;
    default:
      return false;
  }
}

bool Formula::is_unary() const {
  return node_->kind == Kind::Not || node_->kind == Kind::Box || node_->kind == Kind::Diamond;
}

bool Formula::is_quantifier() const {
  switch (node_->kind) {
    case Kind::ForallS:
    case Kind::ExistsS:
    case Kind::ForallP:
    case Kind::ExistsP:
      return true;
    default:
      return false;
  }
}

Variable Formula::bound_variable() const {
  if (!is_quantifier()) throw Error("formula is not a quantifier");
  return Variable{bound_sort(node_->kind), node_->name};
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->kind == b.node_->kind && a.node_->name == b.node_->name &&
         a.node_->terms == b.node_->terms && a.node_->children == b.node_->children;
}

Sort bound_sort(Formula::Kind quantifier) {
  using K = Formula::Kind;
  return (quantifier == K::ForallP || quantifier == K::ExistsP) ? Sort::Plural : Sort::Singular;
}

const char* kind_name(Formula::Kind kind) {
  using K = Formula::Kind;
  switch (kind) {
    case K::SingularPred: return "SingularPred";
    case K::PluralPred: return "PluralPred";
    case K::IsOneOf: return "IsOneOf";
    case K::Identity: return "Identity";
    case K::ExistsPredS: return "ExistsPredS";
    case K::ExistsPredP: return "ExistsPredP";
    case K::Not: return "Not";
    case K::And: return "And";
    case K::Or: return "Or";
    case K::Implies: return "Implies";
    case K::Iff: return "Iff";
    case K::ForallS: return "ForallS";
    case K::ExistsS: return "ExistsS";
    case K::ForallP: return "ForallP";
    case K::ExistsP: return "ExistsP";
    case K::Box: return "Box";
    case K::Diamond: return "Diamond";
    case K::SamePlurality: return "SamePlurality";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Builders

Term svar(std::string name) { return Term::singular_var(std::move(name)); }
Term pvar(std::string name) { return Term::plural_var(std::move(name)); }
Term sconst(std::string name) { return Term::singular_const(std::move(name)); }
Term pconst(std::string name) { return Term::plural_const(std::move(name)); }
Term adjoin(Term base, Term adjunct) { return Term::adjoin(std::move(base), std::move(adjunct)); }

Term term(std::string_view name) {
  std::string s{name};
  switch (classify_name(name)) {
    case NameClass::SingularVar: return svar(std::move(s));
    case NameClass::PluralVar: return pvar(std::move(s));
    case NameClass::SingularConst: return sconst(std::move(s));
    case NameClass::PluralConst: return pconst(std::move(s));
    default: throw Error("'" + s + "' is not a term name");
  }
}

using K = Formula::Kind;

Formula predicate(std::string name, std::vector<Term> args) {
  return Formula::make(K::SingularPred, std::move(name), std::move(args), {});
}
Formula plural_predicate(std::string name, Term arg) {
  return Formula::make(K::PluralPred, std::move(name), {std::move(arg)}, {});
}
Formula one_of(Term t, Term tt) {
  return Formula::make(K::IsOneOf, {}, {std::move(t), std::move(tt)}, {});
}
Formula equals(Term a, Term b) {
  return Formula::make(K::Identity, {}, {std::move(a), std::move(b)}, {});
}
Formula exists_pred(Term t) {
  const K kind = t.sort() == Sort::Singular ? K::ExistsPredS : K::ExistsPredP;
  return Formula::make(kind, {}, {std::move(t)}, {});
}
Formula same_things(Term tt, Term uu) {
  return Formula::make(K::SamePlurality, {}, {std::move(tt), std::move(uu)}, {});
}
Formula neg(Formula f) { return Formula::make(K::Not, {}, {}, {std::move(f)}); }
Formula conj(Formula a, Formula b) {
  return Formula::make(K::And, {}, {}, {std::move(a), std::move(b)});
}
Formula disj(Formula a, Formula b) {
  return Formula::make(K::Or, {}, {}, {std::move(a), std::move(b)});
}
Formula implies(Formula a, Formula b) {
  return Formula::make(K::Implies, {}, {}, {std::move(a), std::move(b)});
}
Formula iff(Formula a, Formula b) {
  return Formula::make(K::Iff, {}, {}, {std::move(a), std::move(b)});
}
Formula box(Formula f) { return Formula::make(K::Box, {}, {}, {std::move(f)}); }
Formula diamond(Formula f) { return Formula::make(K::Diamond, {}, {}, {std::move(f)}); }

Formula quantifier(Formula::Kind kind, std::string var, Formula body) {
  return Formula::make(kind, std::move(var), {}, {std::move(body)});
}

Formula forall(std::string var, Formula body) {
  const auto cls = classify_name(var);
  if (cls == NameClass::SingularVar) return quantifier(K::ForallS, std::move(var), std::move(body));
  if (cls == NameClass::PluralVar) return quantifier(K::ForallP, std::move(var), std::move(body));
  throw Error("'" + var + "' is not a variable name");
}

Formula exists(std::string var, Formula body) {
  const auto cls = classify_name(var);
  if (cls == NameClass::SingularVar) return quantifier(K::ExistsS, std::move(var), std::move(body));
  if (cls == NameClass::PluralVar) return quantifier(K::ExistsP, std::move(var), std::move(body));
  throw Error("'" + var + "' is not a variable name");
}

// ---------------------------------------------------------------------------
// Signature

void Signature::merge(const Signature& other) {
  singular_consts.insert(other.singular_consts.begin(), other.singular_consts.end());
  plural_consts.insert(other.plural_consts.begin(), other.plural_consts.end());
  plural_preds.insert(other.plural_preds.begin(), other.plural_preds.end());
  for (const auto& [name, arity] : other.singular_preds) {
    auto [it, inserted] = singular_preds.emplace(name, arity);
    if (!inserted && it->second != arity) {
      throw Error("predicate " + name + " used with arities " + std::to_string(it->second) +
                  " and " + std::to_string(arity));
    }
  }
  has_existence_pred = has_existence_pred || other.has_existence_pred;
}

std::size_t Signature::symbol_count() const {
  return singular_consts.size() + plural_consts.size() + singular_preds.size() +
         plural_preds.size();
}

namespace {

void collect_term_symbols(const Term& t, Signature& sig) {
  switch (t.kind()) {
    case Term::Kind::SingularConst: sig.singular_consts.insert(t.name()); break;
    case Term::Kind::PluralConst: sig.plural_consts.insert(t.name()); break;
    case Term::Kind::Adjunction:
      collect_term_symbols(t.base(), sig);
      collect_term_symbols(t.adjunct(), sig);
      break;
    default: break;
  }
}

void collect_symbols(const Formula& f, Signature& sig) {
  for (const auto& t : f.terms()) collect_term_symbols(t, sig);
  switch (f.kind()) {
    case K::SingularPred: {
      Signature one;
      one.singular_preds.emplace(f.name(), static_cast<int>(f.terms().size()));
      sig.merge(one);
      break;
    }
    case K::PluralPred: sig.plural_preds.insert(f.name()); break;
    case K::ExistsPredS:
    case K::ExistsPredP: sig.has_existence_pred = true; break;
    default: break;
  }
  for (const auto& c : f.children()) collect_symbols(c, sig);
}

}  // namespace

Signature infer_signature(const Formula& f) {
  Signature sig;
  collect_symbols(f, sig);
  return sig;
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

const char* sort_word(Sort s) { return s == Sort::Singular ? "singular" : "plural"; }

class TypeChecker {
public:
  TypeChecker(const Signature& sig, TypingReport& report) : sig_{sig}, report_{report} {}

  void check_term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::SingularVar: lexical(t.name(), NameClass::SingularVar, "singular variable"); break;
      case Term::Kind::PluralVar: lexical(t.name(), NameClass::PluralVar, "plural variable"); break;
      case Term::Kind::SingularConst:
        lexical(t.name(), NameClass::SingularConst, "singular constant");
        if (!sig_.singular_consts.contains(t.name())) undeclared("singular constant", t.name());
        break;
      case Term::Kind::PluralConst:
        lexical(t.name(), NameClass::PluralConst, "plural constant");
        if (!sig_.plural_consts.contains(t.name())) undeclared("plural constant", t.name());
        break;
      case Term::Kind::Adjunction:
        check_term(t.base());
        check_term(t.adjunct());
        if (t.base().sort() != Sort::Plural) clash("adjunction base must be a plural term");
        if (t.adjunct().sort() != Sort::Singular) clash("adjunct must be a singular term");
        break;
    }
  }

  void check(const Formula& f) {
    const auto& ts = f.terms();
    for (const auto& t : ts) check_term(t);
    switch (f.kind()) {
      case K::SingularPred: {
        lexical(f.name(), NameClass::SingularPred, "singular predicate");
        for (const auto& t : ts) expect_sort(t, Sort::Singular, f.name());
        auto it = sig_.singular_preds.find(f.name());
        if (it == sig_.singular_preds.end()) {
          undeclared("predicate", f.name());
        } else if (it->second != static_cast<int>(ts.size())) {
          add(Violation::Kind::ArityMismatch,
              "arity mismatch: " + f.name() + " declared with arity " +
                  std::to_string(it->second) + ", used with " + std::to_string(ts.size()));
        }
        break;
      }
      case K::PluralPred:
        lexical(f.name(), NameClass::PluralPred, "plural predicate");
        if (!arity(f, 1, 0)) break;
        expect_sort(ts[0], Sort::Plural, f.name());
        if (!sig_.plural_preds.contains(f.name())) undeclared("plural predicate", f.name());
        break;
      case K::IsOneOf:
        if (!arity(f, 2, 0)) break;
        expect_sort(ts[0], Sort::Singular, "in");
        expect_sort(ts[1], Sort::Plural, "in");
        break;
      case K::Identity:
        if (!arity(f, 2, 0)) break;
        expect_sort(ts[0], Sort::Singular, "=");
        expect_sort(ts[1], Sort::Singular, "=");
        break;
      case K::SamePlurality:
        if (!arity(f, 2, 0)) break;
        expect_sort(ts[0], Sort::Plural, "==");
        expect_sort(ts[1], Sort::Plural, "==");
        break;
      case K::ExistsPredS:
      case K::ExistsPredP: {
        if (!arity(f, 1, 0)) break;
        expect_sort(ts[0], f.kind() == K::ExistsPredS ? Sort::Singular : Sort::Plural, "E!");
        if (!sig_.has_existence_pred) {
          add(Violation::Kind::ExistencePredicate,
              "existence predicate used but not enabled in the signature");
        }
        break;
      }
      case K::Not:
      case K::Box:
      case K::Diamond: arity(f, 0, 1); break;
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff: arity(f, 0, 2); break;
      case K::ForallS:
      case K::ExistsS:
        arity(f, 0, 1);
        if (classify_name(f.name()) != NameClass::SingularVar) {
          clash("singular quantifier binds non-singular variable '" + f.name() + "'");
        }
        break;
      case K::ForallP:
      case K::ExistsP:
        arity(f, 0, 1);
        if (classify_name(f.name()) != NameClass::PluralVar) {
          clash("plural quantifier binds non-plural variable '" + f.name() + "'");
        }
        break;
    }
    for (const auto& c : f.children()) check(c);
  }

private:
  bool arity(const Formula& f, std::size_t terms, std::size_t children) {
    if (f.terms().size() == terms && f.children().size() == children) return true;
    add(Violation::Kind::Malformed, std::string{"malformed "} + kind_name(f.kind()) + " node");
    return false;
  }

  void expect_sort(const Term& t, Sort s, const std::string& where) {
    if (t.sort() != s) {
      clash(std::string{sort_word(t.sort())} + " term in " + sort_word(s) + " slot of " + where);
    }
  }

  void lexical(const std::string& name, NameClass want, const char* what) {
    if (classify_name(name) != want) {
      add(Violation::Kind::LexicalFamily, "'" + name + "' is not a valid " + what + " name");
    }
  }

  void undeclared(const char* what, const std::string& name) {
    add(Violation::Kind::UndeclaredSymbol, std::string{"undeclared symbol: "} + what + " " + name);
  }

  void clash(const std::string& detail) { add(Violation::Kind::TypeClash, "type clash: " + detail); }

  void add(Violation::Kind kind, std::string msg) {
    report_.violations.push_back(Violation{kind, std::move(msg)});
  }

  const Signature& sig_;
  TypingReport& report_;
};

}  // namespace

TypingReport well_formed(const Formula& f, const Signature& sig) {
  TypingReport report;
  TypeChecker{sig, report}.check(f);
  return report;
}

// ---------------------------------------------------------------------------
// Variables

bool FreeVariables::contains(const Variable& v) const {
  return v.sort == Sort::Singular ? singular.contains(v.name) : plural.contains(v.name);
}

namespace {

void term_free(const Term& t, FreeVariables& out) {
  switch (t.kind()) {
    case Term::Kind::SingularVar: out.singular.insert(t.name()); break;
    case Term::Kind::PluralVar: out.plural.insert(t.name()); break;
    case Term::Kind::Adjunction:
      term_free(t.base(), out);
      term_free(t.adjunct(), out);
      break;
    default: break;
  }
}

void formula_free(const Formula& f, FreeVariables& out) {
  for (const auto& t : f.terms()) term_free(t, out);
  if (f.is_quantifier()) {
    FreeVariables inner;
    formula_free(f.body(), inner);
    auto& set = bound_sort(f.kind()) == Sort::Singular ? inner.singular : inner.plural;
    set.erase(f.name());
    out.singular.insert(inner.singular.begin(), inner.singular.end());
    out.plural.insert(inner.plural.begin(), inner.plural.end());
    return;
  }
  for (const auto& c : f.children()) formula_free(c, out);
}

void term_names(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.name());
  if (t.kind() == Term::Kind::Adjunction) {
    term_names(t.base(), out);
    term_names(t.adjunct(), out);
  }
}

void formula_names(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) term_names(t, out);
  if (f.is_quantifier()) out.insert(f.name());
  for (const auto& c : f.children()) formula_names(c, out);
}

}  // namespace

FreeVariables free_variables(const Formula& f) {
  FreeVariables out;
  formula_free(f, out);
  return out;
}

FreeVariables free_variables(const Term& t) {
  FreeVariables out;
  term_free(t, out);
  return out;
}

std::set<std::string> variable_names(const Formula& f) {
  std::set<std::string> out;
  formula_names(f, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.contains(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Abbreviations

Formula expand_abbreviations(const Formula& f) {
  switch (f.kind()) {
    case K::SamePlurality: {
      const Term& tt = f.terms()[0];
      const Term& uu = f.terms()[1];
      std::set<std::string> avoid;
      term_names(tt, avoid);
      term_names(uu, avoid);
      const std::string u = fresh_name("u", avoid);
      return quantifier(K::ForallS, u, iff(one_of(svar(u), tt), one_of(svar(u), uu)));
    }
    case K::Diamond: return neg(box(neg(expand_abbreviations(f.operand()))));
    default: break;
  }
  if (f.children().empty()) return f;
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  bool changed = false;
  for (const auto& c : f.children()) {
    kids.push_back(expand_abbreviations(c));
    changed = changed || !(kids.back() == c);
  }
  if (!changed) return f;
  return Formula::make(f.kind(), f.name(), f.terms(), std::move(kids));
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Term subst_term(const Term& t, const Substitution& sigma) {
  if (t.is_variable()) {
    auto it = sigma.find(t.as_variable());
    return it == sigma.end() ? t : it->second;
  }
  if (t.kind() == Term::Kind::Adjunction) {
    return adjoin(subst_term(t.base(), sigma), subst_term(t.adjunct(), sigma));
  }
  return t;
}

std::string letters_of(const std::string& name) {
  std::size_t i = name.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(name[i - 1]))) --i;
  return name.substr(0, i);
}

Formula subst_formula(const Formula& f, const Substitution& sigma) {
  if (sigma.empty()) return f;
  if (f.is_quantifier()) {
    const Variable bound = f.bound_variable();
    const FreeVariables body_free = free_variables(f.body());
    Substitution inner;
    for (const auto& [v, t] : sigma) {
      if (!(v == bound) && body_free.contains(v)) inner.emplace(v, t);
    }
    if (inner.empty()) return f;
    std::set<std::string> incoming;
    for (const auto& [v, t] : inner) term_names(t, incoming);
    if (!incoming.contains(bound.name)) {
      return Formula::make(f.kind(), f.name(), {}, {subst_formula(f.body(), inner)});
    }
    std::set<std::string> avoid = variable_names(f.body());
    avoid.insert(incoming.begin(), incoming.end());
    for (const auto& [v, t] : inner) avoid.insert(v.name);
    avoid.insert(bound.name);
    const std::string renamed = fresh_name(letters_of(bound.name), avoid);
    inner.emplace(bound, Term::variable(Variable{bound.sort, renamed}));
    return Formula::make(f.kind(), renamed, {}, {subst_formula(f.body(), inner)});
  }
  std::vector<Term> terms;
  terms.reserve(f.terms().size());
  for (const auto& t : f.terms()) terms.push_back(subst_term(t, sigma));
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& c : f.children()) kids.push_back(subst_formula(c, sigma));
  return Formula::make(f.kind(), f.name(), std::move(terms), std::move(kids));
}

}  // namespace

Formula substitute(const Formula& f, const Variable& v, const Term& t) {
  return substitute(f, Substitution{{v, t}});
}

Formula substitute(const Formula& f, const Substitution& sigma) {
  for (const auto& [v, t] : sigma) {
    if (v.sort != t.sort()) {
      throw Error("type mismatch: cannot substitute a " +
                  std::string{t.sort() == Sort::Singular ? "singular" : "plural"} +
                  " term for " + std::string{v.sort == Sort::Singular ? "singular" : "plural"} +
                  " variable " + v.name);
    }
  }
  return subst_formula(f, sigma);
}

// ---------------------------------------------------------------------------
// Misc queries

int modal_depth(const Formula& f) {
  int inner = 0;
  for (const auto& c : f.children()) inner = std::max(inner, modal_depth(c));
  if (f.kind() == K::Box || f.kind() == K::Diamond) return inner + 1;
  return inner;
}

bool is_modal(const Formula& f) { return modal_depth(f) > 0; }

bool uses_existence(const Formula& f) {
  if (f.kind() == K::ExistsPredS || f.kind() == K::ExistsPredP) return true;
  return std::any_of(f.children().begin(), f.children().end(),
                     [](const Formula& c) { return uses_existence(c); });
}

namespace {

std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

SweepCeilingExceeded::SweepCeilingExceeded(double estimate, double ceiling)
    : Error("estimated valuation sweep of " + scientific(estimate) +
            " evaluations exceeds the ceiling of " + scientific(ceiling)),
      estimate_{estimate},
      ceiling_{ceiling} {}

}  // namespace pluralis
