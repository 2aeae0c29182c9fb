#include "pluralis/principles.hpp"

#include <algorithm>

#include "pluralis/error.hpp"
#include "pluralis/syntax.hpp"

namespace pluralis {

namespace {

struct Entry {
  const char* name;
  bool variable_only;
  const char* summary;
};

constexpr Entry kEntries[] = {
    {"NecInc", false, "membership is necessary (guarded by E! with inner domains)"},
    {"NecNInc", false, "non-membership is necessary (guarded by E! with inner domains)"},
    {"Indisc", false, "coextensive pluralities are indiscernible (instance with FF)"},
    {"Cov", false, "coextensive pluralities are necessarily coextensive"},
    {"UniAdj", false, "adjoining a to xx yields exactly xx and a, necessarily"},
    {"Nonemptiness", false, "every plurality has a member"},
    {"Comprehension", false, "plural comprehension (instance with P(x))"},
    {"Extensionality", false, "pluralities with the same members are the same things"},
    {"VNonemptiness", true, "every existing plurality has an existing member"},
    {"VComprehension", true, "guarded plural comprehension (instance with P(x))"},
    {"PartialRigidification", false, "some yy coextensive with xx has its members necessarily"},
    {"PartialRigidificationV", true, "partial rigidification for variable domains"},
    {"Traversal", false, "aa is exactly a, b and c"},
    {"UniformTraversal", false, "necessarily, aa is exactly a, b and c"},
    {"NecId", false, "identity is necessary"},
};

const Entry* find_entry(std::string_view name) {
  for (const auto& e : kEntries) {
    if (name == e.name) return &e;
  }
  return nullptr;
}

Formula guarded_box(const Formula& guard, const Formula& body, DomainMode mode) {
  return mode == DomainMode::Fixed ? box(body) : box(implies(guard, body));
}

Formula parsed(std::string_view text) { return parse_formula(text); }

}  // namespace

const std::vector<std::string>& principle_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : kEntries) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

bool is_principle_name(std::string_view name) { return find_entry(name) != nullptr; }

bool requires_variable_mode(std::string_view name) {
  const Entry* e = find_entry(name);
  return e && e->variable_only;
}

const char* principle_summary(std::string_view name) {
  const Entry* e = find_entry(name);
  return e ? e->summary : "";
}

Formula get_principle(const PrincipleId& id) {
  const Entry* e = find_entry(id.name);
  if (!e) throw Error("unknown principle '" + id.name + "'");
  if (e->variable_only && id.mode != DomainMode::Variable) {
    throw Error("principle " + id.name + " requires variable mode");
  }
  const std::string& n = id.name;
  const Formula in_xy = one_of(svar("x"), pvar("yy"));
  const Formula guard = conj(exists_pred(svar("x")), exists_pred(pvar("yy")));
  if (n == "NecInc") return implies(in_xy, guarded_box(guard, in_xy, id.mode));
  if (n == "NecNInc") return implies(neg(in_xy), guarded_box(guard, neg(in_xy), id.mode));
  if (n == "Indisc") {
    return instantiate_indisc(plural_predicate("FF", pvar("zz")), "zz", pvar("xx"), pvar("yy"));
  }
  if (n == "Cov") return parsed("xx == yy -> [] xx == yy");
  if (n == "UniAdj") return parsed("[] forall x. (x in xx + a <-> (x in xx | x = a))");
  if (n == "Nonemptiness") return parsed("forall xx. exists y. y in xx");
  if (n == "Comprehension") return instantiate_comprehension(predicate("P", {svar("x")}), "x", DomainMode::Fixed);
  if (n == "Extensionality") return parsed("forall xx. forall yy. (xx == yy <-> forall x. (x in xx <-> x in yy))");
  if (n == "VNonemptiness") return parsed("forall xx. (E! xx -> exists y. (E! y & y in xx))");
  if (n == "VComprehension") {
    return instantiate_comprehension(predicate("P", {svar("x")}), "x", DomainMode::Variable);
  }
  if (n == "PartialRigidification") return partial_rigidification(id.mode);
  if (n == "PartialRigidificationV") return partial_rigidification(DomainMode::Variable);
  if (n == "Traversal") return traversal("aa", {"a", "b", "c"}, false);
  if (n == "UniformTraversal") return traversal("aa", {"a", "b", "c"}, true);
  return parsed("a = b -> [] a = b");  // NecId
}

Formula instantiate_comprehension(const Formula& phi, const std::string& x, DomainMode mode,
                                  bool allow_modal, std::optional<std::string> xx) {
  if (classify_name(x) != NameClass::SingularVar) throw Error("'" + x + "' is not a singular variable");
  if (!allow_modal && is_modal(phi)) throw Error("modal instance rejected");
  const FreeVariables fv = free_variables(phi);
  std::string plural;
  if (xx) {
    if (classify_name(*xx) != NameClass::PluralVar) throw Error("'" + *xx + "' is not a plural variable");
    if (fv.plural.contains(*xx)) throw Error("xx capture: " + *xx + " is free in the instance");
    plural = *xx;
  } else {
    plural = fresh_name("xx", fv.plural);
  }
  const Term vx = svar(x);
  const Term vxx = pvar(plural);
  if (mode == DomainMode::Fixed) {
    return implies(exists(x, phi), exists(plural, forall(x, iff(one_of(vx, vxx), phi))));
  }
  const Formula guarded = conj(exists_pred(vx), phi);
  return implies(exists(x, guarded),
                 exists(plural, conj(exists_pred(vxx), forall(x, iff(one_of(vx, vxx), guarded)))));
}

Formula instantiate_indisc(const Formula& context, const std::string& hole, const Term& tt,
                           const Term& uu, bool allow_modal) {
  if (classify_name(hole) != NameClass::PluralVar) throw Error("hole '" + hole + "' is not a plural variable");
  if (tt.sort() != Sort::Plural || uu.sort() != Sort::Plural) {
    throw Error("type clash: indiscernibility needs plural terms");
  }
  if (!free_variables(context).plural.contains(hole)) throw Error("context has no hole '" + hole + "'");
  if (!allow_modal && is_modal(context)) throw Error("modal instance rejected");
  const Variable v{Sort::Plural, hole};
  return implies(same_things(tt, uu), iff(substitute(context, v, tt), substitute(context, v, uu)));
}

Formula partial_rigidification(DomainMode mode) {
  if (mode == DomainMode::Fixed) {
    return parsed("exists yy. (xx == yy & forall x. (x in yy -> [] x in yy))");
  }
  return parsed("exists yy. (xx == yy & forall x. (x in yy -> [](E! yy -> [] x in yy)))");
}

Formula traversal(const std::string& aa, const std::vector<std::string>& cs, bool necessitated) {
  if (cs.empty()) throw Error("traversal needs at least one constant");
  if (classify_name(aa) != NameClass::PluralConst) throw Error("'" + aa + "' is not a plural constant");
  const Term x = svar("x");
  std::optional<Formula> listing;
  for (const auto& c : cs) {
    if (classify_name(c) != NameClass::SingularConst) throw Error("'" + c + "' is not a singular constant");
    Formula eq = equals(x, sconst(c));
    listing = listing ? disj(*listing, eq) : eq;
  }
  Formula body = forall("x", iff(one_of(x, pconst(aa)), *listing));
  return necessitated ? box(body) : body;
}

Signature standard_signature() {
  Signature sig;
  sig.singular_consts = {"a", "b", "c"};
  sig.plural_consts = {"aa"};
  sig.singular_preds = {{"P", 1}};
  sig.plural_preds = {"FF"};
  sig.has_existence_pred = true;
  return sig;
}

}  // namespace pluralis
