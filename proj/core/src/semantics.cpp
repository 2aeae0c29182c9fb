#include "pluralis/semantics.hpp"

#include <algorithm>
#include <map>

#include "engine.hpp"
#include "pluralis/error.hpp"

namespace pluralis {

const char* mode_name(DomainMode mode) { return mode == DomainMode::Fixed ? "fixed" : "variable"; }

DomainMode parse_mode(std::string_view text) {
  if (text == "fixed") return DomainMode::Fixed;
  if (text == "variable") return DomainMode::Variable;
  throw Error("unknown domain mode '" + std::string{text} + "' (expected fixed or variable)");
}

namespace {

struct Checker {
  const Model& m;
  std::vector<std::string>& out;
  std::set<World> worlds;
  std::set<Element> domain;

  void world(const World& w, const std::string& where) {
    if (!worlds.contains(w)) out.push_back(where + " mentions unknown world '" + w + "'");
  }
  void element(const Element& e, const std::string& where) {
    if (!domain.contains(e)) out.push_back(where + " mentions '" + e + "', which is not in D");
  }
  void elements(const ElementSet& es, const std::string& where) {
    for (const auto& e : es) element(e, where);
  }
  void family(const std::string& name, NameClass want, const char* what) {
    if (classify_name(name) != want) {
      out.push_back("lexical family: '" + name + "' is not a valid " + what + " name");
    }
  }
};

}  // namespace

std::vector<std::string> validate_model(const Model& m) {
  std::vector<std::string> out;
  Checker c{m, out, {m.worlds.begin(), m.worlds.end()}, {m.domain.begin(), m.domain.end()}};
  if (m.worlds.empty()) out.push_back("S non-empty required");
  if (m.domain.empty()) out.push_back("D non-empty required");
  if (c.worlds.size() != m.worlds.size()) out.push_back("duplicate world name");
  if (c.domain.size() != m.domain.size()) out.push_back("duplicate element name");
  for (const auto& [w, u] : m.access) {
    c.world(w, "accessibility");
    c.world(u, "accessibility");
  }
  if (m.inner_domains) {
    for (const auto& [w, es] : *m.inner_domains) {
      c.world(w, "inner domains");
      for (const auto& e : es) {
        if (!c.domain.contains(e)) {
          out.push_back("inner domain of '" + w + "' is not a subset of D ('" + e + "')");
        }
      }
    }
    for (const auto& w : m.worlds) {
      if (!m.inner_domains->contains(w)) out.push_back("inner domain missing for world '" + w + "'");
    }
  }
  for (const auto& [name, e] : m.singular_consts) {
    c.family(name, NameClass::SingularConst, "singular constant");
    c.element(e, "constant " + name);
  }
  for (const auto& [name, entries] : m.plural_consts) {
    c.family(name, NameClass::PluralConst, "plural constant");
    std::set<World> seen;
    for (const auto& [w, es] : entries) {
      const std::string where = "plural constant " + name;
      c.world(w, where);
      if (!seen.insert(w).second) {
        out.push_back("functionality: " + where + " has more than one extension at '" + w + "'");
      }
      if (es.empty()) out.push_back("non-empty: " + where + " has an empty extension at '" + w + "'");
      c.elements(es, where);
    }
  }
  for (const auto& [name, per_world] : m.singular_preds) {
    c.family(name, NameClass::SingularPred, "singular predicate");
    std::optional<std::size_t> arity;
    for (const auto& [w, tuples] : per_world) {
      c.world(w, "predicate " + name);
      for (const auto& t : tuples) {
        if (arity && *arity != t.size()) {
          out.push_back("arity: predicate " + name + " has tuples of different lengths");
        }
        arity = t.size();
        for (const auto& e : t) c.element(e, "predicate " + name);
      }
    }
  }
  for (const auto& [name, per_world] : m.plural_preds) {
    c.family(name, NameClass::PluralPred, "plural predicate");
    for (const auto& [w, sets] : per_world) {
      c.world(w, "plural predicate " + name);
      for (const auto& s : sets) c.elements(s, "plural predicate " + name);
    }
  }
  return out;
}

std::vector<std::string> validate_valuation(const Model& m, const Valuation& v) {
  std::vector<std::string> out;
  Checker c{m, out, {m.worlds.begin(), m.worlds.end()}, {m.domain.begin(), m.domain.end()}};
  for (const auto& [x, e] : v.singular) {
    c.family(x, NameClass::SingularVar, "singular variable");
    c.element(e, "variable " + x);
  }
  for (const auto& [xx, per_world] : v.plural) {
    c.family(xx, NameClass::PluralVar, "plural variable");
    for (const auto& [w, es] : per_world) {
      c.world(w, "variable " + xx);
      if (es.empty()) out.push_back("non-empty: variable " + xx + " has an empty extension at '" + w + "'");
      c.elements(es, "variable " + xx);
    }
    if (m.mode() == DomainMode::Fixed) {
      for (const auto& w : m.worlds) {
        if (!per_world.contains(w)) {
          out.push_back("totality: fixed-domain variable " + xx + " undefined at '" + w + "'");
        }
      }
    }
  }
  return out;
}

std::map<std::string, int> singular_pred_arities(const Model& m) {
  std::map<std::string, int> out;
  for (const auto& [name, per_world] : m.singular_preds) {
    int arity = -1;
    for (const auto& [w, tuples] : per_world) {
      if (!tuples.empty()) arity = static_cast<int>(tuples.begin()->size());
    }
    out[name] = arity;
  }
  return out;
}

Signature signature_of(const Model& m) {
  Signature sig;
  for (const auto& [c, _] : m.singular_consts) sig.singular_consts.insert(c);
  for (const auto& [c, _] : m.plural_consts) sig.plural_consts.insert(c);
  for (const auto& [p, a] : singular_pred_arities(m)) sig.singular_preds[p] = a;
  for (const auto& [p, _] : m.plural_preds) sig.plural_preds.insert(p);
  sig.has_existence_pred = m.mode() == DomainMode::Variable;
  return sig;
}

namespace detail {

Naming load_structure(const Model& m, const Program& program, Structure& out) {
  Naming names{m.worlds, m.domain};
  std::sort(names.worlds.begin(), names.worlds.end());
  std::sort(names.elements.begin(), names.elements.end());
  std::map<World, int> widx;
  std::map<Element, int> eidx;
  for (std::size_t i = 0; i < names.worlds.size(); ++i) widx[names.worlds[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < names.elements.size(); ++i) eidx[names.elements[i]] = static_cast<int>(i);
  auto mask_of = [&](const ElementSet& es) {
    Mask mk = 0;
    for (const auto& e : es) mk |= Mask{1} << eidx.at(e);
    return mk;
  };

  out.reset(static_cast<int>(names.worlds.size()), static_cast<int>(names.elements.size()),
            m.mode() == DomainMode::Variable, program.sconsts.size(), program.pconsts.size(),
            program.spred_arity, program.ppreds.size());
  const int nW = out.nW;
  for (const auto& [w, u] : m.access) out.succ[widx.at(w)] |= Mask{1} << widx.at(u);
  if (m.inner_domains) {
    for (int w = 0; w < nW; ++w) {
      auto it = m.inner_domains->find(names.worlds[w]);
      out.inner[w] = it == m.inner_domains->end() ? 0 : mask_of(it->second);
    }
  }
  for (std::size_t c = 0; c < program.sconsts.size(); ++c) {
    auto it = m.singular_consts.find(program.sconsts[c]);
    if (it == m.singular_consts.end()) throw Error("undeclared symbol: " + program.sconsts[c]);
    out.sconst[c] = eidx.at(it->second);
  }
  for (std::size_t c = 0; c < program.pconsts.size(); ++c) {
    auto it = m.plural_consts.find(program.pconsts[c]);
    if (it == m.plural_consts.end()) throw Error("undeclared symbol: " + program.pconsts[c]);
    for (const auto& [w, es] : it->second) out.pconst[c * nW + widx.at(w)] = mask_of(es);
  }
  for (std::size_t p = 0; p < program.spreds.size(); ++p) {
    auto it = m.singular_preds.find(program.spreds[p]);
    if (it == m.singular_preds.end()) throw Error("undeclared symbol: " + program.spreds[p]);
    const auto arity = static_cast<std::size_t>(program.spred_arity[p]);
    for (const auto& [w, tuples] : it->second) {
      auto& bits = out.spred[p * nW + widx.at(w)];
      for (const auto& t : tuples) {
        if (t.size() != arity) {
          throw Error("arity mismatch: " + program.spreds[p] + " interpreted with arity " +
                      std::to_string(t.size()) + ", used with " + std::to_string(arity));
        }
        std::size_t code = 0;
        for (const auto& e : t) code = code * out.nD + eidx.at(e);
        bits[code >> 6] |= Mask{1} << (code & 63);
      }
    }
  }
  for (std::size_t p = 0; p < program.ppreds.size(); ++p) {
    auto it = m.plural_preds.find(program.ppreds[p]);
    if (it == m.plural_preds.end()) throw Error("undeclared symbol: " + program.ppreds[p]);
    for (const auto& [w, sets] : it->second) {
      auto& bits = out.ppred[p * nW + widx.at(w)];
      for (const auto& s : sets) {
        const Mask code = mask_of(s);
        bits[code >> 6] |= Mask{1} << (code & 63);
      }
    }
  }
  return names;
}

}  // namespace detail

namespace {

void require_valid(const Model& m) {
  const auto diags = validate_model(m);
  if (!diags.empty()) throw Error("invalid model: " + diags.front());
}

void require_mode(const Model& m, const Formula& f) {
  if (m.mode() == DomainMode::Fixed && uses_existence(f)) {
    throw Error("existence predicate used in fixed-domain mode");
  }
}

Element singular_value(const Model& m, const Valuation& v, const Term& t) {
  if (t.kind() == Term::Kind::SingularVar) {
    auto it = v.singular.find(t.name());
    if (it == v.singular.end()) throw Error("unassigned variable: " + t.name());
    return it->second;
  }
  auto it = m.singular_consts.find(t.name());
  if (it == m.singular_consts.end()) throw Error("undeclared symbol: " + t.name());
  return it->second;
}

}  // namespace

std::optional<ElementSet> denote_plural(const Model& m, const World& s, const Valuation& v,
                                        const Term& tt) {
  switch (tt.kind()) {
    case Term::Kind::PluralVar: {
      auto it = v.plural.find(tt.name());
      if (it == v.plural.end()) throw Error("unassigned variable: " + tt.name());
      auto at = it->second.find(s);
      if (at == it->second.end()) return std::nullopt;
      return at->second;
    }
    case Term::Kind::PluralConst: {
      auto it = m.plural_consts.find(tt.name());
      if (it == m.plural_consts.end()) throw Error("undeclared symbol: " + tt.name());
      for (const auto& [w, es] : it->second) {
        if (w == s) return es;
      }
      return std::nullopt;
    }
    case Term::Kind::Adjunction: {
      auto base = denote_plural(m, s, v, tt.base());
      if (!base) return std::nullopt;
      base->insert(singular_value(m, v, tt.adjunct()));
      return base;
    }
    default:
      throw Error("type clash: singular term where a plural term is required");
  }
}

bool satisfies(const Model& m, const World& s, const Valuation& v, const Formula& f) {
  require_valid(m);
  if (std::find(m.worlds.begin(), m.worlds.end(), s) == m.worlds.end()) {
    throw Error("unknown world: " + s);
  }
  require_mode(m, f);
  const auto vdiags = validate_valuation(m, v);
  if (!vdiags.empty()) throw Error("invalid valuation: " + vdiags.front());

  const detail::Program prog = detail::compile({f}, infer_signature(f));
  detail::Structure st;
  const detail::Naming names = detail::load_structure(m, prog, st);
  detail::Evaluator ev{prog};
  ev.bind(st);

  std::map<Element, int> eidx;
  for (std::size_t i = 0; i < names.elements.size(); ++i) eidx[names.elements[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < prog.free_singular.size(); ++i) {
    auto it = v.singular.find(prog.free_singular[i]);
    if (it == v.singular.end()) throw Error("unassigned variable: " + prog.free_singular[i]);
    ev.sval(static_cast<int>(i)) = eidx.at(it->second);
  }
  for (std::size_t i = 0; i < prog.free_plural.size(); ++i) {
    auto it = v.plural.find(prog.free_plural[i]);
    if (it == v.plural.end()) throw Error("unassigned variable: " + prog.free_plural[i]);
    for (int w = 0; w < st.nW; ++w) {
      detail::Mask mk = 0;
      auto at = it->second.find(names.worlds[w]);
      if (at != it->second.end()) {
        for (const auto& e : at->second) mk |= detail::Mask{1} << eidx.at(e);
      }
      ev.pval(static_cast<int>(i), w) = mk;
    }
  }
  const int wi = static_cast<int>(
      std::lower_bound(names.worlds.begin(), names.worlds.end(), s) - names.worlds.begin());
  return ev.eval(prog.roots[0], wi);
}

bool true_in_model(const Model& m, const Formula& f) {
  require_valid(m);
  require_mode(m, f);
  const detail::Program prog = detail::compile({f}, infer_signature(f));
  detail::Structure st;
  (void)detail::load_structure(m, prog, st);
  detail::Evaluator ev{prog};
  ev.bind(st);
  for (int w = 0; w < st.nW; ++w) {
    if (ev.sweep_free(w, [&] { return !ev.eval(prog.roots[0], w); })) return false;
  }
  return true;
}

}  // namespace pluralis
