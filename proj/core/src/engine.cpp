#include "engine.hpp"

#include <map>

#include "pluralis/error.hpp"

namespace pluralis::detail {

namespace {

using K = Formula::Kind;

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

bool test_bit(const std::vector<Mask>& bits, std::size_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1U;
}

template <typename Container>
std::map<std::string, int> index_of(const Container& names) {
  std::map<std::string, int> out;
  int i = 0;
  for (const auto& n : names) out.emplace(n, i++);
  return out;
}

class Compiler {
public:
  Compiler(Program& p, const Signature& sig) : p_{p} {
    p_.sconsts.assign(sig.singular_consts.begin(), sig.singular_consts.end());
    p_.pconsts.assign(sig.plural_consts.begin(), sig.plural_consts.end());
    p_.ppreds.assign(sig.plural_preds.begin(), sig.plural_preds.end());
    for (const auto& [name, arity] : sig.singular_preds) {
      p_.spreds.push_back(name);
      p_.spred_arity.push_back(arity);
    }
    sconst_ = index_of(p_.sconsts);
    pconst_ = index_of(p_.pconsts);
    spred_ = index_of(p_.spreds);
    ppred_ = index_of(p_.ppreds);
  }

  void bind_free(const FreeVariables& fv) {
    for (const auto& x : fv.singular) {
      p_.free_singular.push_back(x);
      scope_[x].push_back(p_.n_sslots++);
    }
    for (const auto& xx : fv.plural) {
      p_.free_plural.push_back(xx);
      scope_[xx].push_back(p_.n_pslots++);
    }
  }

  int formula(const Formula& f) {
    Node n;
    n.depth = modal_depth(f);
    n.closed = free_variables(f).empty();
    const auto& ts = f.terms();
    switch (f.kind()) {
      case K::SingularPred: {
        n.op = Op::SPred;
        n.sym = lookup(spred_, f.name());
        const int arity = p_.spred_arity[n.sym];
        if (arity != static_cast<int>(ts.size())) {
          throw Error("arity mismatch: " + f.name() + " has arity " + std::to_string(arity));
        }
        for (const auto& t : ts) n.args.push_back(singular(t));
        break;
      }
      case K::PluralPred:
        n.op = Op::PPred;
        n.sym = lookup(ppred_, f.name());
        n.pt = plural(ts.at(0));
        break;
      case K::IsOneOf:
        n.op = Op::In;
        n.args.push_back(singular(ts.at(0)));
        n.pt = plural(ts.at(1));
        break;
      case K::Identity:
        n.op = Op::Eq;
        n.args.push_back(singular(ts.at(0)));
        n.args.push_back(singular(ts.at(1)));
        break;
      case K::ExistsPredS:
        n.op = Op::ExistS;
        n.args.push_back(singular(ts.at(0)));
        break;
      case K::ExistsPredP:
        n.op = Op::ExistP;
        n.pt = plural(ts.at(0));
        break;
      case K::Not:
        n.op = Op::Not;
        n.a = formula(f.operand());
        break;
      case K::Box:
        n.op = Op::Box;
        n.a = formula(f.operand());
        break;
      case K::And:
      case K::Or:
      case K::Implies:
      case K::Iff:
        n.op = f.kind() == K::And ? Op::And
             : f.kind() == K::Or  ? Op::Or
             : f.kind() == K::Implies ? Op::Implies
                                      : Op::Iff;
        n.a = formula(f.lhs());
        n.b = formula(f.rhs());
        break;
      case K::ForallS:
      case K::ExistsS:
      case K::ForallP:
      case K::ExistsP: {
        const bool plural_q = f.kind() == K::ForallP || f.kind() == K::ExistsP;
        n.op = f.kind() == K::ForallS ? Op::AllS
             : f.kind() == K::ExistsS ? Op::SomeS
             : f.kind() == K::ForallP ? Op::AllP
                                      : Op::SomeP;
        n.slot = plural_q ? p_.n_pslots++ : p_.n_sslots++;
        auto& stack = scope_[f.name()];
        stack.push_back(n.slot);
        n.a = formula(f.body());
        stack.pop_back();
        break;
      }
      case K::Diamond:
      case K::SamePlurality:
        throw Error("internal: abbreviation reached the compiler");
    }
    p_.nodes.push_back(std::move(n));
    return static_cast<int>(p_.nodes.size()) - 1;
  }

private:
  static int lookup(const std::map<std::string, int>& table, const std::string& name) {
    auto it = table.find(name);
    if (it == table.end()) throw Error("undeclared symbol: " + name);
    return it->second;
  }

  int slot_of(const std::string& name) {
    auto it = scope_.find(name);
    if (it == scope_.end() || it->second.empty()) throw Error("unbound variable: " + name);
    return it->second.back();
  }

  STerm singular(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::SingularVar: return STerm{true, slot_of(t.name())};
      case Term::Kind::SingularConst: return STerm{false, lookup(sconst_, t.name())};
      default: throw Error("type clash: plural term in singular position");
    }
  }

  int plural(const Term& t) {
    PTerm pt;
    switch (t.kind()) {
      case Term::Kind::PluralVar:
        pt.kind = PTerm::Kind::Var;
        pt.idx = slot_of(t.name());
        break;
      case Term::Kind::PluralConst:
        pt.kind = PTerm::Kind::Const;
        pt.idx = lookup(pconst_, t.name());
        break;
      case Term::Kind::Adjunction:
        pt.kind = PTerm::Kind::Adj;
        pt.base = plural(t.base());
        pt.adjunct = singular(t.adjunct());
        break;
      default:
        throw Error("type clash: singular term in plural position");
    }
    p_.pterms.push_back(pt);
    return static_cast<int>(p_.pterms.size()) - 1;
  }

  Program& p_;
  std::map<std::string, int> sconst_, pconst_, spred_, ppred_;
  std::map<std::string, std::vector<int>> scope_;
};

}  // namespace

void Structure::reset(int worlds, int elements, bool var_mode, std::size_t n_sconst,
                      std::size_t n_pconst, const std::vector<int>& spred_arity,
                      std::size_t n_ppred) {
  if (worlds < 1 || worlds > kMaxEngineWorlds) throw Error("too many worlds for evaluation");
  if (elements < 1 || elements > kMaxEngineDomain) throw Error("domain too large for evaluation");
  nW = worlds;
  nD = elements;
  variable = var_mode;
  const Mask all = elements == 64 ? ~Mask{0} : (Mask{1} << elements) - 1;
  succ.assign(nW, 0);
  inner.assign(nW, all);
  sconst.assign(n_sconst, 0);
  pconst.assign(n_pconst * nW, 0);
  spred.assign(spred_arity.size() * nW, {});
  for (std::size_t p = 0; p < spred_arity.size(); ++p) {
    for (int w = 0; w < nW; ++w) {
      spred[p * nW + w].assign(words_for(ipow(nD, spred_arity[p])), 0);
    }
  }
  ppred.assign(n_ppred * nW, std::vector<Mask>(words_for(std::size_t{1} << nD), 0));
}

Program compile(const std::vector<Formula>& roots, const Signature& sig) {
  Program p;
  Compiler c{p, sig};
  std::vector<Formula> expanded;
  FreeVariables fv;
  for (const auto& r : roots) {
    expanded.push_back(expand_abbreviations(r));
    const FreeVariables f = free_variables(expanded.back());
    fv.singular.insert(f.singular.begin(), f.singular.end());
    fv.plural.insert(f.plural.begin(), f.plural.end());
  }
  c.bind_free(fv);
  for (const auto& f : expanded) {
    p.roots.push_back(c.formula(f));
    p.max_depth = std::max(p.max_depth, modal_depth(f));
  }
  return p;
}

Evaluator::Evaluator(const Program& program) : p_{program} {}

void Evaluator::bind(const Structure& s) {
  s_ = &s;
  sval_.assign(p_.n_sslots, 0);
  pval_.assign(static_cast<std::size_t>(p_.n_pslots) * s.nW, lowest_plural());
  cache_.assign(p_.nodes.size() * s.nW, -1);
  reach_.assign(p_.max_depth + 1, std::vector<Mask>(s.nW, 0));
  for (int w = 0; w < s.nW; ++w) reach_[0][w] = Mask{1} << w;
  for (int d = 1; d <= p_.max_depth; ++d) {
    for (int w = 0; w < s.nW; ++w) {
      Mask r = reach_[d - 1][w];
      for (int u = 0; u < s.nW; ++u) {
        if ((reach_[d - 1][w] >> u) & 1U) r |= s.succ[u];
      }
      reach_[d][w] = r;
    }
  }
}

Mask Evaluator::reach(int world, int depth) const {
  if (depth > p_.max_depth) depth = p_.max_depth;
  return reach_[depth][world];
}

Mask Evaluator::pdenote(int pt, int world) const {
  const PTerm& t = p_.pterms[pt];
  switch (t.kind) {
    case PTerm::Kind::Var: return pval_[static_cast<std::size_t>(t.idx) * s_->nW + world];
    case PTerm::Kind::Const: return s_->pconst[static_cast<std::size_t>(t.idx) * s_->nW + world];
    case PTerm::Kind::Adj: {
      const Mask base = pdenote(t.base, world);
      return base == 0 ? 0 : base | (Mask{1} << sdenote(t.adjunct));
    }
  }
  return 0;
}

bool Evaluator::eval(int node, int world) {
  const Node& n = p_.nodes[node];
  if (!n.closed || n.a < 0) return compute(node, world);
  std::int8_t& slot = cache_[static_cast<std::size_t>(node) * s_->nW + world];
  if (slot < 0) slot = compute(node, world) ? 1 : 0;
  return slot == 1;
}

bool Evaluator::compute(int node, int world) {
  const Node& n = p_.nodes[node];
  const Structure& s = *s_;
  switch (n.op) {
    case Op::SPred: {
      std::size_t code = 0;
      for (const auto& a : n.args) code = code * s.nD + sdenote(a);
      return test_bit(s.spred[static_cast<std::size_t>(n.sym) * s.nW + world], code);
    }
    case Op::PPred: {
      const Mask m = pdenote(n.pt, world);
      return m != 0 && test_bit(s.ppred[static_cast<std::size_t>(n.sym) * s.nW + world], m);
    }
    case Op::In: {
      const Mask m = pdenote(n.pt, world);
      return m != 0 && ((m >> sdenote(n.args[0])) & 1U);
    }
    case Op::Eq:
      return sdenote(n.args[0]) == sdenote(n.args[1]);
    case Op::ExistS:
      return (s.inner[world] >> sdenote(n.args[0])) & 1U;
    case Op::ExistP: {
      const Mask m = pdenote(n.pt, world);
      return m != 0 && (m & ~s.inner[world]) == 0;
    }
    case Op::Not:
      return !eval(n.a, world);
    case Op::And:
      return eval(n.a, world) && eval(n.b, world);
    case Op::Or:
      return eval(n.a, world) || eval(n.b, world);
    case Op::Implies:
      return !eval(n.a, world) || eval(n.b, world);
    case Op::Iff:
      return eval(n.a, world) == eval(n.b, world);
    case Op::Box: {
      for (int u = 0; u < s.nW; ++u) {
        if (((s.succ[world] >> u) & 1U) && !eval(n.a, u)) return false;
      }
      return true;
    }
    case Op::AllS:
    case Op::SomeS: {
      const bool universal = n.op == Op::AllS;
      int& v = sval_[n.slot];
      const int saved = v;
      bool result = universal;
      for (int e = 0; e < s.nD; ++e) {
        v = e;
        if (eval(n.a, world) != universal) {
          result = !universal;
          break;
        }
      }
      v = saved;
      return result;
    }
    case Op::AllP:
    case Op::SomeP: {
      const bool universal = n.op == Op::AllP;
      const Mask lo = lowest_plural();
      const Mask hi = (Mask{1} << s.nD) - 1;
      int ws[kMaxEngineWorlds];
      Mask saved[kMaxEngineWorlds];
      int k = 0;
      const Mask r = reach(world, n.depth);
      Mask* base = &pval_[static_cast<std::size_t>(n.slot) * s.nW];
      for (int u = 0; u < s.nW; ++u) {
        if ((r >> u) & 1U) {
          ws[k] = u;
          saved[k] = base[u];
          base[u] = lo;
          ++k;
        }
      }
      bool result = universal;
      for (;;) {
        if (eval(n.a, world) != universal) {
          result = !universal;
          break;
        }
        int i = k - 1;
        while (i >= 0 && base[ws[i]] == hi) {
          base[ws[i]] = lo;
          --i;
        }
        if (i < 0) break;
        ++base[ws[i]];
      }
      for (int i = 0; i < k; ++i) base[ws[i]] = saved[i];
      return result;
    }
  }
  return false;
}

bool Evaluator::sweep_free(int world, const std::function<bool()>& visit) {
  const Structure& s = *s_;
  const Mask lo = lowest_plural();
  const Mask hi = (Mask{1} << s.nD) - 1;
  const int ns = static_cast<int>(p_.free_singular.size());
  const int np = static_cast<int>(p_.free_plural.size());
  for (int i = 0; i < ns; ++i) sval_[i] = 0;
  for (int i = 0; i < np; ++i) {
    for (int u = 0; u < s.nW; ++u) pval(i, u) = lo;
  }
  // Odometer cells: singular slots first, then (plural slot, world) pairs.
  std::vector<Mask*> pcells;
  const Mask r = reach(world, p_.max_depth);
  for (int i = 0; i < np; ++i) {
    for (int u = 0; u < s.nW; ++u) {
      if ((r >> u) & 1U) pcells.push_back(&pval(i, u));
    }
  }
  for (;;) {
    if (visit()) return true;
    int i = static_cast<int>(pcells.size()) - 1;
    while (i >= 0 && *pcells[i] == hi) {
      *pcells[i] = lo;
      --i;
    }
    if (i >= 0) {
      ++*pcells[i];
      continue;
    }
    int j = ns - 1;
    while (j >= 0 && sval_[j] == s.nD - 1) {
      sval_[j] = 0;
      --j;
    }
    if (j < 0) return false;
    ++sval_[j];
  }
}

}  // namespace pluralis::detail
