#pragma once

// Seeded random formulas, models and valuations for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pluralis/formula.hpp"
#include "pluralis/model.hpp"
#include "pluralis/search.hpp"

namespace pluralis::testkit {

struct Vocabulary {
  std::vector<std::string> sconsts{"a", "b"};
  std::vector<std::string> pconsts{"aa"};
  std::vector<std::pair<std::string, int>> spreds{{"P", 1}, {"R", 2}};
  std::vector<std::string> ppreds{"FF"};
  std::vector<std::string> svars{"x", "y", "z"};
  std::vector<std::string> pvars{"xx", "yy"};
  bool modal = true;
  bool existence = false;
  bool quantifiers = true;
  bool plural_quantifiers = true;
  bool abbreviations = true;
  bool adjunction = true;
};

class FormulaGenerator {
public:
  FormulaGenerator(Vocabulary voc, std::uint32_t seed) : voc_{std::move(voc)}, rng_{seed} {}

  std::mt19937& rng() { return rng_; }
  const Vocabulary& vocabulary() const { return voc_; }

  Term singular_term() {
    const std::size_t n = voc_.svars.size() + voc_.sconsts.size();
    const std::size_t k = pick(n);
    if (k < voc_.svars.size()) return svar(voc_.svars[k]);
    return sconst(voc_.sconsts[k - voc_.svars.size()]);
  }

  Term plural_term(int depth = 1) {
    if (voc_.adjunction && depth > 0 && chance(0.2)) {
      return adjoin(plural_term(depth - 1), singular_term());
    }
    const std::size_t n = voc_.pvars.size() + voc_.pconsts.size();
    const std::size_t k = pick(n);
    if (k < voc_.pvars.size()) return pvar(voc_.pvars[k]);
    return pconst(voc_.pconsts[k - voc_.pvars.size()]);
  }

  Formula atom() {
    for (;;) {
      switch (pick(7)) {
        case 0:
          if (voc_.spreds.empty()) continue;
          {
            const auto& [name, arity] = voc_.spreds[pick(voc_.spreds.size())];
            std::vector<Term> args;
            for (int i = 0; i < arity; ++i) args.push_back(singular_term());
            return predicate(name, std::move(args));
          }
        case 1:
          if (voc_.ppreds.empty() || !has_plural_terms()) continue;
          return plural_predicate(voc_.ppreds[pick(voc_.ppreds.size())], plural_term());
        case 2:
        case 3:
          if (!has_plural_terms()) continue;
          return one_of(singular_term(), plural_term());
        case 4:
          return equals(singular_term(), singular_term());
        case 5:
          if (!voc_.existence) continue;
          if (has_plural_terms() && chance(0.5)) return exists_pred(plural_term());
          return exists_pred(singular_term());
        default:
          if (!voc_.abbreviations || !has_plural_terms()) continue;
          return same_things(plural_term(), plural_term());
      }
    }
  }

  Formula formula(int depth) {
    if (depth <= 0 || chance(0.15)) return atom();
    for (;;) {
      switch (pick(10)) {
        case 0:
          return neg(formula(depth - 1));
        case 1:
          return conj(formula(depth - 1), formula(depth - 1));
        case 2:
          return disj(formula(depth - 1), formula(depth - 1));
        case 3:
          return implies(formula(depth - 1), formula(depth - 1));
        case 4:
          return iff(formula(depth - 1), formula(depth - 1));
        case 5:
          if (!voc_.modal) continue;
          return box(formula(depth - 1));
        case 6:
          if (!voc_.modal || !voc_.abbreviations) continue;
          return diamond(formula(depth - 1));
        case 7:
        case 8:
          if (!voc_.quantifiers || voc_.svars.empty()) continue;
          {
            const std::string& v = voc_.svars[pick(voc_.svars.size())];
            return chance(0.5) ? forall(v, formula(depth - 1)) : exists(v, formula(depth - 1));
          }
        default:
          if (!voc_.plural_quantifiers || voc_.pvars.empty()) continue;
          {
            const std::string& v = voc_.pvars[pick(voc_.pvars.size())];
            return chance(0.5) ? forall(v, formula(depth - 1)) : exists(v, formula(depth - 1));
          }
      }
    }
  }

  bool chance(double p) { return std::bernoulli_distribution{p}(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng_); }

private:
  bool has_plural_terms() const { return !voc_.pvars.empty() || !voc_.pconsts.empty(); }

  Vocabulary voc_;
  std::mt19937 rng_;
};

inline Signature vocabulary_signature(const Vocabulary& voc) {
  Signature sig;
  sig.singular_consts.insert(voc.sconsts.begin(), voc.sconsts.end());
  sig.plural_consts.insert(voc.pconsts.begin(), voc.pconsts.end());
  for (const auto& [p, k] : voc.spreds) sig.singular_preds[p] = k;
  sig.plural_preds.insert(voc.ppreds.begin(), voc.ppreds.end());
  sig.has_existence_pred = voc.existence;
  return sig;
}

namespace detail {

inline ElementSet random_subset(std::mt19937& rng, const std::vector<Element>& dom, bool nonempty) {
  std::bernoulli_distribution coin{0.5};
  for (;;) {
    ElementSet s;
    for (const auto& d : dom) {
      if (coin(rng)) s.insert(d);
    }
    if (!nonempty || !s.empty()) return s;
  }
}

inline void all_tuples(const std::vector<Element>& dom, int k, Tuple& cur, std::vector<Tuple>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (const auto& d : dom) {
    cur.push_back(d);
    all_tuples(dom, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Random model over `sig` with worlds w1..wn and elements d1..dm.  Plural
// constants are left undefined at a world with probability `gap`.
inline Model random_model(std::mt19937& rng, const Signature& sig, int worlds, int elements,
                          DomainMode mode, FrameClass fc = FrameClass::K, double gap = 0.2) {
  Model m;
  for (int i = 1; i <= worlds; ++i) m.worlds.push_back("w" + std::to_string(i));
  for (int i = 1; i <= elements; ++i) m.domain.push_back("d" + std::to_string(i));
  std::bernoulli_distribution coin{0.5};
  std::bernoulli_distribution undefined{gap};
  for (const auto& u : m.worlds) {
    for (const auto& w : m.worlds) {
      if (coin(rng)) m.access.emplace(u, w);
    }
  }
  if (fc != FrameClass::K) {
    for (const auto& w : m.worlds) m.access.emplace(w, w);
  }
  if (fc == FrameClass::S5) {
    auto sym = m.access;
    for (const auto& [u, w] : sym) m.access.emplace(w, u);
  }
  if (fc == FrameClass::S4 || fc == FrameClass::S5) {
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& [u, w] : std::set<std::pair<World, World>>(m.access)) {
        for (const auto& v : m.worlds) {
          if (m.access.contains({w, v}) && m.access.emplace(u, v).second) grew = true;
        }
      }
    }
  }
  if (mode == DomainMode::Variable) {
    m.inner_domains.emplace();
    for (const auto& w : m.worlds) (*m.inner_domains)[w] = detail::random_subset(rng, m.domain, false);
  }
  std::uniform_int_distribution<std::size_t> elem{0, m.domain.size() - 1};
  for (const auto& c : sig.singular_consts) m.singular_consts[c] = m.domain[elem(rng)];
  for (const auto& c : sig.plural_consts) {
    auto& ext = m.plural_consts[c];
    for (const auto& w : m.worlds) {
      if (!undefined(rng)) ext.emplace_back(w, detail::random_subset(rng, m.domain, true));
    }
  }
  for (const auto& [p, k] : sig.singular_preds) {
    std::vector<Tuple> tuples;
    Tuple cur;
    detail::all_tuples(m.domain, k, cur, tuples);
    auto& ext = m.singular_preds[p];
    for (const auto& w : m.worlds) {
      auto& at = ext[w];
      for (const auto& t : tuples) {
        if (coin(rng)) at.insert(t);
      }
    }
  }
  for (const auto& p : sig.plural_preds) {
    auto& ext = m.plural_preds[p];
    for (const auto& w : m.worlds) {
      auto& at = ext[w];
      const int members = std::uniform_int_distribution<int>{0, 3}(rng);
      for (int i = 0; i < members; ++i) at.insert(detail::random_subset(rng, m.domain, true));
    }
  }
  return m;
}

// Assigns every listed variable.  Plural variables are total in fixed mode
// and undefined at a world with probability `gap` in variable mode.
inline Valuation random_valuation(std::mt19937& rng, const Model& m, const std::vector<std::string>& svars,
                                  const std::vector<std::string>& pvars, double gap = 0.25) {
  Valuation v;
  std::uniform_int_distribution<std::size_t> elem{0, m.domain.size() - 1};
  std::bernoulli_distribution undefined{gap};
  for (const auto& x : svars) v.singular[x] = m.domain[elem(rng)];
  for (const auto& xx : pvars) {
    auto& ext = v.plural[xx];
    for (const auto& w : m.worlds) {
      if (m.mode() == DomainMode::Variable && undefined(rng)) continue;
      ext[w] = detail::random_subset(rng, m.domain, true);
    }
  }
  return v;
}

}  // namespace pluralis::testkit
