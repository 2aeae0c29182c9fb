#include "pluralis/search.hpp"

#include <cmath>
#include <stdexcept>

#include "engine.hpp"
#include "enumerator.hpp"
#include "pluralis/error.hpp"
#include "pluralis/model_io.hpp"
#include "pluralis/semantics.hpp"
#include "pluralis/syntax.hpp"

namespace pluralis {

const char* frame_class_name(FrameClass fc) {
  switch (fc) {
    case FrameClass::K: return "K";
    case FrameClass::T: return "T";
    case FrameClass::S4: return "S4";
    case FrameClass::S5: return "S5";
  }
  return "?";
}

FrameClass parse_frame_class(std::string_view text) {
  if (text == "K") return FrameClass::K;
  if (text == "T") return FrameClass::T;
  if (text == "S4") return FrameClass::S4;
  if (text == "S5") return FrameClass::S5;
  throw Error("unknown frame class '" + std::string{text} + "' (expected K, T, S4 or S5)");
}

namespace {

// Product of plural-quantifier ranges along the costliest nesting path.
double quantifier_product(const detail::Program& p, int node, int worlds, double values) {
  const detail::Node& n = p.nodes[node];
  double below = 1;
  if (n.a >= 0) below = quantifier_product(p, n.a, worlds, values);
  if (n.b >= 0) below = std::max(below, quantifier_product(p, n.b, worlds, values));
  if (n.op == detail::Op::AllP || n.op == detail::Op::SomeP) {
    below *= std::pow(values, n.depth == 0 ? 1 : worlds);
  }
  return below;
}

double estimate(const detail::Program& p, const Signature& sig, const SearchBounds& b, bool modal) {
  double total = 0;
  for (int w = 1; w <= b.max_worlds; ++w) {
    for (int d = 1; d <= b.max_domain; ++d) {
      const double models =
          static_cast<double>(detail::StructureEnumerator::count_at(sig, b, w, d, modal));
      const double values = std::ldexp(1.0, d) - (b.mode == DomainMode::Fixed ? 1 : 0);
      const int relevant = p.max_depth == 0 ? 1 : w;
      double free_space = std::pow(static_cast<double>(d), static_cast<double>(p.free_singular.size()));
      free_space *= std::pow(values, static_cast<double>(relevant * p.free_plural.size()));
      double quant = 1;
      for (int r : p.roots) quant = std::max(quant, quantifier_product(p, r, w, values));
      total += models * w * free_space * quant;
    }
  }
  return total;
}

struct Query {
  std::vector<Formula> formulas;  // premises, then the conclusion
  Signature sig;
};

Query prepare(const std::vector<Formula>& premises, const Formula& conclusion,
              const Signature* extra, const SearchBounds& b) {
  Query q;
  q.formulas = premises;
  q.formulas.push_back(conclusion);
  if (extra) q.sig = *extra;
  for (const auto& f : q.formulas) {
    if (b.mode == DomainMode::Fixed && uses_existence(f)) {
      throw Error("existence predicate used in fixed-domain mode");
    }
    q.sig.merge(infer_signature(f));
  }
  q.sig.has_existence_pred = b.mode == DomainMode::Variable;
  return q;
}

Valuation read_valuation(detail::Evaluator& ev, const Model& m) {
  const detail::Program& p = ev.program();
  const detail::Structure& s = ev.structure();
  Valuation v;
  for (std::size_t i = 0; i < p.free_singular.size(); ++i) {
    v.singular[p.free_singular[i]] = m.domain[ev.sval(static_cast<int>(i))];
  }
  for (std::size_t i = 0; i < p.free_plural.size(); ++i) {
    auto& per_world = v.plural[p.free_plural[i]];
    for (int w = 0; w < s.nW; ++w) {
      const detail::Mask mk = ev.pval(static_cast<int>(i), w);
      if (mk == 0) continue;
      ElementSet es;
      for (int e = 0; e < s.nD; ++e) {
        if ((mk >> e) & 1U) es.insert(m.domain[e]);
      }
      per_world[m.worlds[w]] = std::move(es);
    }
  }
  return v;
}

void self_check(const Countermodel& cm, const Query& q) {
  const auto diags = validate_model(cm.model);
  if (!diags.empty()) throw std::logic_error("search produced an invalid model: " + diags.front());
  for (std::size_t i = 0; i + 1 < q.formulas.size(); ++i) {
    if (!satisfies(cm.model, cm.world, cm.valuation, q.formulas[i])) {
      throw std::logic_error("countermodel fails premise " + print_formula(q.formulas[i]));
    }
  }
  if (satisfies(cm.model, cm.world, cm.valuation, q.formulas.back())) {
    throw std::logic_error("countermodel satisfies " + print_formula(q.formulas.back()));
  }
}

Verdict run(const Query& q, const SearchBounds& b, const SearchOptions& o) {
  const detail::Program prog = detail::compile(q.formulas, q.sig);
  bool modal = false;
  for (const auto& f : q.formulas) modal = modal || is_modal(f);
  // Truth of a non-modal query does not depend on the frame, and the frame
  // is the most significant digit, so the first frame of each size suffices.
  detail::StructureEnumerator en{q.sig, b, modal};
  const double est = estimate(prog, q.sig, b, modal);
  if (est > o.sweep_ceiling) throw SweepCeilingExceeded(est, o.sweep_ceiling);

  Verdict verdict;
  verdict.bounds = b;
  detail::Evaluator ev{prog};
  const std::size_t n_premises = prog.roots.size() - 1;
  while (en.next()) {
    ++verdict.models_examined;
    ev.bind(en.current());
    for (int w = 0; w < en.current().nW; ++w) {
      const bool found = ev.sweep_free(w, [&] {
        for (std::size_t i = 0; i < n_premises; ++i) {
          if (!ev.eval(prog.roots[i], w)) return false;
        }
        return !ev.eval(prog.roots.back(), w);
      });
      if (!found) continue;
      Countermodel cm;
      cm.model = detail::to_model(en.current(), q.sig);
      cm.world = cm.model.worlds[w];
      cm.valuation = read_valuation(ev, cm.model);
      self_check(cm, q);
      verdict.countermodel = std::move(cm);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace

double estimate_sweep(const std::vector<Formula>& formulas, const Signature& sig,
                      const SearchBounds& bounds) {
  if (formulas.empty()) return 0;
  std::vector<Formula> premises(formulas.begin(), formulas.end() - 1);
  const Query q = prepare(premises, formulas.back(), &sig, bounds);
  bool modal = false;
  for (const auto& f : q.formulas) modal = modal || is_modal(f);
  return estimate(detail::compile(q.formulas, q.sig), q.sig, bounds, modal);
}

Verdict check_validity(const Formula& f, const SearchBounds& bounds, const SearchOptions& options) {
  return run(prepare({}, f, nullptr, bounds), bounds, options);
}

Verdict check_validity(const Formula& f, const Signature& extra, const SearchBounds& bounds,
                       const SearchOptions& options) {
  return run(prepare({}, f, &extra, bounds), bounds, options);
}

Verdict check_entailment(const AuditQuery& q, const SearchOptions& options) {
  return run(prepare(q.premises, q.conclusion, nullptr, q.bounds), q.bounds, options);
}

DesignatedModel canonical_necinc_countermodel(DomainMode mode) {
  DesignatedModel d;
  d.model.worlds = {"0", "1"};
  d.model.access = {{"0", "1"}, {"1", "0"}};
  d.model.domain = {"e", "pi"};
  if (mode == DomainMode::Variable) {
    d.model.inner_domains = std::map<World, ElementSet>{{"0", {"e", "pi"}}, {"1", {"e", "pi"}}};
  }
  d.world = "0";
  d.valuation.singular["x"] = "pi";
  d.valuation.plural["xx"] = {{"0", {"pi"}}, {"1", {"e"}}};
  return d;
}

nlohmann::json bounds_to_json(const SearchBounds& b) {
  return nlohmann::json{{"max_worlds", b.max_worlds},
                        {"max_domain", b.max_domain},
                        {"frame_class", frame_class_name(b.frame_class)},
                        {"mode", mode_name(b.mode)}};
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json j{{"verdict", v.valid() ? "valid-up-to-bounds" : "countermodel"},
                   {"bounds", bounds_to_json(v.bounds)},
                   {"models_examined", v.models_examined}};
  if (v.countermodel) {
    j["countermodel"] = nlohmann::json{{"model", model_to_json(v.countermodel->model)},
                                       {"world", v.countermodel->world},
                                       {"valuation", valuation_to_json(v.countermodel->valuation)}};
  }
  return j;
}

}  // namespace pluralis
