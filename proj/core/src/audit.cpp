#include "pluralis/audit.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "pluralis/error.hpp"
#include "pluralis/model_io.hpp"
#include "pluralis/syntax.hpp"

namespace pluralis {

using JK = Justification::Kind;

namespace {

constexpr std::pair<JK, const char*> kJustNames[] = {
    {JK::Premise, "Premise"},
    {JK::Assumption, "Assumption"},
    {JK::ModusPonens, "ModusPonens"},
    {JK::Necessitation, "Necessitation"},
    {JK::KDist, "KDist"},
    {JK::CP, "CP"},
    {JK::Instantiation, "Instantiation"},
    {JK::SemanticStep, "SemanticStep"},
};

struct Analysis {
  std::vector<std::set<int>> open;  // per step, 1-based indices
  std::map<int, std::string> violations;
};

std::string step_word(int i) { return "step " + std::to_string(i); }

// Strips the universal prefix over exactly the substituted variables.
std::optional<Formula> strip_prefix(const Formula& f, const Substitution& sigma) {
  std::set<Variable> pending;
  for (const auto& [v, _] : sigma) pending.insert(v);
  Formula cur = f;
  while (!pending.empty()) {
    if (cur.kind() != Formula::Kind::ForallS && cur.kind() != Formula::Kind::ForallP) return std::nullopt;
    if (pending.erase(cur.bound_variable()) == 0) return std::nullopt;
    cur = cur.body();
  }
  return cur;
}

Analysis analyse(const ArgumentScript& script) {
  Analysis a;
  const int n = static_cast<int>(script.steps.size());
  a.open.resize(n + 1);
  for (int i = 1; i <= n; ++i) {
    const Step& step = script.steps[i - 1];
    const Justification& j = step.just;
    auto fail = [&](std::string msg) {
      if (!a.violations.contains(i)) a.violations[i] = std::move(msg);
    };
    std::size_t want_min = 0;
    std::size_t want_max = 0;
    switch (j.kind) {
      case JK::Premise:
      case JK::Assumption: break;
      case JK::ModusPonens: want_min = 2; want_max = SIZE_MAX; break;
      case JK::Necessitation:
      case JK::KDist:
      case JK::Instantiation: want_min = want_max = 1; break;
      case JK::CP: want_min = want_max = 2; break;
      case JK::SemanticStep: want_max = SIZE_MAX; break;
    }
    if (j.refs.size() < want_min || j.refs.size() > want_max) {
      fail(std::string{justification_name(j.kind)} + " cites " + std::to_string(j.refs.size()) +
           " steps");
    }
    bool refs_ok = true;
    for (int r : j.refs) {
      if (r < 1 || r >= i) {
        fail("cites " + step_word(r) + ", which does not precede " + step_word(i));
        refs_ok = false;
      }
    }
    std::set<int>& open = a.open[i];
    switch (j.kind) {
      case JK::Premise: break;
      case JK::Assumption: open.insert(i); break;
      case JK::ModusPonens:
      case JK::KDist:
      case JK::SemanticStep:
      case JK::Instantiation:
        for (int r : j.refs) {
          if (r >= 1 && r < i) open.insert(a.open[r].begin(), a.open[r].end());
        }
        break;
      case JK::Necessitation:
        if (refs_ok && j.refs.size() == 1) {
          const int r = j.refs[0];
          if (!a.open[r].empty()) {
            fail("necessitation of " + step_word(r) + ", which depends on open assumptions");
          } else if (!(step.formula == box(script.steps[r - 1].formula))) {
            fail("necessitation must box the formula of " + step_word(r));
          }
        }
        break;
      case JK::CP:
        if (refs_ok && j.refs.size() == 2) {
          const int as = j.refs[0];
          const int r = j.refs[1];
          open = a.open[r];
          open.erase(as);
          if (script.steps[as - 1].just.kind != JK::Assumption) {
            fail("CP discharges " + step_word(as) + ", which is not an assumption");
          } else if (!a.open[r].contains(as)) {
            fail("assumption " + std::to_string(as) + " is not open at " + step_word(r));
          } else if (!(step.formula == implies(script.steps[as - 1].formula, script.steps[r - 1].formula))) {
            fail("CP must conclude A -> B from assumption A and step B");
          }
        }
        break;
    }
    if (j.kind == JK::Instantiation && refs_ok && j.refs.size() == 1) {
      const Formula& cited = script.steps[j.refs[0] - 1].formula;
      if (j.substitution.empty()) {
        fail("instantiation without a substitution");
      } else {
        const auto body = strip_prefix(cited, j.substitution);
        if (!body) {
          fail(step_word(j.refs[0]) + " lacks a universal prefix over the substituted variables");
        } else if (!(substitute(*body, j.substitution) == step.formula)) {
          fail("formula is not the instance of " + step_word(j.refs[0]) + " under the substitution");
        }
      }
    }
  }
  return a;
}

void ancestry(const ArgumentScript& script, int i, std::set<int>& out) {
  for (int r : script.steps[i - 1].just.refs) {
    if (r >= 1 && r < i && out.insert(r).second) ancestry(script, r, out);
  }
}

Formula boxes(Formula f, int n) {
  for (int i = 0; i < n; ++i) f = box(f);
  return f;
}

void push_unique(std::vector<Formula>& xs, const Formula& f) {
  if (std::find(xs.begin(), xs.end(), f) == xs.end()) xs.push_back(f);
}

}  // namespace

const char* justification_name(Justification::Kind kind) {
  for (const auto& [k, name] : kJustNames) {
    if (k == kind) return name;
  }
  return "?";
}

Justification::Kind parse_justification(std::string_view name) {
  for (const auto& [k, n] : kJustNames) {
    if (name == n) return k;
  }
  throw Error("unknown justification '" + std::string{name} + "'");
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Verified: return "verified-up-to-bounds";
    case Outcome::Counterexample: return "counterexample";
    case Outcome::RuleViolation: return "rule-violation";
    case Outcome::Assumed: return "assumed";
  }
  return "?";
}

std::vector<int> AuditReport::flagged() const {
  std::vector<int> out;
  for (const auto& s : steps) {
    if (s.outcome == Outcome::Counterexample || s.outcome == Outcome::RuleViolation) out.push_back(s.index);
  }
  return out;
}

SearchBounds default_bounds(const ArgumentScript& script) {
  SearchBounds b;
  b.frame_class = script.frame_class;
  b.mode = script.mode;
  return b;
}

std::map<int, std::string> structural_violations(const ArgumentScript& script) {
  return analyse(script).violations;
}

AuditReport audit(const ArgumentScript& script, const SearchBounds& bounds, const SearchOptions& options) {
  const Analysis an = analyse(script);
  AuditReport report;
  report.script = script.name;
  report.bounds = bounds;
  const int n = static_cast<int>(script.steps.size());
  for (int i = 1; i <= n; ++i) {
    const Step& step = script.steps[i - 1];
    report.formulas.push_back(print_formula(step.formula));
    report.justifications.push_back(step.just);

    StepResult res;
    res.index = i;
    res.open_assumptions = an.open[i];
    if (auto v = an.violations.find(i); v != an.violations.end()) {
      res.outcome = Outcome::RuleViolation;
      res.message = v->second;
      report.steps.push_back(std::move(res));
      continue;
    }

    const JK kind = step.just.kind;
    if (kind == JK::Assumption) {
      res.outcome = Outcome::Assumed;
      report.steps.push_back(std::move(res));
      continue;
    }

    std::vector<Formula> antecedents;
    Formula target = step.formula;
    switch (kind) {
      case JK::Premise:
      case JK::Assumption:
        break;
      case JK::ModusPonens:
      case JK::KDist:
      case JK::Instantiation:
      case JK::SemanticStep:
        for (int a : an.open[i]) push_unique(antecedents, script.steps[a - 1].formula);
        for (int r : step.just.refs) push_unique(antecedents, script.steps[r - 1].formula);
        break;
      case JK::Necessitation: {
        const int r = step.just.refs[0];
        std::set<int> anc{r};
        ancestry(script, r, anc);
        const int depth = modal_depth(script.steps[r - 1].formula) + 1;
        for (int s : anc) {
          if (script.steps[s - 1].just.kind != JK::Premise) continue;
          for (int k = 0; k <= depth; ++k) push_unique(antecedents, boxes(script.steps[s - 1].formula, k));
        }
        break;
      }
      case JK::CP: {
        for (int a : an.open[i]) push_unique(antecedents, script.steps[a - 1].formula);
        std::set<int> anc;
        ancestry(script, step.just.refs[1], anc);
        for (int s : anc) {
          const auto& o = an.open[s];
          if (std::includes(an.open[i].begin(), an.open[i].end(), o.begin(), o.end())) {
            push_unique(antecedents, script.steps[s - 1].formula);
          }
        }
        break;
      }
    }

    try {
      const Verdict v = antecedents.empty()
                            ? check_validity(target, bounds, options)
                            : check_entailment(AuditQuery{antecedents, target, bounds}, options);
      res.models_examined = v.models_examined;
      res.outcome = v.valid() ? Outcome::Verified : Outcome::Counterexample;
      res.countermodel = v.countermodel;
    } catch (const SweepCeilingExceeded&) {
      throw;
    } catch (const Error& e) {
      res.outcome = Outcome::RuleViolation;
      res.message = e.what();
    }
    res.antecedents = std::move(antecedents);
    res.target = target;
    report.steps.push_back(std::move(res));
  }
  return report;
}

namespace {

nlohmann::json just_json(const Justification& j) {
  nlohmann::json out{{"kind", justification_name(j.kind)}, {"refs", j.refs}};
  if (j.principle) out["principle"] = *j.principle;
  if (!j.substitution.empty()) {
    nlohmann::json sub = nlohmann::json::object();
    for (const auto& [v, t] : j.substitution) sub[v.name] = print_term(t);
    out["substitution"] = std::move(sub);
  }
  return out;
}

std::string just_text(const Justification& j) {
  std::string s = justification_name(j.kind);
  if (j.principle) s += "(" + *j.principle + ")";
  if (!j.refs.empty()) {
    s += j.principle ? " " : "";
    s += "[";
    for (std::size_t i = 0; i < j.refs.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(j.refs[i]);
    }
    s += "]";
  }
  return s;
}

}  // namespace

nlohmann::json report_to_json(const AuditReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  nlohmann::json premises = nlohmann::json::array();
  std::size_t verified = 0, counter = 0, violations = 0, assumed = 0;
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    const StepResult& r = report.steps[k];
    const Justification& j = report.justifications[k];
    nlohmann::json s{{"index", r.index},
                     {"formula", report.formulas[k]},
                     {"justification", just_json(j)},
                     {"open_assumptions", std::vector<int>(r.open_assumptions.begin(), r.open_assumptions.end())},
                     {"outcome", outcome_name(r.outcome)},
                     {"models_examined", r.models_examined}};
    if (!r.message.empty()) s["message"] = r.message;
    if (r.countermodel) {
      s["countermodel"] = nlohmann::json{{"model", model_to_json(r.countermodel->model)},
                                         {"world", r.countermodel->world},
                                         {"valuation", valuation_to_json(r.countermodel->valuation)}};
    }
    steps.push_back(std::move(s));
    switch (r.outcome) {
      case Outcome::Verified: ++verified; break;
      case Outcome::Counterexample: ++counter; break;
      case Outcome::RuleViolation: ++violations; break;
      case Outcome::Assumed: ++assumed; break;
    }
    if (j.kind == JK::Premise) {
      const char* status = r.outcome == Outcome::Verified        ? "valid-up-to-bounds"
                           : r.outcome == Outcome::Counterexample ? "counterexample"
                                                                  : "rule-violation";
      premises.push_back({{"index", r.index},
                          {"label", j.principle.value_or("")},
                          {"formula", report.formulas[k]},
                          {"status", status}});
    }
  }
  const auto flagged = report.flagged();
  return nlohmann::json{
      {"script", report.script},
      {"bounds", bounds_to_json(report.bounds)},
      {"steps", std::move(steps)},
      {"premises", std::move(premises)},
      {"summary",
       {{"steps", report.steps.size()},
        {"verified", verified},
        {"counterexamples", counter},
        {"rule_violations", violations},
        {"assumptions", assumed},
        {"flagged", flagged},
        {"clean", flagged.empty()}}}};
}

std::string report_to_text(const AuditReport& report) {
  std::ostringstream out;
  const SearchBounds& b = report.bounds;
  out << "audit " << report.script << " (" << b.max_worlds << " worlds, " << b.max_domain
      << " elements, " << frame_class_name(b.frame_class) << ", " << mode_name(b.mode) << ")\n";
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    const StepResult& r = report.steps[k];
    out << "  " << r.index << ". " << report.formulas[k] << "\n"
        << "      " << just_text(report.justifications[k]) << ": " << outcome_name(r.outcome);
    if (!r.message.empty()) out << " (" << r.message << ")";
    out << "\n";
    if (r.countermodel) {
      out << "      countermodel at " << r.countermodel->world << ": "
          << model_to_json(r.countermodel->model).dump() << "\n"
          << "      valuation: " << valuation_to_json(r.countermodel->valuation).dump() << "\n";
    }
  }
  const auto flagged = report.flagged();
  out << "summary: ";
  if (flagged.empty()) {
    out << "clean\n";
  } else {
    out << "flagged steps";
    for (int i : flagged) out << " " << i;
    out << "\n";
  }
  return out.str();
}

}  // namespace pluralis
