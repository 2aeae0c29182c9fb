#include <cstdint>

#include "pluralis/audit.hpp"
#include "pluralis/error.hpp"
#include "pluralis/model_io.hpp"
#include "pluralis/principles.hpp"
#include "pluralis/syntax.hpp"

namespace pluralis {

using JK = Justification::Kind;

namespace {

constexpr const char* kCovClosure = "forall xx. forall yy. (xx == yy -> [] xx == yy)";

class Builder {
public:
  Builder(std::string name, DomainMode mode, FrameClass fc, std::string annotation) {
    s_.name = std::move(name);
    s_.mode = mode;
    s_.frame_class = fc;
    s_.annotation = std::move(annotation);
  }

  Builder& premise(const Formula& f, std::string label, std::string note = {}) {
    Justification j;
    j.kind = JK::Premise;
    j.principle = std::move(label);
    return add(f, std::move(j), std::move(note));
  }
  Builder& premise(std::string_view text, std::string label, std::string note = {}) {
    return premise(parse_formula(text), std::move(label), std::move(note));
  }
  Builder& step(std::string_view text, JK kind, std::vector<int> refs = {}, std::string note = {}) {
    Justification j;
    j.kind = kind;
    j.refs = std::move(refs);
    return add(parse_formula(text), std::move(j), std::move(note));
  }
  Builder& instance(std::string_view text, int ref, Substitution sigma, std::string note = {}) {
    Justification j;
    j.kind = JK::Instantiation;
    j.refs = {ref};
    j.substitution = std::move(sigma);
    return add(parse_formula(text), std::move(j), std::move(note));
  }

  ArgumentScript done() { return std::move(s_); }

private:
  Builder& add(Formula f, Justification j, std::string note) {
    s_.steps.push_back(Step{std::move(f), std::move(j), std::move(note)});
    return *this;
  }

  ArgumentScript s_;
};

ArgumentScript uniform_adjudication() {
  return Builder{"UA", DomainMode::Fixed, FrameClass::K,
                 "Uniform adjudication from UniAdj: Cov necessitates the coextensiveness of xx "
                 "and xx + a, and NecId with K necessitates the membership of a in xx + a."}
      .premise(get_principle({"UniAdj"}), "UniAdj")
      .step("a in xx", JK::Assumption)
      .step("xx == xx + a", JK::SemanticStep, {1, 2})
      .premise(kCovClosure, "Cov", "universal closure, so that it can be instantiated")
      .instance("xx == xx + a -> [] xx == xx + a", 4, {{Variable{Sort::Plural, "xx"}, pvar("xx")},
                                                       {Variable{Sort::Plural, "yy"}, parse_term("xx + a")}})
      .step("[] xx == xx + a", JK::ModusPonens, {3, 5}, "necessary coextensiveness")
      .step("[](a in xx | a = a) -> [] a in xx + a", JK::KDist, {1}, "K applied to the right-to-left half of UniAdj")
      .premise(get_principle({"NecId"}), "NecId")
      .step("a = a", JK::SemanticStep)
      .step("[] a = a", JK::SemanticStep, {8, 9})
      .step("[](a in xx | a = a)", JK::KDist, {10})
      .step("[] a in xx + a", JK::ModusPonens, {7, 11}, "necessary membership in xx + a")
      .step("[] a in xx", JK::SemanticStep, {6, 12})
      .step("a in xx -> [] a in xx", JK::CP, {2, 13})
      .done();
}

ArgumentScript cov_derivation() {
  const Formula modal_indisc =
      instantiate_indisc(parse_formula("[] xx == zz"), "zz", pvar("xx"), pvar("yy"), true);
  return Builder{"COV-derivation", DomainMode::Fixed, FrameClass::K,
                 "Cov from Indisc with a modal context, Nec, MP and CP, in six steps."}
      .step("xx == yy", JK::Assumption)
      .step("xx == xx", JK::SemanticStep)
      .step("[] xx == xx", JK::Necessitation, {2})
      .premise(modal_indisc, "Indisc", "context [] xx == (.), admitted only with modal substitutends")
      .step("[] xx == yy", JK::ModusPonens, {1, 3, 4})
      .step("xx == yy -> [] xx == yy", JK::CP, {1, 5})
      .done();
}

ArgumentScript pr_fixed() {
  return Builder{"PR-fixed", DomainMode::Fixed, FrameClass::K,
                 "Partial rigidification with a fixed domain: a rigid yy coextensive with xx, "
                 "carried back to xx by Cov."}
      .premise(partial_rigidification(DomainMode::Fixed), "PartialRigidification")
      .premise(kCovClosure, "Cov")
      .step("a in xx", JK::Assumption)
      .step("exists yy. (xx == yy & [] a in yy & [] xx == yy)", JK::SemanticStep, {1, 2, 3})
      .step("[] a in xx", JK::SemanticStep, {4})
      .step("a in xx -> [] a in xx", JK::CP, {3, 5})
      .done();
}

ArgumentScript pr_variable() {
  const char* witness = "xx == yy & forall x. (x in yy -> [](E! yy -> [] x in yy))";
  return Builder{"PR-variable", DomainMode::Variable, FrameClass::K,
                 "Partial rigidification with inner domains. The step from E! xx to E! yy at other "
                 "worlds needs the bridge premise."}
      .premise(partial_rigidification(DomainMode::Variable), "PartialRigidificationV")
      .premise(kCovClosure, "Cov")
      .premise("[](E! xx -> E! yy)", "bridge")
      .step("a in xx", JK::Assumption)
      .step(witness, JK::Assumption, {}, "witness for the existential")
      .step("[](E! yy -> [] a in yy)", JK::SemanticStep, {4, 5})
      .step("[] xx == yy", JK::SemanticStep, {2, 5})
      .step(std::string{"[] "} + kCovClosure, JK::Necessitation, {2})
      .step("[][] xx == yy", JK::SemanticStep, {7, 8})
      .step("[](E! xx -> [] a in yy)", JK::SemanticStep, {3, 6})
      .step("[](E! xx -> [] a in xx)", JK::SemanticStep, {9, 10})
      .step("a in xx -> [](E! xx -> [] a in xx)", JK::CP, {4, 11})
      .step(std::string{"("} + witness + ") -> a in xx -> [](E! xx -> [] a in xx)", JK::CP, {5, 12})
      .done();
}

ArgumentScript trav_finite() {
  return Builder{"TRAV-finite", DomainMode::Fixed, FrameClass::T,
                 "Necessary membership in a uniformly traversable plurality aa of a, b and c. "
                 "The traversal is a hypothesis about aa, so it stays an open assumption."}
      .step(print_formula(traversal("aa", {"a", "b", "c"}, true)), JK::Assumption, {},
            "uniform traversability of aa")
      .step("y in aa", JK::Assumption)
      .step(print_formula(traversal("aa", {"a", "b", "c"}, false)), JK::SemanticStep, {1},
            "needs reflexivity")
      .step("y = a | y = b | y = c", JK::SemanticStep, {2, 3})
      .step("[](y = a | y = b | y = c)", JK::SemanticStep, {4}, "necessity of identity")
      .step("[] y in aa", JK::SemanticStep, {1, 5})
      .step("y in aa -> [] y in aa", JK::CP, {2, 6})
      .done();
}

}  // namespace

std::vector<ArgumentScript> builtin_scripts() {
  return {uniform_adjudication(), pr_fixed(), pr_variable(), trav_finite(), cov_derivation()};
}

std::optional<ArgumentScript> find_builtin(std::string_view name) {
  for (auto& s : builtin_scripts()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string& message) { throw ParseError(message, SourceSpan{}); }

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string{"missing '"} + key + "'");
  return j.at(key);
}

std::string text_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) bad(std::string{"'"} + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ArgumentScript load_script(std::string_view text) {
  const nlohmann::json j = parse_json_strict(text);
  if (!j.is_object()) bad("script must be a JSON object");
  ArgumentScript s;
  try {
    s.name = text_field(j, "name");
    s.mode = parse_mode(text_field(j, "mode"));
    s.frame_class = parse_frame_class(text_field(j, "frame_class"));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    bad(e.what());
  }
  if (j.contains("annotation")) s.annotation = text_field(j, "annotation");
  const auto& steps = field(j, "steps");
  if (!steps.is_array()) bad("'steps' must be an array");
  int index = 0;
  for (const auto& st : steps) {
    ++index;
    const std::string where = "step " + std::to_string(index) + ": ";
    const std::string ftext = text_field(st, "formula");
    Formula f = [&] {
      try {
        return parse_formula(ftext);
      } catch (const ParseError& e) {
        bad(where + e.what() + " at offset " + std::to_string(e.span().start));
      }
    }();
    const auto& jj = field(st, "just");
    Justification just;
    try {
      just.kind = parse_justification(text_field(jj, "kind"));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      bad(where + e.what());
    }
    if (jj.contains("refs")) {
      const auto& refs = jj.at("refs");
      if (!refs.is_array()) bad(where + "'refs' must be an array");
      for (const auto& r : refs) {
        if (!r.is_number_integer()) bad(where + "refs must be integers");
        just.refs.push_back(r.get<int>());
      }
    }
    if (jj.contains("principle")) just.principle = text_field(jj, "principle");
    if (jj.contains("substitution")) {
      const auto& sub = jj.at("substitution");
      if (!sub.is_object()) bad(where + "'substitution' must be an object");
      for (const auto& [name, t] : sub.items()) {
        const NameClass cls = classify_name(name);
        if (cls != NameClass::SingularVar && cls != NameClass::PluralVar) {
          bad(where + "'" + name + "' is not a variable");
        }
        if (!t.is_string()) bad(where + "substitution values must be strings");
        try {
          just.substitution.emplace(
              Variable{cls == NameClass::SingularVar ? Sort::Singular : Sort::Plural, name},
              parse_term(t.get<std::string>()));
        } catch (const ParseError& e) {
          bad(where + e.what());
        }
      }
    }
    std::string note;
    if (st.contains("note")) note = text_field(st, "note");
    s.steps.push_back(Step{std::move(f), std::move(just), std::move(note)});
  }
  return s;
}

std::string save_script(const ArgumentScript& script) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : script.steps) {
    nlohmann::json just{{"kind", justification_name(st.just.kind)}, {"refs", st.just.refs}};
    if (st.just.principle) just["principle"] = *st.just.principle;
    if (!st.just.substitution.empty()) {
      nlohmann::json sub = nlohmann::json::object();
      for (const auto& [v, t] : st.just.substitution) sub[v.name] = print_term(t);
      just["substitution"] = std::move(sub);
    }
    nlohmann::json js{{"formula", print_formula(st.formula)}, {"just", std::move(just)}};
    if (!st.note.empty()) js["note"] = st.note;
    steps.push_back(std::move(js));
  }
  nlohmann::json j{{"name", script.name},
                   {"mode", mode_name(script.mode)},
                   {"frame_class", frame_class_name(script.frame_class)},
                   {"steps", std::move(steps)}};
  if (!script.annotation.empty()) j["annotation"] = script.annotation;
  return j.dump(2) + "\n";
}

}  // namespace pluralis
