#pragma once

// Step-by-step semantic audit of argument scripts.
//
// Script files are JSON:
//   {"name": .., "mode": "fixed"|"variable", "frame_class": "K"|"T"|"S4"|"S5",
//    "annotation": ..?,
//    "steps": [{"formula": "<concrete syntax>",
//               "just": {"kind": .., "refs": [..], "principle": ..?,
//                        "substitution": {var: "<term>"}?},
//               "note": ..?}]}
// Step references are 1-based.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pluralis/formula.hpp"
#include "pluralis/search.hpp"

namespace pluralis {

struct Justification {
  enum class Kind {
    Premise,
    Assumption,
    ModusPonens,
    Necessitation,
    KDist,
    CP,  // refs = {assumption, step}
    Instantiation,
    SemanticStep,
  };
  Kind kind = Kind::Premise;
  std::vector<int> refs;
  std::optional<std::string> principle;  // label of a Premise
  Substitution substitution;             // Instantiation only
};

[[nodiscard]] const char* justification_name(Justification::Kind kind);
[[nodiscard]] Justification::Kind parse_justification(std::string_view name);

struct Step {
  Formula formula;
  Justification just;
  std::string note;
};

struct ArgumentScript {
  std::string name;
  std::string annotation;
  DomainMode mode = DomainMode::Fixed;
  FrameClass frame_class = FrameClass::K;
  std::vector<Step> steps;
};

enum class Outcome { Verified, Counterexample, RuleViolation, Assumed };

[[nodiscard]] const char* outcome_name(Outcome o);

struct StepResult {
  int index = 0;
  Outcome outcome = Outcome::Verified;
  std::string message;
  std::set<int> open_assumptions;
  // What the step was checked against: the countermodel, if any, satisfies
  // every antecedent and falsifies the target.
  std::vector<Formula> antecedents;
  std::optional<Formula> target;
  std::optional<Countermodel> countermodel;
  std::uint64_t models_examined = 0;
};

struct AuditReport {
  std::string script;
  SearchBounds bounds;
  std::vector<StepResult> steps;
  std::vector<std::string> formulas;  // printed step formulas
  std::vector<Justification> justifications;

  [[nodiscard]] std::vector<int> flagged() const;
  [[nodiscard]] bool clean() const { return flagged().empty(); }
};

// Bounds for auditing a script at the default sizes: two worlds, two
// elements, and the script's own frame class and mode.
[[nodiscard]] SearchBounds default_bounds(const ArgumentScript& script);

// Structural problems by step index (1-based).
[[nodiscard]] std::map<int, std::string> structural_violations(const ArgumentScript& script);

[[nodiscard]] AuditReport audit(const ArgumentScript& script, const SearchBounds& bounds,
                                const SearchOptions& options = {});

[[nodiscard]] nlohmann::json report_to_json(const AuditReport& report);
[[nodiscard]] std::string report_to_text(const AuditReport& report);

[[nodiscard]] std::vector<ArgumentScript> builtin_scripts();
[[nodiscard]] std::optional<ArgumentScript> find_builtin(std::string_view name);

// Throws ParseError on malformed JSON or formulas.  Structural problems are
// left for audit() to report.
[[nodiscard]] ArgumentScript load_script(std::string_view text);
[[nodiscard]] std::string save_script(const ArgumentScript& script);

}  // namespace pluralis
