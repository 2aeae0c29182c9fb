// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pluralis/audit.hpp"
#include "pluralis/principles.hpp"
#include "pluralis/search.hpp"
#include "pluralis/semantics.hpp"
#include "pluralis/syntax.hpp"
#include "support/generators.hpp"

using namespace pluralis;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void within(double took, double limit, const std::string& what) {
    std::ostringstream s;
    s << what << " took " << took << " s (limit " << limit << " s)";
    expect(took < limit, s.str());
  }
};

SearchBounds at(int w, int d, FrameClass fc = FrameClass::K, DomainMode mode = DomainMode::Fixed) {
  return SearchBounds{w, d, fc, mode};
}

int cli_run(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

bool refutes(const Verdict& v, const Formula& f) {
  if (!v.countermodel) return false;
  const Countermodel& c = *v.countermodel;
  return validate_model(c.model).empty() && !satisfies(c.model, c.world, c.valuation, f);
}

void necinc_fixed(Check& c) {
  const DesignatedModel d = canonical_necinc_countermodel(DomainMode::Fixed);
  c.expect(d.world == "0", "designated world is 0");
  c.expect(satisfies(d.model, d.world, d.valuation, parse_formula("x in xx")), "x in xx holds at 0");
  c.expect(!satisfies(d.model, d.world, d.valuation, parse_formula("[] x in xx")), "[] x in xx fails at 0");
  const auto t0 = Clock::now();
  std::string out;
  const int code = cli_run({"valid", "NecInc", "--mode", "fixed"}, &out);
  c.within(seconds_since(t0), 1.0, "valid NecInc --mode fixed");
  c.expect(code == cli::kRefuted, "valid NecInc --mode fixed exits 1");
  c.expect(out.rfind("countermodel (2 worlds, 2 elements, K, fixed;", 0) == 0, "countermodel printed");
}

void necinc_variable(Check& c) {
  const Formula necinc = get_principle({"NecInc", DomainMode::Variable});
  const DesignatedModel d = canonical_necinc_countermodel(DomainMode::Variable);
  c.expect(d.model.inner_domains.has_value(), "inner domains present");
  if (d.model.inner_domains) {
    for (const auto& w : d.model.worlds) {
      const auto& n = d.model.inner_domains->at(w);
      c.expect(ElementSet(d.model.domain.begin(), d.model.domain.end()) == n, "inner domain equals D at " + w);
    }
  }
  // The designated valuation assigns xx.
  const Formula renamed = substitute(necinc, Variable{Sort::Plural, "yy"}, pvar("xx"));
  c.expect(satisfies(d.model, d.world, d.valuation, parse_formula("x in xx")), "x in xx holds at 0");
  c.expect(!satisfies(d.model, d.world, d.valuation, renamed), "guarded NecInc fails at 0");
  const auto t0 = Clock::now();
  const Verdict v = check_validity(necinc, at(2, 2, FrameClass::K, DomainMode::Variable));
  c.within(seconds_since(t0), 10.0, "search at (2,2,K,variable)");
  c.expect(refutes(v, necinc), "countermodel found at (2,2,K,variable)");
}

// Distinct non-modal comprehension instances over at most two symbols.
std::vector<Formula> comprehension_instances(DomainMode mode, std::size_t want, std::uint32_t seed) {
  struct Sig {
    std::vector<std::string> sconsts, pconsts;
    std::vector<std::pair<std::string, int>> spreds;
  };
  const std::vector<Sig> sigs{{{"a", "b"}, {}, {}}, {{"a"}, {}, {{"P", 1}}}, {{"a"}, {"aa"}, {}}};
  std::vector<Formula> out;
  std::set<std::string> seen;
  for (std::size_t k = 0; out.size() < want && k < 50 * want; ++k) {
    const Sig& s = sigs[k % sigs.size()];
    testkit::Vocabulary voc;
    voc.sconsts = s.sconsts;
    voc.pconsts = s.pconsts;
    voc.spreds = s.spreds;
    voc.ppreds = {};
    voc.svars = {"x", "y"};
    voc.pvars = {};
    voc.plural_quantifiers = false;
    voc.modal = false;
    voc.existence = mode == DomainMode::Variable;
    testkit::FormulaGenerator gen{voc, static_cast<std::uint32_t>(seed + k)};
    const Formula phi = gen.formula(2);
    if (!free_variables(phi).singular.contains("x")) continue;
    const Formula inst = instantiate_comprehension(phi, "x", mode);
    if (infer_signature(inst).symbol_count() > 2) continue;
    if (seen.insert(print_formula(inst)).second) out.push_back(inst);
  }
  return out;
}

void soundness(Check& c) {
  const auto t0 = Clock::now();
  const SearchBounds fixed = at(3, 3);
  const SearchBounds var = at(3, 3, FrameClass::K, DomainMode::Variable);
  c.expect(check_validity(get_principle({"Nonemptiness"}), fixed).valid(), "Nonemptiness");
  c.expect(check_validity(get_principle({"Extensionality"}), fixed).valid(), "Extensionality");
  c.expect(check_validity(get_principle({"VNonemptiness", DomainMode::Variable}), var).valid(), "VNonemptiness");
  const auto comp = comprehension_instances(DomainMode::Fixed, 20, 1000);
  c.expect(comp.size() >= 20, "at least 20 Comprehension instances generated");
  for (const auto& f : comp) c.expect(check_validity(f, fixed).valid(), "Comprehension: " + print_formula(f));
  const auto vcomp = comprehension_instances(DomainMode::Variable, 10, 2000);
  c.expect(vcomp.size() >= 10, "at least 10 VComprehension instances generated");
  for (const auto& f : vcomp) c.expect(check_validity(f, var).valid(), "VComprehension: " + print_formula(f));
  c.within(seconds_since(t0), 300.0, "soundness suite");
}

void drift(Check& c) {
  for (const char* name : {"Cov", "NecNInc"}) {
    const Formula f = get_principle({name});
    const auto t0 = Clock::now();
    const Verdict v = check_validity(f, at(2, 2));
    c.within(seconds_since(t0), 10.0, name);
    c.expect(refutes(v, f), std::string{name} + " has a countermodel");
  }
}

void indisc(Check& c) {
  testkit::Vocabulary voc;
  voc.modal = false;
  voc.sconsts = {"a"};
  voc.pconsts = {};
  voc.spreds = {{"P", 1}};
  voc.ppreds = {"FF"};
  voc.pvars = {"zz"};
  voc.plural_quantifiers = false;
  testkit::FormulaGenerator gen{voc, 7};
  std::set<std::string> seen;
  int valid = 0;
  for (int tries = 0; seen.size() < 12 && tries < 2000; ++tries) {
    const Formula ctx = gen.formula(2);
    if (!free_variables(ctx).plural.contains("zz")) continue;
    const Formula inst = instantiate_indisc(ctx, "zz", pvar("xx"), pvar("yy"));
    if (!seen.insert(print_formula(inst)).second) continue;
    const bool ok = check_validity(inst, at(2, 2)).valid();
    c.expect(ok, "Indisc: " + print_formula(inst));
    valid += ok;
  }
  c.expect(valid >= 10, "at least 10 non-modal Indisc instances valid");
  const Formula modal = instantiate_indisc(parse_formula("[] a in zz"), "zz", pvar("xx"), pvar("yy"), true);
  c.expect(refutes(check_validity(modal, at(2, 2)), modal), "modal context has a countermodel");
}

void rigidification(Check& c) {
  c.expect(check_validity(partial_rigidification(DomainMode::Fixed), at(2, 2)).valid(),
           "fixed rigidification valid");
  const ArgumentScript fixed = *find_builtin("PR-fixed");
  const AuditReport rf = audit(fixed, default_bounds(fixed));
  const auto ff = rf.flagged();
  c.expect(ff.size() == 1 && fixed.steps[ff[0] - 1].just.principle == "Cov", "PR-fixed flags exactly Cov");
  const ArgumentScript var = *find_builtin("PR-variable");
  const AuditReport rv = audit(var, default_bounds(var));
  const Formula bridge = parse_formula("[](E! xx -> E! yy)");
  bool flagged_bridge = false;
  for (int i : rv.flagged()) {
    flagged_bridge = flagged_bridge || (var.steps[i - 1].formula == bridge &&
                                        rv.steps[i - 1].outcome == Outcome::Counterexample);
  }
  c.expect(flagged_bridge, "PR-variable flags the bridge premise");
}

void traversability(Check& c) {
  AuditQuery q{{traversal("aa", {"a", "b", "c"}, true), parse_formula("y in aa")},
               parse_formula("[] y in aa"), at(3, 3, FrameClass::T)};
  c.expect(check_entailment(q).valid(), "valid at (3,3,T)");
  q.bounds = at(3, 3, FrameClass::K);
  const Verdict v = check_entailment(q);
  c.expect(v.countermodel.has_value(), "countermodel at (3,3,K)");
  if (v.countermodel) {
    const Countermodel& m = *v.countermodel;
    for (const auto& p : q.premises) c.expect(satisfies(m.model, m.world, m.valuation, p), "premise holds");
    c.expect(!satisfies(m.model, m.world, m.valuation, q.conclusion), "conclusion fails");
  }
}

void necid(Check& c) {
  c.expect(check_validity(parse_formula("a = b -> [] a = b"), at(3, 3)).valid(), "NecId at (3,3,K)");
}

void uniadj(Check& c) {
  c.expect(check_validity(get_principle({"UniAdj"}), at(2, 2)).valid(), "UniAdj at (2,2,K)");
}

void round_trip(Check& c) {
  testkit::Vocabulary voc;
  voc.existence = true;
  int passed = 0;
  for (int i = 0; i < 1000; ++i) {
    testkit::FormulaGenerator gen{voc, static_cast<std::uint32_t>(90000 + i)};
    const Formula f = gen.formula(1 + i % 5);
    const std::string text = print_formula(f);
    try {
      if (parse_formula(text) == f) {
        ++passed;
        continue;
      }
    } catch (const std::exception&) {
    }
    c.expect(false, "round trip: " + text);
  }
  c.expect(passed == 1000, std::to_string(passed) + "/1000 round trips");
}

void determinism(Check& c) {
  for (const auto& s : builtin_scripts()) {
    std::string a, b;
    const int ca = cli_run({"audit", s.name, "--output", "json"}, &a);
    const int cb = cli_run({"audit", s.name, "--output", "json"}, &b);
    c.expect(ca == cb && ca != cli::kInputError && !a.empty() && a == b, "audit " + s.name);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"NecInc countermodel, fixed domain", necinc_fixed},
      {"NecInc countermodel, variable domain", necinc_variable},
      {"soundness smoke suite", soundness},
      {"Cov and NecNInc drift", drift},
      {"Indisc dichotomy", indisc},
      {"partial rigidification", rigidification},
      {"traversability needs T", traversability},
      {"necessity of identity", necid},
      {"UniAdj validity", uniadj},
      {"parser round trip", round_trip},
      {"audit determinism", determinism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Check c;
    const auto t0 = Clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string{"exception: "} + e.what());
    }
    const double took = seconds_since(t0);
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %2d %s (%.2f s)\n", ok ? "PASS" : "FAIL", n, name, took);
    for (const auto& f : c.failures) std::printf("       %s\n", f.c_str());
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
