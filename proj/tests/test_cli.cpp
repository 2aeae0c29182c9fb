#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "pluralis/audit.hpp"
#include "pluralis/model_io.hpp"
#include "pluralis/principles.hpp"
#include "pluralis/semantics.hpp"
#include "pluralis/syntax.hpp"

using namespace pluralis;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in{p, std::ios::binary};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data(const char* name) { return std::string{PLURALIS_TEST_DATA} + "/" + name; }

// Value after "  <key>: " on its own line of a text verdict.
std::string line_value(const std::string& text, const std::string& key) {
  std::istringstream in{text};
  std::string line;
  const std::string prefix = "  " + key + ": ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  }
  return {};
}

class EnvGuard {
public:
  EnvGuard(const char* name, const char* value) : name_{name} { setenv(name, value, 1); }
  ~EnvGuard() { unsetenv(name_); }
  EnvGuard(const EnvGuard&) = delete;
  EnvGuard& operator=(const EnvGuard&) = delete;

private:
  const char* name_;
};

}  // namespace

TEST(Parse, EchoesCanonicalForm) {
  const Result r = run({"parse", "a = a"});
  EXPECT_EQ(r.code, cli::kAnswered);
  EXPECT_EQ(r.out, "a = a\n");
  EXPECT_EQ(run({"parse", "□ ∀x (x ≺ xx)"}).out, "[] forall x. x in xx\n");
  EXPECT_EQ(run({"parse", "NecInc"}).out, "x in yy -> [] x in yy\n");
}

TEST(Parse, ErrorsGoToErrorStream) {
  const Result r = run({"parse", "a ="});
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("offset 3"), std::string::npos);
}

TEST(Usage, BadInvocationsExitTwo) {
  EXPECT_EQ(run({}).code, cli::kInputError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "a = a", "--frame", "KD"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "a = a", "--worlds", "0"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "a = a", "--domain", "7"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "a = a", "--mode", "partial"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "a = a", "--ceiling", "-4"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "a = a", "--output", "xml"}).code, cli::kInputError);
  EXPECT_EQ(run({"valid", "VNonemptiness", "--mode", "fixed"}).code, cli::kInputError);
  EXPECT_EQ(run({"principles", "Nope"}).code, cli::kInputError);
  EXPECT_EQ(run({"audit", "no-such-script"}).code, cli::kInputError);
  EXPECT_EQ(run({"eval", "--model", data("missing.json"), "--world", "0", "a = a"}).code, cli::kInputError);
}

TEST(Usage, HelpExitsZero) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, cli::kAnswered);
  EXPECT_NE(r.out.find("principles"), std::string::npos);
}

TEST(Valid, NecIncFixedGivesCountermodel) {
  const Result r = run({"valid", "NecInc", "--mode", "fixed"});
  ASSERT_EQ(r.code, cli::kRefuted);
  EXPECT_EQ(r.out.rfind("countermodel (2 worlds, 2 elements, K, fixed;", 0), 0u) << r.out;
  const Model m = parse_model(line_value(r.out, "model"));
  const Valuation v = parse_valuation(line_value(r.out, "valuation"));
  const World w = line_value(r.out, "world");
  EXPECT_TRUE(satisfies(m, w, v, parse_formula("x in yy")));
  EXPECT_FALSE(satisfies(m, w, v, parse_formula("[] x in yy")));
}

TEST(Valid, VariableOnlyIdImpliesVariableMode) {
  const Result r = run({"valid", "VNonemptiness"});
  EXPECT_EQ(r.code, cli::kAnswered);
  EXPECT_NE(r.out.find("variable"), std::string::npos);
}

TEST(Valid, ValidFormula) {
  const Result r = run({"valid", "a = b -> [] a = b", "--worlds", "3", "--domain", "3"});
  EXPECT_EQ(r.code, cli::kAnswered);
  EXPECT_EQ(r.out.rfind("valid-up-to-bounds (3 worlds, 3 elements, K, fixed;", 0), 0u) << r.out;
}

TEST(Valid, FrameClassMatters) {
  EXPECT_EQ(run({"valid", "[] P(a) -> P(a)"}).code, cli::kRefuted);
  EXPECT_EQ(run({"valid", "[] P(a) -> P(a)", "--frame", "T"}).code, cli::kAnswered);
  EXPECT_EQ(run({"valid", "<> P(a) -> [] <> P(a)", "--frame", "S4"}).code, cli::kRefuted);
  EXPECT_EQ(run({"valid", "<> P(a) -> [] <> P(a)", "--frame", "S5"}).code, cli::kAnswered);
}

TEST(Countermodel, AliasOfValid) {
  const Result a = run({"valid", "Cov", "--output", "json"});
  const Result b = run({"countermodel", "Cov", "--output", "json"});
  EXPECT_EQ(a.code, cli::kRefuted);
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
}

TEST(Entail, LocalConsequence) {
  EXPECT_EQ(run({"entail", "--premise", "a in xx", "a in xx"}).code, cli::kAnswered);
  EXPECT_EQ(run({"entail", "--premise", "a in xx", "[] a in xx"}).code, cli::kRefuted);
  EXPECT_EQ(run({"entail", "--premise", "P(a)", "--premise", "P(a) -> P(b)", "P(b)"}).code, cli::kAnswered);
  EXPECT_EQ(run({"entail", "a = a"}).code, cli::kAnswered);
  EXPECT_EQ(run({"entail", "--premise", "a in xx"}).code, cli::kInputError);
}

TEST(Eval, NecIncModel) {
  const std::vector<std::string> base{"eval", "--model", data("necinc_model.json"), "--world", "0",
                                      "--val", data("necinc_valuation.json")};
  auto with = [&](std::string f) {
    auto a = base;
    a.push_back(std::move(f));
    return run(a);
  };
  const Result t = with("x in xx");
  EXPECT_EQ(t.code, cli::kAnswered);
  EXPECT_EQ(t.out, "true\n");
  const Result f = with("[] x in xx");
  EXPECT_EQ(f.code, cli::kRefuted);
  EXPECT_EQ(f.out, "false\n");
  EXPECT_EQ(with("x in zz").code, cli::kInputError);
}

TEST(Eval, UnknownWorld) {
  EXPECT_EQ(run({"eval", "--model", data("necinc_model.json"), "--world", "7", "a = a"}).code,
            cli::kInputError);
}

TEST(Audit, BuiltinExitCodes) {
  const Result ua = run({"audit", "UA"});
  EXPECT_EQ(ua.code, cli::kRefuted);
  EXPECT_NE(ua.out.find("summary: flagged steps 4\n"), std::string::npos);
  const Result trav = run({"audit", "TRAV-finite"});
  EXPECT_EQ(trav.code, cli::kAnswered);
  EXPECT_NE(trav.out.find("summary: clean\n"), std::string::npos);
  EXPECT_EQ(run({"audit", "TRAV-finite", "--frame", "K"}).code, cli::kRefuted);
}

TEST(Audit, ScriptFile) {
  const auto path = std::filesystem::temp_directory_path() / "pluralis_cli_script.json";
  {
    std::ofstream o{path};
    o << save_script(*find_builtin("PR-fixed"));
  }
  const Result file = run({"audit", path.string(), "--output", "json"});
  const Result builtin = run({"audit", "PR-fixed", "--output", "json"});
  std::filesystem::remove(path);
  EXPECT_EQ(file.code, cli::kRefuted);
  EXPECT_EQ(file.out, builtin.out);
}

TEST(Audit, MalformedScriptFile) {
  const auto path = std::filesystem::temp_directory_path() / "pluralis_cli_bad.json";
  {
    std::ofstream o{path};
    o << R"({"name":"x","mode":"fixed","frame_class":"K","steps":[{"formula":"a =","just":{"kind":"Premise"}}]})";
  }
  const Result r = run({"audit", path.string()});
  std::filesystem::remove(path);
  EXPECT_EQ(r.code, cli::kInputError);
  EXPECT_FALSE(r.err.empty());
}

TEST(Ceiling, FlagAndEnvironment) {
  const Result r = run({"valid", "NecInc", "--ceiling", "1"});
  EXPECT_EQ(r.code, cli::kCeiling);
  EXPECT_NE(r.err.find("ceiling"), std::string::npos);
  {
    EnvGuard g{"PLURALIS_SWEEP_CEILING", "1"};
    EXPECT_EQ(run({"valid", "NecInc"}).code, cli::kCeiling);
    EXPECT_EQ(run({"valid", "NecInc", "--ceiling", "1e6"}).code, cli::kRefuted);
  }
  {
    EnvGuard g{"PLURALIS_SWEEP_CEILING", "lots"};
    EXPECT_EQ(run({"valid", "NecInc"}).code, cli::kInputError);
  }
  EXPECT_EQ(run({"valid", "NecInc"}).code, cli::kRefuted);
  EXPECT_EQ(run({"audit", "UA", "--ceiling", "1"}).code, cli::kCeiling);
}

TEST(Principles, Listing) {
  const Result all = run({"principles"});
  EXPECT_EQ(all.code, cli::kAnswered);
  std::istringstream in{all.out};
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) names.push_back(line.substr(0, line.find('\t')));
  EXPECT_EQ(names, principle_names());
  EXPECT_EQ(run({"principles", "NecId"}).out, "a = b -> [] a = b\n");
  EXPECT_EQ(run({"principles", "NecInc", "--mode", "variable"}).out,
            "x in yy -> []((E! x & E! yy) -> x in yy)\n");
}

TEST(Principles, JsonListing) {
  const Result r = run({"principles", "--output", "json"});
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), principle_names().size());
  for (const auto& e : j) {
    EXPECT_TRUE(e.contains("id"));
    EXPECT_TRUE(e.contains("mode"));
    EXPECT_TRUE(e.contains("formula"));
    EXPECT_TRUE(e.contains("summary"));
  }
}

struct GoldenCase {
  const char* file;
  std::vector<std::string> args;
};

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, JsonOutputIsStable) {
  const GoldenCase& c = GetParam();
  const std::string expected = slurp(std::filesystem::path{PLURALIS_TEST_GOLDEN} / c.file);
  ASSERT_FALSE(expected.empty()) << c.file;
  const Result first = run(c.args);
  const Result second = run(c.args);
  EXPECT_EQ(first.out, expected);
  EXPECT_EQ(second.out, first.out);
}

INSTANTIATE_TEST_SUITE_P(
    Cli, Golden,
    ::testing::Values(
        GoldenCase{"valid_necinc_fixed.json", {"valid", "NecInc", "--mode", "fixed", "--output", "json"}},
        GoldenCase{"valid_necinc_variable.json", {"valid", "NecInc", "--mode", "variable", "--output", "json"}},
        GoldenCase{"valid_uniadj.json", {"valid", "UniAdj", "--output", "json"}},
        GoldenCase{"audit_ua.json", {"audit", "UA", "--output", "json"}},
        GoldenCase{"audit_trav_finite.json", {"audit", "TRAV-finite", "--output", "json"}},
        GoldenCase{"principles.json", {"principles", "--output", "json"}},
        GoldenCase{"parse_uniadj.json",
                   {"parse", "--output", "json", "[] forall x. (x in xx + a <-> (x in xx | x = a))"}}),
    [](const auto& info) {
      std::string n = info.param.file;
      n = n.substr(0, n.find('.'));
      for (char& ch : n) {
        if (ch == '-') ch = '_';
      }
      return n;
    });

// Exit 1 always carries a countermodel or a flagged step, exit 0 never does.
TEST(ExitContract, RefutationEvidence) {
  const std::vector<std::vector<std::string>> queries{
      {"valid", "NecInc"},         {"valid", "NecNInc"},  {"valid", "Cov"},
      {"valid", "UniAdj"},         {"valid", "NecId"},    {"valid", "Indisc"},
      {"valid", "NecInc", "--mode", "variable"},          {"entail", "--premise", "a in xx", "[] a in xx"},
      {"audit", "UA"},             {"audit", "PR-fixed"}, {"audit", "PR-variable"},
      {"audit", "TRAV-finite"},    {"audit", "COV-derivation"},
  };
  for (auto q : queries) {
    q.push_back("--output");
    q.push_back("json");
    const Result r = run(q);
    ASSERT_TRUE(r.code == cli::kAnswered || r.code == cli::kRefuted) << q[1];
    const auto j = nlohmann::json::parse(r.out);
    bool evidence = false;
    if (q[0] == "audit") {
      evidence = !j.at("summary").at("flagged").empty();
      for (const auto& s : j.at("steps")) {
        if (s.at("outcome") == "counterexample") EXPECT_TRUE(s.contains("countermodel")) << q[1];
      }
    } else {
      evidence = j.contains("countermodel");
      EXPECT_EQ(j.at("verdict"), evidence ? "countermodel" : "valid-up-to-bounds");
    }
    EXPECT_EQ(evidence, r.code == cli::kRefuted) << q[1];
  }
}
