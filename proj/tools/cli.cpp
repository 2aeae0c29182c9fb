#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pluralis/audit.hpp"
#include "pluralis/error.hpp"
#include "pluralis/model_io.hpp"
#include "pluralis/principles.hpp"
#include "pluralis/search.hpp"
#include "pluralis/semantics.hpp"
#include "pluralis/syntax.hpp"

namespace pluralis::cli {

namespace {

constexpr const char* kCeilingEnv = "PLURALIS_SWEEP_CEILING";

struct Config {
  std::string frame = "K";
  int worlds = 2;
  int domain = 2;
  std::string mode = "fixed";
  std::string output = "text";
  double ceiling = 1e8;

  // One option object per subcommand; only one subcommand is ever parsed.
  std::vector<CLI::Option*> frame_opts, mode_opts, ceiling_opts;
};

bool given(const std::vector<CLI::Option*>& opts) {
  for (const auto* o : opts) {
    if (o->count() > 0) return true;
  }
  return false;
}

// Input problems that are not parse errors: unreadable files, unknown names.
struct InputError : Error {
  using Error::Error;
};

void add_common(CLI::App* sub, Config& c) {
  c.frame_opts.push_back(sub->add_option("--frame", c.frame, "frame class: K, T, S4 or S5")
                    ->check(CLI::IsMember({"K", "T", "S4", "S5"})));
  sub->add_option("--worlds", c.worlds, "largest number of worlds")
      ->check(CLI::Range(1, kMaxSearchWorlds));
  sub->add_option("--domain", c.domain, "largest domain size")
      ->check(CLI::Range(1, kMaxSearchDomain));
  c.mode_opts.push_back(sub->add_option("--mode", c.mode, "fixed or variable")
                   ->check(CLI::IsMember({"fixed", "variable"})));
  sub->add_option("--output", c.output, "text or json")->check(CLI::IsMember({"text", "json"}));
  c.ceiling_opts.push_back(sub->add_option("--ceiling", c.ceiling, "valuation sweep ceiling")
                      ->check(CLI::PositiveNumber));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double effective_ceiling(const Config& c) {
  if (given(c.ceiling_opts)) return c.ceiling;
  if (const char* env = std::getenv(kCeilingEnv)) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
      throw InputError(std::string{kCeilingEnv} + " must be a positive number");
    }
    return v;
  }
  return c.ceiling;
}

DomainMode mode_for(const Config& c, const std::string& text) {
  if (!given(c.mode_opts) && requires_variable_mode(text)) return DomainMode::Variable;
  return parse_mode(c.mode);
}

// A principle id or a formula in concrete syntax.
Formula formula_arg(const Config& c, const std::string& text) {
  if (is_principle_name(text)) return get_principle({text, mode_for(c, text)});
  return parse_formula(text);
}

SearchBounds bounds_for(const Config& c, DomainMode mode) {
  return SearchBounds{c.worlds, c.domain, parse_frame_class(c.frame), mode};
}

void print_bounds(std::ostream& out, const SearchBounds& b, std::uint64_t examined) {
  out << "(" << b.max_worlds << " worlds, " << b.max_domain << " elements, "
      << frame_class_name(b.frame_class) << ", " << mode_name(b.mode) << "; " << examined
      << " models examined)";
}

int report_verdict(const Config& c, const Verdict& v, std::ostream& out) {
  if (c.output == "json") {
    out << verdict_to_json(v).dump(2) << "\n";
  } else if (v.countermodel) {
    out << "countermodel ";
    print_bounds(out, v.bounds, v.models_examined);
    out << "\n  world: " << v.countermodel->world
        << "\n  model: " << model_to_json(v.countermodel->model).dump()
        << "\n  valuation: " << valuation_to_json(v.countermodel->valuation).dump() << "\n";
  } else {
    out << "valid-up-to-bounds ";
    print_bounds(out, v.bounds, v.models_examined);
    out << "\n";
  }
  return v.valid() ? kAnswered : kRefuted;
}

int cmd_parse(const Config& c, const std::string& text, std::ostream& out) {
  const Formula f = formula_arg(c, text);
  if (c.output == "json") {
    out << nlohmann::json{{"formula", print_formula(f)}}.dump(2) << "\n";
  } else {
    out << print_formula(f) << "\n";
  }
  return kAnswered;
}

int cmd_eval(const Config& c, const std::string& model_path, const std::string& world,
             const std::string& val_path, const std::string& text, std::ostream& out) {
  const Model m = parse_model(read_file(model_path));
  const Valuation v = val_path.empty() ? Valuation{} : parse_valuation(read_file(val_path));
  const Formula f = formula_arg(c, text);
  const bool result = satisfies(m, world, v, f);
  if (c.output == "json") {
    out << nlohmann::json{{"formula", print_formula(f)}, {"world", world}, {"value", result}}.dump(2)
        << "\n";
  } else {
    out << (result ? "true" : "false") << "\n";
  }
  return result ? kAnswered : kRefuted;
}

int cmd_valid(const Config& c, const std::string& text, std::ostream& out) {
  const Formula f = formula_arg(c, text);
  const Verdict v = check_validity(f, bounds_for(c, mode_for(c, text)), {effective_ceiling(c)});
  return report_verdict(c, v, out);
}

int cmd_entail(const Config& c, const std::vector<std::string>& premises, const std::string& text,
               std::ostream& out) {
  bool variable = !given(c.mode_opts) && requires_variable_mode(text);
  for (const auto& p : premises) variable = variable || (!given(c.mode_opts) && requires_variable_mode(p));
  const DomainMode mode = variable ? DomainMode::Variable : parse_mode(c.mode);
  auto arg = [&](const std::string& s) {
    return is_principle_name(s) ? get_principle({s, mode}) : parse_formula(s);
  };
  AuditQuery q{{}, arg(text), bounds_for(c, mode)};
  for (const auto& p : premises) q.premises.push_back(arg(p));
  return report_verdict(c, check_entailment(q, {effective_ceiling(c)}), out);
}

int cmd_audit(const Config& c, const std::string& target, std::ostream& out) {
  std::optional<ArgumentScript> script = find_builtin(target);
  if (!script) script = load_script(read_file(target));
  SearchBounds b = default_bounds(*script);
  b.max_worlds = c.worlds;
  b.max_domain = c.domain;
  if (given(c.frame_opts)) b.frame_class = parse_frame_class(c.frame);
  if (given(c.mode_opts)) {
    b.mode = parse_mode(c.mode);
    script->mode = b.mode;
  }
  const AuditReport r = audit(*script, b, {effective_ceiling(c)});
  if (c.output == "json") {
    out << report_to_json(r).dump(2) << "\n";
  } else {
    out << report_to_text(r);
  }
  return r.clean() ? kAnswered : kRefuted;
}

int cmd_principles(const Config& c, const std::string& id, std::ostream& out) {
  std::vector<std::string> ids;
  if (id.empty()) {
    ids = principle_names();
  } else {
    if (!is_principle_name(id)) throw InputError("unknown principle '" + id + "'");
    ids.push_back(id);
  }
  nlohmann::json list = nlohmann::json::array();
  for (const auto& name : ids) {
    const DomainMode mode = requires_variable_mode(name) ? DomainMode::Variable : parse_mode(c.mode);
    const std::string text = print_formula(get_principle({name, mode}));
    if (c.output == "json") {
      list.push_back({{"id", name},
                      {"mode", mode_name(mode)},
                      {"formula", text},
                      {"summary", principle_summary(name)}});
    } else if (id.empty()) {
      out << name << "\t" << text << "\n";
    } else {
      out << text << "\n";
    }
  }
  if (c.output == "json") out << (id.empty() ? list : list.front()).dump(2) << "\n";
  return kAnswered;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounded Kripke-model checker for modal plural logic", "pluralis"};
  app.require_subcommand(1);
  Config c;

  std::string formula;
  auto* parse = app.add_subcommand("parse", "print the canonical form of a formula");
  parse->add_option("formula", formula)->required();
  add_common(parse, c);

  std::string model_path, world, val_path;
  auto* eval = app.add_subcommand("eval", "evaluate a formula at a world of a model");
  eval->add_option("--model", model_path, "model JSON file")->required();
  eval->add_option("--world", world, "world name")->required();
  eval->add_option("--val", val_path, "valuation JSON file");
  eval->add_option("formula", formula)->required();
  add_common(eval, c);

  auto* valid = app.add_subcommand("valid", "search for a countermodel within the bounds");
  valid->add_option("formula", formula, "formula or principle id")->required();
  add_common(valid, c);

  auto* counter = app.add_subcommand("countermodel", "same search as valid");
  counter->add_option("formula", formula, "formula or principle id")->required();
  add_common(counter, c);

  std::vector<std::string> premises;
  auto* entail = app.add_subcommand("entail", "local consequence within the bounds");
  entail->add_option("--premise", premises, "premise (repeatable)")->allow_extra_args(false);
  entail->add_option("conclusion", formula)->required();
  add_common(entail, c);

  std::string target;
  auto* aud = app.add_subcommand("audit", "audit a built-in or JSON argument script");
  aud->add_option("script", target, "UA, PR-fixed, PR-variable, TRAV-finite, COV-derivation or a file")
      ->required();
  add_common(aud, c);

  std::string id;
  auto* princ = app.add_subcommand("principles", "list principles or print one");
  princ->add_option("id", id);
  add_common(princ, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAnswered : kInputError;
  }

  try {
    if (parse->parsed()) return cmd_parse(c, formula, out);
    if (eval->parsed()) return cmd_eval(c, model_path, world, val_path, formula, out);
    if (valid->parsed() || counter->parsed()) return cmd_valid(c, formula, out);
    if (entail->parsed()) return cmd_entail(c, premises, formula, out);
    if (aud->parsed()) return cmd_audit(c, target, out);
    if (princ->parsed()) return cmd_principles(c, id, out);
  } catch (const SweepCeilingExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCeiling;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " at offset " << e.span().start << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  err << "error: no subcommand\n";
  return kInputError;
}

}  // namespace pluralis::cli
