#include "calf/cost.hpp"
#include "calf/eval.hpp"
#include "calf/laws.hpp"
#include "calf/parser.hpp"
#include "calf/rewrite.hpp"
#include "calf/syntax.hpp"
#include "calf/typecheck.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace calf;
using json = nlohmann::ordered_json;

namespace {

// Exit codes, exhaustive and disjoint: 0 success, 1 type or verification
// failure, 2 parse failure (source or command line), 3 I/O failure.
constexpr int kOk = 0;
constexpr int kTypeFail = 1;
constexpr int kParseFail = 2;
constexpr int kIoFail = 3;

struct Fail {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    throw Fail{kIoFail};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    std::cerr << "error: cannot read '" << path << "'\n";
    throw Fail{kIoFail};
  }
  return buf.str();
}

// --cost-model beats CALF_COST_MODEL beats the additive default.
CostModel resolve_model(const std::string& flag_value) {
  std::string spec = flag_value;
  if (spec.empty()) {
    if (const char* env = std::getenv("CALF_COST_MODEL")) spec = env;
  }
  if (spec.empty()) spec = "nat";
  if (auto m = CostModel::by_name(spec)) return *m;
  std::cerr << "error: unknown cost model '" << spec
            << "' (expected nat, nat-max, or pair:<model>,<model>)\n";
  throw Fail{kParseFail};
}

struct Loaded {
  std::string source;
  SourceFile file;
};

Loaded load_checked(const std::string& path, const CostModel& model) {
  Loaded out;
  out.source = read_file(path);
  ParseResult parsed = parse(out.source, model);
  if (!parsed.ok()) {
    for (const Diagnostic& d : parsed.diagnostics)
      std::cerr << render_diagnostic(out.source, d, path) << "\n";
    throw Fail{kParseFail};
  }
  out.file = std::move(*parsed.file);
  try {
    Checker(model).check_file(out.file);
  } catch (const TypeError& e) {
    std::cerr << render_diagnostic(out.source, e.to_diagnostic(), path) << "\n";
    throw Fail{kTypeFail};
  }
  return out;
}

int cmd_check(const std::string& path, const std::string& model_flag) {
  CostModel model = resolve_model(model_flag);
  load_checked(path, model);
  json report;
  report["program"] = path;
  report["ok"] = true;
  std::cout << report.dump() << "\n";
  return kOk;
}

int cmd_run(const std::string& path, const std::string& phase, const std::string& model_flag) {
  CostModel model = resolve_model(model_flag);
  Loaded loaded = load_checked(path, model);
  Term term = loaded.file.linked_main();
  Type ty = loaded.file.linked_main_type();

  if (ty.kind() != TypeKind::F || !is_ground_type(ty.as<ty::F>()->arg)) {
    std::cerr << "error: run needs main to produce a first-order value, but main : "
              << pretty(ty) << "\n";
    throw Fail{kTypeFail};
  }
  Type value_ty = ty.as<ty::F>()->arg;

  World world = phase == "beh" ? World::Beh : World::Cost;
  Evaluator ev(model);
  auto start = std::chrono::steady_clock::now();
  SemComp result = ev.eval_comp({}, world, term);
  auto end = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(end - start).count();

  const auto* ret = result.as<RetC>();
  json report;
  report["program"] = path;
  report["phase"] = phase;
  if (world == World::Cost) report["cost"] = model.show(ret->cost);
  report["value"] = pretty(readback(ret->value, value_ty, model));
  report["elapsed_ms"] = ms;
  std::cout << report.dump() << "\n";
  return kOk;
}

int cmd_canonize(const std::string& path, bool verify, long long fuel, bool trace,
                 const std::string& model_flag) {
  CostModel model = resolve_model(model_flag);
  Loaded loaded = load_checked(path, model);
  Term term = loaded.file.linked_main();
  Type ty = loaded.file.linked_main_type();

  bool f_nat = ty.kind() == TypeKind::F && ty.as<ty::F>()->arg.kind() == TypeKind::Nat;
  if (!f_nat) {
    std::cerr << "error: canonize needs main : F nat, but main : " << pretty(ty) << "\n";
    throw Fail{kTypeFail};
  }

  if (trace) {
    NormalizeResult nr = Rewriter(model).normalize(term, false, fuel);
    for (const TraceEntry& entry : nr.trace)
      std::cerr << entry.rule << " @ " << (entry.path.empty() ? "root" : entry.path) << "\n";
  }

  CanonResult result = canonize(term, verify, fuel, model);
  json report;
  report["program"] = path;
  report["cost"] = model.show(result.cost);
  report["numeral"] = result.numeral;
  report["witness"] = pretty(result.witness);
  if (result.verified) {
    switch (*result.verified) {
    case CanonResult::Verified::Yes: report["verified"] = true; break;
    case CanonResult::Verified::No: report["verified"] = false; break;
    case CanonResult::Verified::Undecided: report["verified"] = "undecided"; break;
    }
  }
  report["trace_len"] = result.trace_len;
  std::cout << report.dump() << "\n";

  if (result.verified && *result.verified == CanonResult::Verified::No) return kTypeFail;
  return kOk;
}

int cmd_laws(std::uint64_t seed, int count, int size, const std::string& model_flag) {
  CostModel model = resolve_model(model_flag);
  LawsReport report = run_laws(seed, count, size, model, std::cerr);
  std::cout << format_laws_table(report);
  return report.ok() ? kOk : kTypeFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"calf: a checker, evaluator, and canonizer for a cost-aware"
               " call-by-push-value language"};
  app.require_subcommand(1);

  std::string path;
  std::string model_flag;
  std::string phase = "cost";
  bool verify = false;
  bool trace = false;
  long long fuel = 100000;
  std::uint64_t seed = 0;
  int count = 200;
  int size = 20;

  CLI::App* check = app.add_subcommand("check", "Parse and type-check a program");
  check->add_option("file", path, "program file")->required();
  check->add_option("--cost-model", model_flag, "cost monoid (nat, nat-max, pair:a,b)");

  CLI::App* run = app.add_subcommand("run", "Evaluate main and report cost and value");
  run->add_option("file", path, "program file")->required();
  run->add_option("--phase", phase, "world to evaluate in")
      ->check(CLI::IsMember({"cost", "beh"}));
  run->add_option("--cost-model", model_flag, "cost monoid (nat, nat-max, pair:a,b)");

  CLI::App* canonize_cmd =
      app.add_subcommand("canonize", "Reduce main : F nat to step{c} ret(numeral)");
  canonize_cmd->add_option("file", path, "program file")->required();
  canonize_cmd->add_flag("--verify", verify, "re-derive the witness by rewriting");
  canonize_cmd->add_option("--fuel", fuel, "rewrite budget")->check(CLI::NonNegativeNumber);
  canonize_cmd->add_flag("--trace", trace, "print rule firings to stderr");
  canonize_cmd->add_option("--cost-model", model_flag, "cost monoid (nat, nat-max, pair:a,b)");

  CLI::App* laws = app.add_subcommand("laws", "Property-test the equational laws");
  laws->add_option("--seed", seed, "base random seed");
  laws->add_option("--count", count, "instances per schema")->check(CLI::PositiveNumber);
  laws->add_option("--size", size, "generated body size")->check(CLI::PositiveNumber);
  laws->add_option("--cost-model", model_flag, "cost monoid (nat, nat-max, pair:a,b)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseFail;
  }

  try {
    if (*check) return cmd_check(path, model_flag);
    if (*run) return cmd_run(path, phase, model_flag);
    if (*canonize_cmd) return cmd_canonize(path, verify, fuel, trace, model_flag);
    return cmd_laws(seed, count, size, model_flag);
  } catch (const Fail& f) {
    return f.code;
  }
}
