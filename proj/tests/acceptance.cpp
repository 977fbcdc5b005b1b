// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// FAIL. Tolerances are pinned here, not configurable:
//   1. >= 30 corpus programs, 100% verified; 500 generated (size <= 30),
//      >= 99% verified, remainder undecided, none refuted; < 60 s.
//   2. cost erasure square: 0 failures over corpus + generated.
//   3. law suite, 200 instances per schema: 0 failures, phase guard included.
//   4. behavioral run value == costful run value on every corpus program,
//      and behavioral reports carry no cost field.
//   5. unit-cost counting family, n in 0..8: cost n under nat-add and
//      max-pattern [0,1,1,...] under nat-max, evaluator == brute-force
//      oracle == closed form.
//   6. all 20 ill-typed files exit 1 with a spanned diagnostic.
//   7. `laws --seed 42 --count 200` twice: byte-identical stdout+stderr.

#include "calf/cost.hpp"
#include "calf/eval.hpp"
#include "calf/gen.hpp"
#include "calf/laws.hpp"
#include "calf/parser.hpp"
#include "calf/syntax.hpp"
#include "oracle.hpp"
#include "procutil.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace calf;
using procutil::shq;
using procutil::run_process;
using json = nlohmann::json;

namespace {

const std::string kBin = CALF_BIN;
const std::filesystem::path kCorpus = CORPUS_DIR;

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << number << " (" << name
            << "): " << detail << "\n";
  if (!pass) ++failures;
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".calf") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string sidecar_model(const std::filesystem::path& calf_file) {
  auto p = calf_file;
  p.replace_extension(".expect.json");
  json j = json::parse(procutil::slurp(p));
  return j.value("cost_model", "nat");
}

Term generated_term(std::uint64_t seed) {
  int size = 5 + static_cast<int>(seed % 26); // sizes 5..30
  return gen_term(seed, size, ty_f(ty_nat()), CostModel::nat_add());
}

constexpr int kGenerated = 500;
constexpr long long kFuel = 100000;

void criterion_1_canonicity() {
  auto start = std::chrono::steady_clock::now();
  auto files = corpus_files(kCorpus);

  int corpus_total = 0, corpus_verified = 0;
  for (const auto& f : files) {
    ++corpus_total;
    auto r = run_process(kBin + " canonize " + shq(f.string()) +
                         " --verify --fuel 100000 --cost-model " + sidecar_model(f));
    if (r.exit_code != 0) continue;
    json j = json::parse(r.out.substr(0, r.out.find('\n')));
    if (j["verified"] == true) ++corpus_verified;
  }

  int yes = 0, undecided = 0, refuted = 0;
  CostModel model = CostModel::nat_add();
  for (std::uint64_t seed = 0; seed < kGenerated; ++seed) {
    CanonResult c = canonize(generated_term(seed), true, kFuel, model);
    switch (*c.verified) {
    case CanonResult::Verified::Yes: ++yes; break;
    case CanonResult::Verified::Undecided: ++undecided; break;
    case CanonResult::Verified::No: ++refuted; break;
    }
  }

  auto end = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(end - start).count();

  bool pass = corpus_total >= 30 && corpus_verified == corpus_total &&
              yes >= (kGenerated * 99 + 99) / 100 && refuted == 0 && secs < 60.0;
  std::ostringstream d;
  d << "corpus " << corpus_verified << "/" << corpus_total << " verified (need all of >= 30); "
    << "generated " << yes << "/" << kGenerated << " verified, " << undecided
    << " undecided, " << refuted << " refuted (need >= " << (kGenerated * 99 + 99) / 100
    << ", 0 refuted); " << secs << "s (< 60s)";
  report(1, "canonicity suite", pass, d.str());
}

void criterion_2_erasure_square() {
  int checked = 0, bad = 0;
  Type fnat = ty_f(ty_nat());

  for (const auto& f : corpus_files(kCorpus)) {
    auto model = CostModel::by_name(sidecar_model(f));
    ParseResult parsed = parse(procutil::slurp(f), *model);
    Term t = parsed.file->linked_main();
    Evaluator ev(*model);
    ++checked;
    if (!sem_eq(erase(ev.eval_comp({}, World::Cost, t), fnat, *model),
                erase(ev.eval_comp({}, World::Beh, t), fnat, *model), *model))
      ++bad;
  }

  CostModel nat = CostModel::nat_add();
  Evaluator ev(nat);
  for (std::uint64_t seed = 0; seed < kGenerated; ++seed) {
    Term t = generated_term(seed);
    ++checked;
    if (!sem_eq(erase(ev.eval_comp({}, World::Cost, t), fnat, nat),
                erase(ev.eval_comp({}, World::Beh, t), fnat, nat), nat))
      ++bad;
  }

  std::ostringstream d;
  d << bad << " failures over " << checked << " programs (need 0)";
  report(2, "erasure square", bad == 0, d.str());
}

void criterion_3_law_suite() {
  std::ostringstream sink;
  LawsReport r = run_laws(0, 200, 20, CostModel::nat_add(), sink);
  bool shape_ok = true;
  for (const LawRow& row : r.rows)
    if (row.instances != 200) shape_ok = false;
  bool pass = r.ok() && shape_ok && r.rows.size() == 12;
  std::ostringstream d;
  d << r.total_failures() << " failures over " << r.rows.size()
    << " schemas x 200 instances (need 0; includes the phase guard)";
  report(3, "law suite", pass, d.str());
}

void criterion_4_phase_soundness() {
  int bad = 0, total = 0;
  for (const auto& f : corpus_files(kCorpus)) {
    ++total;
    std::string model_arg = " --cost-model " + sidecar_model(f);
    auto cost = run_process(kBin + " run " + shq(f.string()) + model_arg);
    auto beh = run_process(kBin + " run " + shq(f.string()) + " --phase beh" + model_arg);
    if (cost.exit_code != 0 || beh.exit_code != 0) {
      ++bad;
      continue;
    }
    json jc = json::parse(cost.out.substr(0, cost.out.find('\n')));
    json jb = json::parse(beh.out.substr(0, beh.out.find('\n')));
    if (jb.contains("cost") || jc["value"] != jb["value"]) ++bad;
  }
  std::ostringstream d;
  d << bad << " failures over " << total << " corpus programs (need 0)";
  report(4, "phase soundness", bad == 0, d.str());
}

void criterion_5_derived_cost() {
  const std::string header =
      "def count : U Pi (n : nat) F nat =\n"
      "  \\n. ind n at k. F nat { zero => ret 0 | suc p, ih => step{1} bind r <- ih ; "
      "ret (suc r) }\n";

  bool pass = true;
  std::ostringstream d;
  for (int n = 0; n <= 8 && pass; ++n) {
    std::string src = header + "main : F nat = count " + std::to_string(n) + "\n";
    for (bool use_max : {false, true}) {
      CostModel model = use_max ? CostModel::nat_max() : CostModel::nat_add();
      CostElem want{static_cast<std::uint64_t>(use_max ? (n == 0 ? 0 : 1) : n), {}};

      ParseResult parsed = parse(src, model);
      Term t = parsed.file->linked_main();

      Evaluator ev(model);
      const RetC* main_ret = ev.eval_comp({}, World::Cost, t).as<RetC>();
      oracle::BruteResult brute = oracle::brute_run(t, oracle::BruteWorld::Cost, model);

      bool value_ok = main_ret->value.as<sem::Num>() &&
                      main_ret->value.as<sem::Num>()->n == static_cast<std::uint64_t>(n);
      if (!(main_ret->cost == want) || !(brute.cost == want) || !value_ok ||
          !alpha_eq(brute.value, readback(main_ret->value, ty_nat(), model), model)) {
        pass = false;
        d << "n=" << n << " under " << model.name() << ": evaluator cost "
          << show_structural(main_ret->cost) << ", oracle cost " << show_structural(brute.cost)
          << ", want " << show_structural(want);
      }
    }
  }
  if (pass)
    d << "cost(count n) = n under nat-add and [0,1,1,1,1,1,1,1,1] under nat-max for n in "
         "0..8, evaluator == oracle == closed form";
  report(5, "derived cost check", pass, d.str());
}

void criterion_6_checker_robustness() {
  auto files = corpus_files(kCorpus / "ill");
  std::regex spanned("[^:]+\\.calf:[0-9]+:[0-9]+: error: .*");
  int bad = 0;
  for (const auto& f : files) {
    auto r = run_process(kBin + " check " + shq(f.string()));
    std::istringstream err(r.err);
    std::string first;
    std::getline(err, first);
    if (r.exit_code != 1 || !std::regex_match(first, spanned)) ++bad;
  }
  std::ostringstream d;
  d << files.size() << " ill-typed files (need 20), " << bad
    << " not rejected with exit 1 and a spanned diagnostic (need 0)";
  report(6, "checker robustness", files.size() == 20 && bad == 0, d.str());
}

void criterion_7_determinism() {
  auto a = run_process(kBin + " laws --seed 42 --count 200");
  auto b = run_process(kBin + " laws --seed 42 --count 200");
  bool pass = a.exit_code == 0 && b.exit_code == 0 && a.out == b.out && a.err == b.err;
  std::ostringstream d;
  d << "two runs " << (a.out == b.out && a.err == b.err ? "byte-identical" : "differ")
    << ", exit codes " << a.exit_code << "/" << b.exit_code;
  report(7, "determinism", pass, d.str());
}

} // namespace

int main() {
  criterion_1_canonicity();
  criterion_2_erasure_square();
  criterion_3_law_suite();
  criterion_4_phase_soundness();
  criterion_5_derived_cost();
  criterion_6_checker_robustness();
  criterion_7_determinism();
  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
