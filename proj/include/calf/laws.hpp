#pragma once

#include "calf/cost.hpp"
#include "calf/rewrite.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace calf {

struct LawRow {
  std::string name;
  int instances = 0;
  int failures = 0;
};

struct LawsReport {
  std::vector<LawRow> rows;

  int total_failures() const;
  bool ok() const { return total_failures() == 0; }
};

// Runs the equation-schema suite over `count` generated instances per schema
// (bodies built around `size` nodes): the bind laws, the step laws, ap_step
// and bind_step, the ind computation rules, the phase guard for step
// erasure, the cost-erasure square, and canonization of ground programs.
// Each equation is checked on two independent routes — the rewriter must
// prove the sides equal and the evaluator must produce semantically equal
// results — so a bug in either one surfaces as a disagreement. Failing
// instances are printed to `err` with the seed that replays them. The report
// and its table are a pure function of the arguments: no timing, no
// ordering nondeterminism. A caller may pass its own rewriter (for example
// one with a deliberately broken rule) to confirm the suite catches rule
// mutations.
LawsReport run_laws(std::uint64_t seed, int count, int size, const CostModel& model,
                    std::ostream& err, const Rewriter* rewriter = nullptr,
                    long long fuel = 100000);

// Fixed-width summary table: header plus one line per row and a total line.
std::string format_laws_table(const LawsReport& report);

} // namespace calf
