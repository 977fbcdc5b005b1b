#pragma once

#include "calf/cost.hpp"
#include "calf/syntax.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace calf {

// One oriented rewrite. `apply` yields the reduct when the rule matches at
// the root of the given term. Rules marked needs_phase are sound only under
// the behavioral phase; rules marked root_only are the eta contractions,
// applied as a post-pass at the root so they cannot fight the beta rules.
struct Rule {
  std::string name;
  bool needs_phase = false;
  bool root_only = false;
  std::function<std::optional<Term>(const Term&, const CostModel&)> apply;
};

using RuleSet = std::vector<Rule>;

// The full oriented rule set in priority order: step_beh (phase), cost_norm,
// step_0, step_plus, bind_step, bind_beta, bind_assoc, ap_step, pi_beta,
// sig_beta, op_beta, ind_zero, ind_suc, ind_cl_eta, ind_cl_star, law_cl
// (phase), then the root-only etas bind_eta, pi_eta, sig_eta, op_eta.
// bind_step is deliberately ahead of bind_beta: costs hoist outward first,
// driving terms toward the step{c} ret v shape.
RuleSet standard_rules();

struct TraceEntry {
  std::string rule;
  std::string path; // dot-separated child indices from the root; "" = root
};

struct NormalizeResult {
  Term term;
  bool exhausted = false;
  std::vector<TraceEntry> trace;
};

// Three-valued equality: Distinct is only claimed on differing ground normal
// forms, so fuel exhaustion and stuck shapes stay honestly Undecided.
struct Verdict {
  enum class Kind { Equal, Distinct, Undecided };
  Kind kind = Kind::Undecided;
  std::vector<TraceEntry> trace; // Equal: firings on both sides, lhs first
  Term lhs_normal;               // Distinct: the two ground normal forms
  Term rhs_normal;

  bool equal() const { return kind == Kind::Equal; }
  bool distinct() const { return kind == Kind::Distinct; }
  bool undecided() const { return kind == Kind::Undecided; }
};

// Shapes on which a Distinct verdict may rest: numerals, ret of a numeral,
// and step{c} ret of a numeral with a literal cost.
bool is_ground_normal(const Term& t);

class Rewriter {
public:
  explicit Rewriter(CostModel model, RuleSet rules = standard_rules());

  // Innermost-leftmost reduction, one fuel unit per firing. The phase flag
  // flips to true under plam bodies and unseal * branches. Throws
  // std::logic_error if a phase-guarded rule ever fires with phase off.
  NormalizeResult normalize(const Term& t, bool phase, long long fuel) const;

  // Normalizes both sides with the full fuel budget each and compares.
  Verdict prove_equal(const Term& a, const Term& b, bool phase, long long fuel) const;

  // All terms reachable by exactly one firing anywhere in t, phase threaded
  // as in normalize but with no strategy or priority; root_only rules apply
  // at every position. Oracle hook for the strategy tests.
  std::vector<Term> all_single_steps(const Term& t, bool phase) const;

  const CostModel& model() const { return model_; }
  const RuleSet& rules() const { return rules_; }

private:
  CostModel model_;
  RuleSet rules_;
};

} // namespace calf
