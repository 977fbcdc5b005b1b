#include "calf/laws.hpp"

#include "calf/eval.hpp"
#include "calf/gen.hpp"
#include "calf/parser.hpp"
#include "calf/syntax.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace calf {
namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 0x632be59bd9b4e019ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Term numeral(std::uint64_t n) {
  Term t = mk_zero();
  for (std::uint64_t i = 0; i < n; ++i) t = mk_suc(t);
  return t;
}

// One equation instance plus how to judge it. When `phase` is set the
// rewriter query runs under the behavioral phase and the evaluator routes
// compare at the behavioral world only (costs are meant to differ).
struct Instance {
  Term lhs;
  Term rhs;
  bool phase = false;
  bool expect_equal = true;      // rewriter: Equal demanded (else: not Equal)
  bool compare_cost_world = true;
  bool expect_cost_distinct = false; // negative phase test: costs must differ
};

struct Suite {
  const CostModel& m;
  const Rewriter& rw;
  Evaluator ev;
  long long fuel;
  int size;
  std::ostream& err;

  std::vector<CostElem> pool;    // model-valid literals
  std::vector<CostElem> nonzero; // the same minus the unit

  Suite(const CostModel& model, const Rewriter& rewriter, long long fuel_budget,
        int body_size, std::ostream& errs)
      : m(model), rw(rewriter), ev(model), fuel(fuel_budget), size(body_size), err(errs) {
    for (std::uint64_t i = 0; i <= 3; ++i) {
      CostElem leaf{i, {}};
      if (m.valid(leaf)) pool.push_back(leaf);
      for (std::uint64_t j = 0; j <= 2; ++j) {
        CostElem duo{0, {CostElem{i, {}}, CostElem{j, {}}}};
        if (i <= 2 && m.valid(duo)) pool.push_back(duo);
      }
    }
    if (pool.empty()) pool.push_back(m.zero());
    for (const CostElem& c : pool)
      if (!m.is_zero(c)) nonzero.push_back(c);
    if (nonzero.empty()) nonzero = pool;
  }

  Term fnat(std::uint64_t s) const { return gen_term(s, size, ty_f(ty_nat()), m); }
  Term natv(std::uint64_t s) const {
    return gen_term(s, std::max(2, size / 3), ty_nat(), m);
  }
  // Body of a generated function, open in variable 0 : nat. Step wrappers on
  // the function itself are peeled here; ap_step exercises them separately.
  Term body(std::uint64_t s) const {
    Term f = gen_term(s, size, ty_pi(ty_nat(), ty_f(ty_nat())), m);
    while (f.kind() == TermKind::Step) f = f.as<tm::Step>()->body;
    return f.as<tm::Lam>()->body;
  }
  CostElem cost(std::uint64_t s) const { return pool[s % pool.size()]; }
  CostElem cost_nonzero(std::uint64_t s) const { return nonzero[s % nonzero.size()]; }

  bool check(const Instance& in, const std::string& schema, std::uint64_t seed) {
    bool ok = true;
    std::string why;

    Verdict v = rw.prove_equal(in.lhs, in.rhs, in.phase, fuel);
    if (in.expect_equal && !v.equal()) {
      ok = false;
      why = v.distinct() ? "rewriter: Distinct" : "rewriter: Undecided";
    }
    if (!in.expect_equal && v.equal()) {
      ok = false;
      why = "rewriter: Equal (phase-guarded law leaked past the guard)";
    }

    if (ok) {
      SemComp lb = ev.eval_comp({}, World::Beh, in.lhs);
      SemComp rb = ev.eval_comp({}, World::Beh, in.rhs);
      if (!sem_eq(lb, rb, m)) {
        ok = false;
        why = "evaluator: behavioral results differ";
      }
    }
    if (ok && in.compare_cost_world) {
      SemComp lc = ev.eval_comp({}, World::Cost, in.lhs);
      SemComp rc = ev.eval_comp({}, World::Cost, in.rhs);
      bool same = sem_eq(lc, rc, m);
      if (in.expect_cost_distinct ? same : !same) {
        ok = false;
        why = in.expect_cost_distinct ? "evaluator: costful results wrongly agree"
                                      : "evaluator: costful results differ";
      }
    }

    if (!ok) {
      err << schema << " failed (seed " << seed << "): " << why << "\n"
          << "  lhs: " << pretty(in.lhs) << "\n"
          << "  rhs: " << pretty(in.rhs) << "\n";
    }
    return ok;
  }
};

using Builder = Instance (*)(Suite&, std::uint64_t);

Instance bind_beta(Suite& s, std::uint64_t k) {
  Term v = s.natv(mix(k, 1));
  Term b = s.body(mix(k, 2));
  return {mk_bind(mk_ret(v), b), subst(b, v)};
}

Instance bind_eta(Suite& s, std::uint64_t k) {
  Term e = s.fnat(mix(k, 1));
  return {mk_bind(e, mk_ret(mk_var(0))), e};
}

Instance bind_assoc(Suite& s, std::uint64_t k) {
  Term e1 = s.fnat(mix(k, 1));
  Term e2 = s.body(mix(k, 2));
  Term e3 = s.body(mix(k, 3));
  Term lhs = mk_bind(mk_bind(e1, e2), e3);
  Term rhs = mk_bind(e1, mk_bind(e2, shift(e3, 1, 1)));
  return {lhs, rhs};
}

Instance step_zero(Suite& s, std::uint64_t k) {
  Term e = s.fnat(mix(k, 1));
  return {mk_step(CostExpr::lit(s.m.zero()), e), e};
}

Instance step_plus(Suite& s, std::uint64_t k) {
  CostElem c1 = s.cost(mix(k, 1));
  CostElem c2 = s.cost(mix(k, 2));
  Term e = s.fnat(mix(k, 3));
  Term lhs = mk_step(CostExpr::lit(c1), mk_step(CostExpr::lit(c2), e));
  Term rhs = mk_step(CostExpr::lit(s.m.plus(c1, c2)), e);
  return {lhs, rhs};
}

Instance ap_step(Suite& s, std::uint64_t k) {
  CostElem c = s.cost(mix(k, 1));
  Term fn = mk_lam(s.body(mix(k, 2)));
  Term v = s.natv(mix(k, 3));
  Term lhs = mk_ap(mk_step(CostExpr::lit(c), fn), v);
  Term rhs = mk_step(CostExpr::lit(c), mk_ap(fn, v));
  return {lhs, rhs};
}

Instance bind_step(Suite& s, std::uint64_t k) {
  CostElem c = s.cost(mix(k, 1));
  Term e1 = s.fnat(mix(k, 2));
  Term e2 = s.body(mix(k, 3));
  Term lhs = mk_bind(mk_step(CostExpr::lit(c), e1), e2);
  Term rhs = mk_step(CostExpr::lit(c), mk_bind(e1, e2));
  return {lhs, rhs};
}

Instance ind_zero_suc(Suite& s, std::uint64_t k) {
  Term z = s.fnat(mix(k, 1));
  Term sb;
  if (mix(k, 2) % 2 == 0) {
    // Recurse through the induction hypothesis, counting a step per layer.
    CostElem c = s.cost(mix(k, 3));
    sb = mk_bind(mk_var(0), mk_step(CostExpr::lit(c), mk_ret(mk_suc(mk_var(0)))));
  } else {
    sb = shift(s.body(mix(k, 4)), 1); // uses the predecessor, ignores the IH
  }
  Type motive = ty_f(ty_nat());
  if (mix(k, 5) % 2 == 0) {
    return {mk_ind(mk_zero(), motive, z, sb), z};
  }
  std::uint64_t n = mix(k, 6) % 4;
  Term lhs = mk_ind(mk_suc(numeral(n)), motive, z, sb);
  Term rec = mk_ind(numeral(n), motive, z, sb);
  Term rhs = subst(subst(sb, rec), numeral(n));
  return {lhs, rhs};
}

Instance step_beh_phase(Suite& s, std::uint64_t k) {
  CostElem c = s.cost_nonzero(mix(k, 1));
  Term e = s.fnat(mix(k, 2));
  Instance in{mk_step(CostExpr::lit(c), e), e};
  in.phase = true;
  in.compare_cost_world = false; // the costful results differ by design
  return in;
}

Instance step_beh_nophase(Suite& s, std::uint64_t k) {
  CostElem c = s.cost_nonzero(mix(k, 1));
  // A cost-free body keeps the two sides distinct in every model: a
  // generated tail could otherwise absorb c (e.g. max(c, k) = k).
  Term e = mk_ret(s.natv(mix(k, 2)));
  Instance in{mk_step(CostExpr::lit(c), e), e};
  in.expect_equal = false;       // without the phase the sides must stay apart
  in.expect_cost_distinct = true;
  return in;
}

} // namespace

int LawsReport::total_failures() const {
  int n = 0;
  for (const LawRow& r : rows) n += r.failures;
  return n;
}

LawsReport run_laws(std::uint64_t seed, int count, int size, const CostModel& model,
                    std::ostream& err, const Rewriter* rewriter, long long fuel) {
  Rewriter fallback(model);
  const Rewriter& rw = rewriter ? *rewriter : fallback;
  Suite s(model, rw, fuel, std::max(2, size), err);

  struct Schema {
    const char* name;
    Builder build;
  };
  const Schema schemas[] = {
      {"bind_beta", bind_beta},
      {"bind_eta", bind_eta},
      {"bind_assoc", bind_assoc},
      {"step_zero", step_zero},
      {"step_plus", step_plus},
      {"ap_step", ap_step},
      {"bind_step", bind_step},
      {"ind_zero_suc", ind_zero_suc},
      {"step_beh_phase", step_beh_phase},
      {"step_beh_nophase", step_beh_nophase},
  };

  LawsReport report;
  std::uint64_t schema_index = 0;
  for (const Schema& schema : schemas) {
    LawRow row{schema.name, 0, 0};
    for (int i = 0; i < count; ++i) {
      std::uint64_t inst_seed = mix(seed, mix(schema_index, static_cast<std::uint64_t>(i)));
      Instance in = schema.build(s, inst_seed);
      ++row.instances;
      if (!s.check(in, row.name, inst_seed)) ++row.failures;
    }
    report.rows.push_back(row);
    ++schema_index;
  }

  // Cost erasure commutes with evaluation: forgetting the cost of the
  // costful run gives exactly the behavioral run.
  {
    LawRow row{"erase_square", 0, 0};
    Type fn = ty_f(ty_nat());
    for (int i = 0; i < count; ++i) {
      std::uint64_t inst_seed = mix(seed, mix(schema_index, static_cast<std::uint64_t>(i)));
      Term t = s.fnat(inst_seed);
      ++row.instances;
      SemVal lhs = erase(s.ev.eval_comp({}, World::Cost, t), fn, model);
      SemVal rhs = erase(s.ev.eval_comp({}, World::Beh, t), fn, model);
      if (!sem_eq(lhs, rhs, model)) {
        ++row.failures;
        err << "erase_square failed (seed " << inst_seed << "):\n  term: " << pretty(t) << "\n";
      }
    }
    report.rows.push_back(row);
    ++schema_index;
  }

  // Every generated ground program canonizes, and the rewriter never refutes
  // the witness. Fuel exhaustion would show up as a rewriter-route failure in
  // the schemas above; here only an outright refutation counts.
  {
    LawRow row{"canonicity", 0, 0};
    for (int i = 0; i < count; ++i) {
      std::uint64_t inst_seed = mix(seed, mix(schema_index, static_cast<std::uint64_t>(i)));
      Term t = s.fnat(inst_seed);
      ++row.instances;
      CanonResult c = canonize(t, true, fuel, model);
      if (c.verified && *c.verified == CanonResult::Verified::No) {
        ++row.failures;
        err << "canonicity failed (seed " << inst_seed << "): witness refuted\n  term: "
            << pretty(t) << "\n  witness: " << pretty(c.witness) << "\n";
      }
    }
    report.rows.push_back(row);
  }

  return report;
}

std::string format_laws_table(const LawsReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(18) << "schema" << std::right << std::setw(10)
      << "instances" << std::setw(10) << "failures" << "\n";
  int ti = 0, tf = 0;
  for (const LawRow& r : report.rows) {
    out << std::left << std::setw(18) << r.name << std::right << std::setw(10)
        << r.instances << std::setw(10) << r.failures << "\n";
    ti += r.instances;
    tf += r.failures;
  }
  out << std::left << std::setw(18) << "total" << std::right << std::setw(10) << ti
      << std::setw(10) << tf << "\n";
  return out.str();
}

} // namespace calf
