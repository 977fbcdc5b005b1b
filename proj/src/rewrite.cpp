#include "calf/rewrite.hpp"

#include <stdexcept>
#include <utility>

namespace calf {
namespace {

// ---- rule bodies; each matches at the root only ----

std::optional<Term> ru_step_beh(const Term& t, const CostModel&) {
  if (auto* s = t.as<tm::Step>()) return s->body;
  return std::nullopt;
}

std::optional<Term> ru_cost_norm(const Term& t, const CostModel& m) {
  if (auto* s = t.as<tm::Step>())
    if (!s->cost.is_lit()) return mk_step(CostExpr::lit(s->cost.normalized(m)), s->body, t.span());
  return std::nullopt;
}

std::optional<Term> ru_step_0(const Term& t, const CostModel& m) {
  if (auto* s = t.as<tm::Step>())
    if (s->cost.is_lit() && m.is_zero(s->cost.lit_elem())) return s->body;
  return std::nullopt;
}

std::optional<Term> ru_step_plus(const Term& t, const CostModel& m) {
  auto* outer = t.as<tm::Step>();
  if (!outer || !outer->cost.is_lit()) return std::nullopt;
  auto* inner = outer->body.as<tm::Step>();
  if (!inner || !inner->cost.is_lit()) return std::nullopt;
  // the outer cost is incurred first: it is the left operand
  CostElem sum = m.plus(outer->cost.lit_elem(), inner->cost.lit_elem());
  return mk_step(CostExpr::lit(std::move(sum)), inner->body, t.span());
}

std::optional<Term> ru_bind_step(const Term& t, const CostModel&) {
  auto* b = t.as<tm::Bind>();
  if (!b) return std::nullopt;
  auto* s = b->scrut.as<tm::Step>();
  if (!s) return std::nullopt;
  return mk_step(s->cost, mk_bind(s->body, b->body), t.span());
}

std::optional<Term> ru_bind_beta(const Term& t, const CostModel&) {
  auto* b = t.as<tm::Bind>();
  if (!b) return std::nullopt;
  auto* r = b->scrut.as<tm::Ret>();
  if (!r) return std::nullopt;
  return subst(b->body, r->arg);
}

std::optional<Term> ru_bind_assoc(const Term& t, const CostModel&) {
  auto* outer = t.as<tm::Bind>();
  if (!outer) return std::nullopt;
  auto* inner = outer->scrut.as<tm::Bind>();
  if (!inner) return std::nullopt;
  // bind (bind e f) g = bind e (\a. bind (f a) g); g gains one binder
  return mk_bind(inner->scrut, mk_bind(inner->body, shift(outer->body, 1, 1)), t.span());
}

std::optional<Term> ru_ap_step(const Term& t, const CostModel&) {
  auto* a = t.as<tm::Ap>();
  if (!a) return std::nullopt;
  auto* s = a->fn.as<tm::Step>();
  if (!s) return std::nullopt;
  return mk_step(s->cost, mk_ap(s->body, a->arg), t.span());
}

std::optional<Term> ru_pi_beta(const Term& t, const CostModel&) {
  auto* a = t.as<tm::Ap>();
  if (!a) return std::nullopt;
  auto* l = a->fn.as<tm::Lam>();
  if (!l) return std::nullopt;
  return subst(l->body, a->arg);
}

std::optional<Term> ru_sig_beta(const Term& t, const CostModel&) {
  auto* s = t.as<tm::Split>();
  if (!s) return std::nullopt;
  auto* p = s->scrut.as<tm::Pair>();
  if (!p) return std::nullopt;
  return subst(subst_at(s->body, p->fst, 1), p->snd);
}

std::optional<Term> ru_op_beta(const Term& t, const CostModel&) {
  auto* a = t.as<tm::PAp>();
  if (!a) return std::nullopt;
  auto* l = a->arg.as<tm::PLam>();
  if (!l) return std::nullopt;
  return l->body; // phase binders bind no term variable
}

std::optional<Term> ru_ind_zero(const Term& t, const CostModel&) {
  auto* i = t.as<tm::Ind>();
  if (!i) return std::nullopt;
  if (i->scrut.kind() != TermKind::Zero) return std::nullopt;
  return i->zero_branch;
}

std::optional<Term> ru_ind_suc(const Term& t, const CostModel&) {
  auto* i = t.as<tm::Ind>();
  if (!i) return std::nullopt;
  auto* s = i->scrut.as<tm::Suc>();
  if (!s) return std::nullopt;
  Term rec = mk_ind(s->arg, i->motive, i->zero_branch, i->suc_branch);
  return subst(subst_at(i->suc_branch, s->arg, 1), rec);
}

std::optional<Term> ru_ind_cl_eta(const Term& t, const CostModel&) {
  auto* u = t.as<tm::UnsealInd>();
  if (!u) return std::nullopt;
  auto* s = u->scrut.as<tm::Seal>();
  if (!s) return std::nullopt;
  return subst(u->eta_branch, s->arg);
}

std::optional<Term> ru_ind_cl_star(const Term& t, const CostModel&) {
  auto* u = t.as<tm::UnsealInd>();
  if (!u) return std::nullopt;
  if (u->scrut.kind() != TermKind::Star) return std::nullopt;
  return u->star_branch; // the * branch binds no term variable
}

std::optional<Term> ru_law_cl(const Term& t, const CostModel&) {
  if (t.kind() == TermKind::Seal) return mk_star(t.span());
  return std::nullopt;
}

std::optional<Term> ru_bind_eta(const Term& t, const CostModel&) {
  auto* b = t.as<tm::Bind>();
  if (!b) return std::nullopt;
  auto* r = b->body.as<tm::Ret>();
  if (!r) return std::nullopt;
  auto* v = r->arg.as<tm::Var>();
  if (!v || v->index != 0) return std::nullopt;
  return b->scrut;
}

std::optional<Term> ru_pi_eta(const Term& t, const CostModel&) {
  auto* l = t.as<tm::Lam>();
  if (!l) return std::nullopt;
  auto* a = l->body.as<tm::Ap>();
  if (!a) return std::nullopt;
  auto* v = a->arg.as<tm::Var>();
  if (!v || v->index != 0) return std::nullopt;
  if (mentions_var(a->fn, 0)) return std::nullopt;
  return shift(a->fn, -1);
}

std::optional<Term> ru_sig_eta(const Term& t, const CostModel&) {
  auto* s = t.as<tm::Split>();
  if (!s) return std::nullopt;
  auto* p = s->body.as<tm::Pair>();
  if (!p) return std::nullopt;
  auto* f = p->fst.as<tm::Var>();
  auto* sn = p->snd.as<tm::Var>();
  if (!f || f->index != 1 || !sn || sn->index != 0) return std::nullopt;
  return s->scrut;
}

std::optional<Term> ru_op_eta(const Term& t, const CostModel&) {
  auto* l = t.as<tm::PLam>();
  if (!l) return std::nullopt;
  auto* a = l->body.as<tm::PAp>();
  if (!a) return std::nullopt;
  return a->arg;
}

// ---- the engine ----

struct Engine {
  const CostModel& model;
  const std::vector<const Rule*>& inner_rules;
  long long fuel;
  bool exhausted = false;
  std::vector<TraceEntry> trace;

  static bool same(const Term& a, const Term& b) { return &a.raw() == &b.raw(); }

  static std::string child_path(const std::string& path, int i) {
    return path.empty() ? std::to_string(i) : path + "." + std::to_string(i);
  }

  std::optional<Term> fire_at(const Term& t, bool phase, const std::string& path,
                              const std::vector<const Rule*>& rules) {
    for (const Rule* r : rules) {
      if (r->needs_phase && !phase) continue;
      auto reduct = r->apply(t, model);
      if (!reduct) continue;
      if (r->needs_phase && !phase)
        throw std::logic_error("phase-guarded rule " + r->name + " fired with the phase off");
      if (fuel <= 0) {
        exhausted = true;
        return std::nullopt;
      }
      --fuel;
      trace.push_back(TraceEntry{r->name, path});
      return reduct;
    }
    return std::nullopt;
  }

  Term norm(Term t, bool phase, const std::string& path) {
    for (;;) {
      if (exhausted) return t;
      t = children(std::move(t), phase, path);
      if (exhausted) return t;
      auto next = fire_at(t, phase, path, inner_rules);
      if (!next) return t;
      t = std::move(*next);
    }
  }

  Term children(Term t, bool phase, const std::string& path) {
    auto n = [&](int i, const Term& c, bool ph) { return norm(c, ph, child_path(path, i)); };
    return std::visit(
        overloaded{
            [&](const tm::Var&) { return t; },
            [&](const tm::Zero&) { return t; },
            [&](const tm::Refl&) { return t; },
            [&](const tm::Star&) { return t; },
            [&](const tm::Suc& x) {
              Term a = n(0, x.arg, phase);
              return same(a, x.arg) ? t : mk_suc(std::move(a), t.span());
            },
            [&](const tm::Ret& x) {
              Term a = n(0, x.arg, phase);
              return same(a, x.arg) ? t : mk_ret(std::move(a), t.span());
            },
            [&](const tm::Bind& x) {
              Term s = n(0, x.scrut, phase);
              Term b = n(1, x.body, phase);
              return same(s, x.scrut) && same(b, x.body)
                         ? t
                         : mk_bind(std::move(s), std::move(b), t.span());
            },
            [&](const tm::Step& x) {
              Term b = n(0, x.body, phase);
              return same(b, x.body) ? t : mk_step(x.cost, std::move(b), t.span());
            },
            [&](const tm::Lam& x) {
              Term b = n(0, x.body, phase);
              return same(b, x.body) ? t : mk_lam(std::move(b), t.span());
            },
            [&](const tm::Ap& x) {
              Term f = n(0, x.fn, phase);
              Term a = n(1, x.arg, phase);
              return same(f, x.fn) && same(a, x.arg) ? t
                                                     : mk_ap(std::move(f), std::move(a), t.span());
            },
            [&](const tm::Pair& x) {
              Term a = n(0, x.fst, phase);
              Term b = n(1, x.snd, phase);
              return same(a, x.fst) && same(b, x.snd)
                         ? t
                         : mk_pair(std::move(a), std::move(b), t.span());
            },
            [&](const tm::Split& x) {
              Term s = n(0, x.scrut, phase);
              Term b = n(1, x.body, phase);
              return same(s, x.scrut) && same(b, x.body)
                         ? t
                         : mk_split(std::move(s), std::move(b), t.span());
            },
            [&](const tm::Seal& x) {
              Term a = n(0, x.arg, phase);
              return same(a, x.arg) ? t : mk_seal(std::move(a), t.span());
            },
            [&](const tm::UnsealInd& x) {
              Term s = n(0, x.scrut, phase);
              Term e = n(1, x.eta_branch, phase);
              Term st = n(2, x.star_branch, true); // * branch assumes the phase
              return same(s, x.scrut) && same(e, x.eta_branch) && same(st, x.star_branch)
                         ? t
                         : mk_unseal_ind(std::move(s), x.motive, std::move(e), std::move(st),
                                         t.span());
            },
            [&](const tm::PLam& x) {
              Term b = n(0, x.body, true); // body assumes the phase
              return same(b, x.body) ? t : mk_plam(std::move(b), t.span());
            },
            [&](const tm::PAp& x) {
              Term a = n(0, x.arg, phase);
              return same(a, x.arg) ? t : mk_pap(std::move(a), t.span());
            },
            [&](const tm::Ind& x) {
              Term s = n(0, x.scrut, phase);
              Term z = n(1, x.zero_branch, phase);
              Term sb = n(2, x.suc_branch, phase);
              return same(s, x.scrut) && same(z, x.zero_branch) && same(sb, x.suc_branch)
                         ? t
                         : mk_ind(std::move(s), x.motive, std::move(z), std::move(sb), t.span());
            },
        },
        node_of(t));
  }
};

} // namespace

RuleSet standard_rules() {
  RuleSet rules;
  auto add = [&](const char* name, bool needs_phase, bool root_only, auto fn) {
    rules.push_back(Rule{name, needs_phase, root_only, fn});
  };
  add("step_beh", true, false, ru_step_beh);
  add("cost_norm", false, false, ru_cost_norm);
  add("step_0", false, false, ru_step_0);
  add("step_plus", false, false, ru_step_plus);
  add("bind_step", false, false, ru_bind_step);
  add("bind_beta", false, false, ru_bind_beta);
  add("bind_assoc", false, false, ru_bind_assoc);
  add("ap_step", false, false, ru_ap_step);
  add("pi_beta", false, false, ru_pi_beta);
  add("sig_beta", false, false, ru_sig_beta);
  add("op_beta", false, false, ru_op_beta);
  add("ind_zero", false, false, ru_ind_zero);
  add("ind_suc", false, false, ru_ind_suc);
  add("ind_cl_eta", false, false, ru_ind_cl_eta);
  add("ind_cl_star", false, false, ru_ind_cl_star);
  add("law_cl", true, false, ru_law_cl);
  add("bind_eta", false, true, ru_bind_eta);
  add("pi_eta", false, true, ru_pi_eta);
  add("sig_eta", false, true, ru_sig_eta);
  add("op_eta", false, true, ru_op_eta);
  return rules;
}

bool is_ground_normal(const Term& t) {
  if (as_numeral(t)) return true;
  if (auto* r = t.as<tm::Ret>()) return as_numeral(r->arg).has_value();
  if (auto* s = t.as<tm::Step>()) {
    if (!s->cost.is_lit()) return false;
    auto* r = s->body.as<tm::Ret>();
    return r && as_numeral(r->arg).has_value();
  }
  return false;
}

Rewriter::Rewriter(CostModel model, RuleSet rules)
    : model_(std::move(model)), rules_(std::move(rules)) {}

NormalizeResult Rewriter::normalize(const Term& t, bool phase, long long fuel) const {
  std::vector<const Rule*> inner, root;
  for (const Rule& r : rules_) (r.root_only ? root : inner).push_back(&r);
  Engine e{model_, inner, fuel};
  Term cur = e.norm(t, phase, "");
  while (!e.exhausted) {
    auto fired = e.fire_at(cur, phase, "", root);
    if (!fired) break;
    cur = e.norm(std::move(*fired), phase, "");
  }
  return NormalizeResult{std::move(cur), e.exhausted, std::move(e.trace)};
}

Verdict Rewriter::prove_equal(const Term& a, const Term& b, bool phase, long long fuel) const {
  NormalizeResult na = normalize(a, phase, fuel);
  NormalizeResult nb = normalize(b, phase, fuel);
  Verdict v;
  v.trace = std::move(na.trace);
  v.trace.insert(v.trace.end(), nb.trace.begin(), nb.trace.end());
  v.lhs_normal = na.term;
  v.rhs_normal = nb.term;
  if (alpha_eq(na.term, nb.term, model_)) {
    v.kind = Verdict::Kind::Equal;
  } else if (!na.exhausted && !nb.exhausted && is_ground_normal(na.term) &&
             is_ground_normal(nb.term)) {
    v.kind = Verdict::Kind::Distinct;
  } else {
    v.kind = Verdict::Kind::Undecided;
  }
  return v;
}

std::vector<Term> Rewriter::all_single_steps(const Term& t, bool phase) const {
  std::vector<Term> out;
  for (const Rule& r : rules_) {
    if (r.needs_phase && !phase) continue;
    if (auto red = r.apply(t, model_)) out.push_back(std::move(*red));
  }
  auto descend = [&](const Term& child, bool ph, auto rebuild) {
    std::vector<Term> reds = all_single_steps(child, ph);
    for (Term& red : reds) out.push_back(rebuild(std::move(red)));
  };
  std::visit(
      overloaded{
          [&](const tm::Var&) {},
          [&](const tm::Zero&) {},
          [&](const tm::Refl&) {},
          [&](const tm::Star&) {},
          [&](const tm::Suc& x) {
            descend(x.arg, phase, [&](Term c) { return mk_suc(std::move(c)); });
          },
          [&](const tm::Ret& x) {
            descend(x.arg, phase, [&](Term c) { return mk_ret(std::move(c)); });
          },
          [&](const tm::Bind& x) {
            descend(x.scrut, phase, [&](Term c) { return mk_bind(std::move(c), x.body); });
            descend(x.body, phase, [&](Term c) { return mk_bind(x.scrut, std::move(c)); });
          },
          [&](const tm::Step& x) {
            descend(x.body, phase, [&](Term c) { return mk_step(x.cost, std::move(c)); });
          },
          [&](const tm::Lam& x) {
            descend(x.body, phase, [&](Term c) { return mk_lam(std::move(c)); });
          },
          [&](const tm::Ap& x) {
            descend(x.fn, phase, [&](Term c) { return mk_ap(std::move(c), x.arg); });
            descend(x.arg, phase, [&](Term c) { return mk_ap(x.fn, std::move(c)); });
          },
          [&](const tm::Pair& x) {
            descend(x.fst, phase, [&](Term c) { return mk_pair(std::move(c), x.snd); });
            descend(x.snd, phase, [&](Term c) { return mk_pair(x.fst, std::move(c)); });
          },
          [&](const tm::Split& x) {
            descend(x.scrut, phase, [&](Term c) { return mk_split(std::move(c), x.body); });
            descend(x.body, phase, [&](Term c) { return mk_split(x.scrut, std::move(c)); });
          },
          [&](const tm::Seal& x) {
            descend(x.arg, phase, [&](Term c) { return mk_seal(std::move(c)); });
          },
          [&](const tm::UnsealInd& x) {
            descend(x.scrut, phase, [&](Term c) {
              return mk_unseal_ind(std::move(c), x.motive, x.eta_branch, x.star_branch);
            });
            descend(x.eta_branch, phase, [&](Term c) {
              return mk_unseal_ind(x.scrut, x.motive, std::move(c), x.star_branch);
            });
            descend(x.star_branch, true, [&](Term c) {
              return mk_unseal_ind(x.scrut, x.motive, x.eta_branch, std::move(c));
            });
          },
          [&](const tm::PLam& x) {
            descend(x.body, true, [&](Term c) { return mk_plam(std::move(c)); });
          },
          [&](const tm::PAp& x) {
            descend(x.arg, phase, [&](Term c) { return mk_pap(std::move(c)); });
          },
          [&](const tm::Ind& x) {
            descend(x.scrut, phase, [&](Term c) {
              return mk_ind(std::move(c), x.motive, x.zero_branch, x.suc_branch);
            });
            descend(x.zero_branch, phase, [&](Term c) {
              return mk_ind(x.scrut, x.motive, std::move(c), x.suc_branch);
            });
            descend(x.suc_branch, phase, [&](Term c) {
              return mk_ind(x.scrut, x.motive, x.zero_branch, std::move(c));
            });
          },
      },
      node_of(t));
  return out;
}

} // namespace calf
