#include "oracle.hpp"

#include <stdexcept>

namespace calf::oracle {

namespace {

[[noreturn]] void stuck(const char* what) {
  throw std::runtime_error(std::string("brute interpreter stuck: ") + what);
}

// suc_branch binds the predecessor (index 1) then the recursive result
// (index 0); the two substitutions open them outermost first.
Term open2(const Term& body, const Term& outer, const Term& inner) {
  return subst(subst_at(body, outer, 1), inner);
}

bool is_comp_form(const Term& t) {
  switch (t.kind()) {
    case TermKind::Ret:
    case TermKind::Bind:
    case TermKind::Step:
    case TermKind::Lam:
    case TermKind::Ap:
    case TermKind::Ind:
    case TermKind::UnsealInd:
      return true;
    default:
      return false;
  }
}

} // namespace

Term brute_val(const Term& t, BruteWorld w, const CostModel& m) {
  switch (t.kind()) {
    case TermKind::Zero:
    case TermKind::Refl:
    case TermKind::Star:
      return t;
    case TermKind::Suc:
      return mk_suc(brute_val(t.as<tm::Suc>()->arg, w, m));
    case TermKind::Pair: {
      const auto* p = t.as<tm::Pair>();
      return mk_pair(brute_val(p->fst, w, m), brute_val(p->snd, w, m));
    }
    case TermKind::Seal:
      if (w == BruteWorld::Beh) return mk_star();
      return mk_seal(brute_val(t.as<tm::Seal>()->arg, w, m));
    case TermKind::PLam:
      return t; // payload evaluated on demand, behaviorally
    case TermKind::PAp: {
      Term f = brute_val(t.as<tm::PAp>()->arg, w, m);
      const auto* pl = f.as<tm::PLam>();
      if (!pl) stuck("papp of a non-plam value");
      return brute_val(pl->body, BruteWorld::Beh, m);
    }
    case TermKind::Split: {
      const auto* s = t.as<tm::Split>();
      Term v = brute_val(s->scrut, w, m);
      const auto* p = v.as<tm::Pair>();
      if (!p) stuck("split of a non-pair value");
      return brute_val(open2(s->body, p->fst, p->snd), w, m);
    }
    case TermKind::Var:
      stuck("free variable");
    default:
      if (is_comp_form(t)) return t; // thunk: suspended computation
      stuck("unhandled value form");
  }
}

BruteResult brute_run(const Term& t, BruteWorld w, const CostModel& m) {
  switch (t.kind()) {
    case TermKind::Ret:
      return {m.zero(), brute_val(t.as<tm::Ret>()->arg, w, m)};
    case TermKind::Bind: {
      const auto* b = t.as<tm::Bind>();
      BruteResult e = brute_run(b->scrut, w, m);
      BruteResult r = brute_run(subst(b->body, e.value), w, m);
      return {m.plus(e.cost, r.cost), r.value};
    }
    case TermKind::Step: {
      const auto* s = t.as<tm::Step>();
      BruteResult r = brute_run(s->body, w, m);
      if (w == BruteWorld::Beh) return r;
      return {m.plus(s->cost.normalized(m), r.cost), r.value};
    }
    case TermKind::Lam:
      return {m.zero(), t}; // function result; applied via Ap below
    case TermKind::Ap: {
      const auto* a = t.as<tm::Ap>();
      BruteResult f = brute_run(a->fn, w, m);
      const auto* l = f.value.as<tm::Lam>();
      if (!l) stuck("application of a non-function");
      BruteResult r = brute_run(subst(l->body, brute_val(a->arg, w, m)), w, m);
      return {m.plus(f.cost, r.cost), r.value};
    }
    case TermKind::Ind: {
      const auto* i = t.as<tm::Ind>();
      Term n = brute_val(i->scrut, w, m);
      auto num = as_numeral(n);
      if (!num) stuck("ind of a non-numeral");
      if (*num == 0) return brute_run(i->zero_branch, w, m);
      Term pred = numeral(*num - 1);
      Term rec = mk_ind(pred, i->motive, i->zero_branch, i->suc_branch);
      return brute_run(open2(i->suc_branch, pred, rec), w, m);
    }
    case TermKind::UnsealInd: {
      const auto* u = t.as<tm::UnsealInd>();
      Term v = brute_val(u->scrut, w, m);
      if (v.kind() == TermKind::Star) return brute_run(u->star_branch, w, m);
      const auto* s = v.as<tm::Seal>();
      if (!s) stuck("unseal of a non-seal value");
      return brute_run(subst(u->eta_branch, s->arg), w, m);
    }
    case TermKind::Split: {
      const auto* s = t.as<tm::Split>();
      Term v = brute_val(s->scrut, w, m);
      const auto* p = v.as<tm::Pair>();
      if (!p) stuck("split of a non-pair value");
      return brute_run(open2(s->body, p->fst, p->snd), w, m);
    }
    case TermKind::PAp: {
      // A thunk-typed payload: fetch it and keep running.
      Term payload = brute_val(t, w, m);
      return brute_run(payload, w, m);
    }
    case TermKind::Var:
      stuck("free variable");
    default:
      stuck("value form in computation position");
  }
}

} // namespace calf::oracle
