#include "calf/eval.hpp"

#include "calf/parser.hpp"
#include "calf/rewrite.hpp"

#include <stdexcept>
#include <utility>

namespace calf {

using namespace sem;

Evaluator::Evaluator(CostModel model) : model_(std::move(model)) {}

void Evaluator::add_cost(SemComp& r, const CostElem& amount, World w) const {
  if (w == World::Beh || model_.is_zero(amount)) return;
  if (auto* rc = std::get_if<RetC>(&r.c)) {
    rc->cost = model_.plus(amount, rc->cost); // earlier cost on the left
    return;
  }
  auto& cl = std::get<Closure>(r.c);
  cl.pending = model_.plus(amount, cl.pending);
}

SemVal Evaluator::eval_val(const Env& env, World w, const Term& t) const {
  switch (t.kind()) {
  case TermKind::Var: {
    std::size_t i = static_cast<std::size_t>(t.as<tm::Var>()->index);
    if (i >= env.size()) throw std::logic_error("evaluator: unbound variable");
    return env[env.size() - 1 - i];
  }
  case TermKind::Zero:
    return SemVal{Num{0}};
  case TermKind::Suc: {
    SemVal a = eval_val(env, w, t.as<tm::Suc>()->arg);
    auto* n = a.as<Num>();
    if (!n) throw std::logic_error("evaluator: suc of a non-number");
    return SemVal{Num{n->n + 1}};
  }
  case TermKind::Pair: {
    auto* p = t.as<tm::Pair>();
    return SemVal{PairV{std::make_shared<SemVal>(eval_val(env, w, p->fst)),
                        std::make_shared<SemVal>(eval_val(env, w, p->snd))}};
  }
  case TermKind::Refl:
    return SemVal{ReflV{}};
  case TermKind::Seal: {
    if (w == World::Beh) return SemVal{StarV{}}; // sealing trivializes
    return SemVal{SealedV{std::make_shared<SemVal>(eval_val(env, w, t.as<tm::Seal>()->arg))}};
  }
  case TermKind::Star:
    return SemVal{StarV{}};
  case TermKind::PLam:
    // The body lives under the phase, hence in the behavioral world.
    return SemVal{OpV{std::make_shared<SemVal>(eval_val(env, World::Beh, t.as<tm::PLam>()->body))}};
  case TermKind::PAp: {
    SemVal f = eval_val(env, w, t.as<tm::PAp>()->arg);
    auto* o = f.as<OpV>();
    if (!o) throw std::logic_error("evaluator: papp of a non-phase-function");
    return *o->payload;
  }
  case TermKind::Split: {
    auto* s = t.as<tm::Split>();
    SemVal p = eval_val(env, w, s->scrut);
    auto* pv = p.as<PairV>();
    if (!pv) throw std::logic_error("evaluator: split of a non-pair");
    Env e2 = env;
    e2.push_back(*pv->fst);
    e2.push_back(*pv->snd);
    return eval_val(e2, w, s->body);
  }
  default:
    // A computation form in value position is a suspended computation.
    return SemVal{Thunk{std::make_shared<SemComp>(eval_comp(env, w, t))}};
  }
}

SemComp Evaluator::eval_comp(const Env& env, World w, const Term& t) const {
  switch (t.kind()) {
  case TermKind::Ret:
    return SemComp{RetC{model_.zero(), eval_val(env, w, t.as<tm::Ret>()->arg)}};
  case TermKind::Bind: {
    auto* b = t.as<tm::Bind>();
    SemComp e = eval_comp(env, w, b->scrut);
    auto* rc = e.as<RetC>();
    if (!rc) throw std::logic_error("evaluator: bind of a non-returner");
    Env e2 = env;
    e2.push_back(rc->value);
    SemComp r = eval_comp(e2, w, b->body);
    add_cost(r, rc->cost, w);
    return r;
  }
  case TermKind::Step: {
    auto* s = t.as<tm::Step>();
    SemComp r = eval_comp(env, w, s->body);
    if (w == World::Cost) add_cost(r, s->cost.normalized(model_), w);
    return r;
  }
  case TermKind::Lam:
    return SemComp{Closure{model_.zero(), env, t.as<tm::Lam>()->body, w}};
  case TermKind::Ap: {
    auto* a = t.as<tm::Ap>();
    SemComp f = eval_comp(env, w, a->fn);
    auto* cl = f.as<Closure>();
    if (!cl) throw std::logic_error("evaluator: applied a non-function");
    if (cl->world == World::Beh && w == World::Cost)
      throw std::logic_error("evaluator: behavioral function escaped into the cost world");
    Env e2 = cl->env;
    e2.push_back(eval_val(env, w, a->arg));
    SemComp r = eval_comp(e2, w, cl->body);
    add_cost(r, cl->pending, w);
    return r;
  }
  case TermKind::Split: {
    auto* s = t.as<tm::Split>();
    SemVal p = eval_val(env, w, s->scrut);
    auto* pv = p.as<PairV>();
    if (!pv) throw std::logic_error("evaluator: split of a non-pair");
    Env e2 = env;
    e2.push_back(*pv->fst);
    e2.push_back(*pv->snd);
    return eval_comp(e2, w, s->body);
  }
  case TermKind::Ind: {
    auto* i = t.as<tm::Ind>();
    SemVal sv = eval_val(env, w, i->scrut);
    auto* n = sv.as<Num>();
    if (!n) throw std::logic_error("evaluator: ind of a non-number");
    SemComp acc = eval_comp(env, w, i->zero_branch);
    for (std::uint64_t k = 1; k <= n->n; ++k) {
      Env e2 = env;
      e2.push_back(SemVal{Num{k - 1}});
      e2.push_back(SemVal{Thunk{std::make_shared<SemComp>(std::move(acc))}});
      acc = eval_comp(e2, w, i->suc_branch);
    }
    return acc;
  }
  case TermKind::UnsealInd: {
    auto* u = t.as<tm::UnsealInd>();
    SemVal sv = eval_val(env, w, u->scrut);
    if (auto* se = sv.as<SealedV>()) {
      Env e2 = env;
      e2.push_back(*se->arg);
      return eval_comp(e2, w, u->eta_branch);
    }
    if (sv.as<StarV>()) {
      if (w == World::Cost)
        throw std::logic_error("evaluator: unseal of * outside the behavioral world");
      return eval_comp(env, w, u->star_branch);
    }
    throw std::logic_error("evaluator: unseal of a non-sealed value");
  }
  default: {
    // A value form in computation position must be a suspended computation.
    SemVal v = eval_val(env, w, t);
    if (auto* th = v.as<Thunk>()) return *th->comp;
    throw std::logic_error("evaluator: forced a value that is not a thunk");
  }
  }
}

namespace {

bool env_eq(const Env& a, const Env& b, const CostModel& m) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!sem_eq(a[i], b[i], m)) return false;
  return true;
}

} // namespace

bool sem_eq(const SemVal& a, const SemVal& b, const CostModel& m) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      overloaded{
          [&](const Num& x) { return x.n == b.as<Num>()->n; },
          [&](const Thunk& x) { return sem_eq(*x.comp, *b.as<Thunk>()->comp, m); },
          [&](const Closure& x) {
            const Closure& y = *b.as<Closure>();
            return x.world == y.world && x.pending == y.pending && env_eq(x.env, y.env, m) &&
                   alpha_eq(x.body, y.body, m);
          },
          [&](const PairV& x) {
            const PairV& y = *b.as<PairV>();
            return sem_eq(*x.fst, *y.fst, m) && sem_eq(*x.snd, *y.snd, m);
          },
          [&](const ReflV&) { return true; },
          [&](const SealedV& x) { return sem_eq(*x.arg, *b.as<SealedV>()->arg, m); },
          [&](const StarV&) { return true; },
          [&](const OpV& x) { return sem_eq(*x.payload, *b.as<OpV>()->payload, m); },
      },
      a.v);
}

bool sem_eq(const SemComp& a, const SemComp& b, const CostModel& m) {
  if (a.c.index() != b.c.index()) return false;
  if (auto* ra = std::get_if<RetC>(&a.c)) {
    auto* rb = std::get_if<RetC>(&b.c);
    return ra->cost == rb->cost && sem_eq(ra->value, rb->value, m);
  }
  const Closure& x = std::get<Closure>(a.c);
  const Closure& y = std::get<Closure>(b.c);
  return x.world == y.world && x.pending == y.pending && env_eq(x.env, y.env, m) &&
         alpha_eq(x.body, y.body, m);
}

bool is_ground_type(const Type& ty) {
  switch (ty.kind()) {
  case TypeKind::Nat:
    return true;
  case TypeKind::Sig: {
    auto* s = ty.as<ty::Sig>();
    return is_ground_type(s->fst) && !mentions_var(s->snd, 0) && is_ground_type(s->snd);
  }
  case TypeKind::Cl:
    return is_ground_type(ty.as<ty::Cl>()->arg);
  case TypeKind::Op:
    return is_ground_type(ty.as<ty::Op>()->arg);
  case TypeKind::F:
    return is_ground_type(ty.as<ty::F>()->arg);
  default:
    return false;
  }
}

namespace {

[[noreturn]] void non_ground(const Type& ty) {
  throw std::invalid_argument("not a ground type: " + pretty(ty));
}

} // namespace

SemVal erase(const SemVal& v, const Type& ty, const CostModel& m) {
  switch (ty.kind()) {
  case TypeKind::Nat:
    if (!v.as<Num>()) throw std::logic_error("erase: expected a number");
    return v;
  case TypeKind::Sig: {
    auto* s = ty.as<ty::Sig>();
    auto* p = v.as<PairV>();
    if (!p) throw std::logic_error("erase: expected a pair");
    return SemVal{PairV{std::make_shared<SemVal>(erase(*p->fst, s->fst, m)),
                        std::make_shared<SemVal>(erase(*p->snd, shift(s->snd, -1), m))}};
  }
  case TypeKind::Cl:
    return SemVal{StarV{}}; // the closed modality trivializes behaviorally
  case TypeKind::Op: {
    auto* o = v.as<OpV>();
    if (!o) throw std::logic_error("erase: expected a phase function");
    return SemVal{OpV{
        std::make_shared<SemVal>(erase(*o->payload, ty.as<ty::Op>()->arg, m))}};
  }
  default:
    non_ground(ty);
  }
}

SemVal erase(const SemComp& c, const Type& ty, const CostModel& m) {
  if (ty.kind() != TypeKind::F) non_ground(ty);
  auto* rc = c.as<RetC>();
  if (!rc) throw std::logic_error("erase: expected a finished returner");
  return erase(rc->value, ty.as<ty::F>()->arg, m);
}

Term readback(const SemVal& v, const Type& ty, const CostModel& m) {
  switch (ty.kind()) {
  case TypeKind::Nat: {
    auto* n = v.as<Num>();
    if (!n) throw std::logic_error("readback: expected a number");
    return numeral(n->n);
  }
  case TypeKind::Sig: {
    auto* s = ty.as<ty::Sig>();
    auto* p = v.as<PairV>();
    if (!p) throw std::logic_error("readback: expected a pair");
    return mk_pair(readback(*p->fst, s->fst, m), readback(*p->snd, shift(s->snd, -1), m));
  }
  case TypeKind::Cl: {
    if (v.as<StarV>()) return mk_star();
    auto* se = v.as<SealedV>();
    if (!se) throw std::logic_error("readback: expected a sealed value");
    return mk_seal(readback(*se->arg, ty.as<ty::Cl>()->arg, m));
  }
  case TypeKind::Op: {
    auto* o = v.as<OpV>();
    if (!o) throw std::logic_error("readback: expected a phase function");
    return mk_plam(readback(*o->payload, ty.as<ty::Op>()->arg, m));
  }
  default:
    non_ground(ty);
  }
}

Term readback(const SemComp& c, const Type& ty, const CostModel& m) {
  if (ty.kind() != TypeKind::F) non_ground(ty);
  auto* rc = c.as<RetC>();
  if (!rc) throw std::logic_error("readback: expected a finished returner");
  Term inner = mk_ret(readback(rc->value, ty.as<ty::F>()->arg, m));
  if (m.is_zero(rc->cost)) return inner;
  return mk_step(CostExpr::lit(rc->cost), inner);
}

CanonResult canonize(const Term& t, bool verify, long long fuel, const CostModel& model) {
  Evaluator ev(model);
  SemComp r = ev.eval_comp({}, World::Cost, t);
  auto* rc = r.as<RetC>();
  if (!rc) throw std::logic_error("canonize: the computation is a function, not a returner");
  auto* num = rc->value.as<Num>();
  if (!num) throw std::logic_error("canonize: the returned value is not a number");

  CanonResult out;
  out.cost = rc->cost;
  out.numeral = num->n;
  Term ret = mk_ret(numeral(num->n));
  out.witness = model.is_zero(rc->cost) ? ret : mk_step(CostExpr::lit(rc->cost), ret);
  if (verify) {
    Rewriter rw(model);
    Verdict v = rw.prove_equal(t, out.witness, false, fuel);
    out.trace_len = v.trace.size();
    switch (v.kind) {
    case Verdict::Kind::Equal: out.verified = CanonResult::Verified::Yes; break;
    case Verdict::Kind::Undecided: out.verified = CanonResult::Verified::Undecided; break;
    case Verdict::Kind::Distinct: out.verified = CanonResult::Verified::No; break;
    }
  }
  return out;
}

} // namespace calf
