#include "calf/typecheck.hpp"

#include <utility>

namespace calf {

namespace {

std::string full_message(TypeErrorKind kind, const std::string& message,
                         const std::string& expected, const std::string& actual) {
  std::string out = type_error_kind_name(kind);
  out += ": ";
  out += message;
  if (!expected.empty() || !actual.empty()) {
    out += " (expected ";
    out += expected.empty() ? "_" : expected;
    out += ", found ";
    out += actual.empty() ? "_" : actual;
    out += ")";
  }
  return out;
}

} // namespace

const char* type_error_kind_name(TypeErrorKind k) {
  switch (k) {
  case TypeErrorKind::Mismatch: return "mismatch";
  case TypeErrorKind::Polarity: return "polarity";
  case TypeErrorKind::Unbound: return "unbound";
  case TypeErrorKind::PhaseRequired: return "phase-required";
  case TypeErrorKind::UndecidedEquality: return "undecided-equality";
  case TypeErrorKind::IllFormedCost: return "ill-formed-cost";
  }
  return "type-error";
}

TypeError::TypeError(TypeErrorKind kind_, Span span_, std::string message_, std::string expected_,
                     std::string actual_)
    : std::runtime_error(full_message(kind_, message_, expected_, actual_)), kind(kind_),
      span(span_), message(std::move(message_)), expected(std::move(expected_)),
      actual(std::move(actual_)) {}

Diagnostic TypeError::to_diagnostic() const {
  Diagnostic d;
  d.severity = Severity::Error;
  d.span = span;
  d.message = what();
  return d;
}

Checker::Checker(CostModel model, long long fuel) : rw_(std::move(model)), fuel_(fuel) {}

TriState Checker::prove(const Context& ctx, const Term& a, const Term& b) const {
  Verdict v = rw_.prove_equal(a, b, ctx.has_phase(), fuel_);
  switch (v.kind) {
  case Verdict::Kind::Equal: return TriState::Equal;
  case Verdict::Kind::Distinct: return TriState::Distinct;
  case Verdict::Kind::Undecided: return TriState::Undecided;
  }
  return TriState::Undecided;
}

Type Checker::as_value(Type t) const {
  if (is_comp_type(t)) return ty_u(t, t.span());
  return t;
}

Type Checker::as_comp(const Type& t, Span where) const {
  if (is_comp_type(t)) return t;
  if (t.kind() == TypeKind::U) return t.as<ty::U>()->comp;
  throw TypeError(TypeErrorKind::Polarity, where, "expected a computation", "a computation type",
                  pretty(t));
}

void Checker::require_equal(const Context& ctx, const Type& expected, const Type& actual,
                            Span where) const {
  switch (equal_types(ctx, as_value(expected), as_value(actual))) {
  case TriState::Equal: return;
  case TriState::Distinct:
    throw TypeError(TypeErrorKind::Mismatch, where, "type mismatch", pretty(expected),
                    pretty(actual));
  case TriState::Undecided:
    throw TypeError(TypeErrorKind::UndecidedEquality, where,
                    "could not decide whether these types agree", pretty(expected),
                    pretty(actual));
  }
}

namespace {

// Every literal element in a cost expression must belong to the model.
void validate_cost(const CostExpr& c, const CostModel& m, Span where) {
  if (c.is_zero()) return;
  if (c.is_lit()) {
    const CostElem& e = c.lit_elem();
    if (!m.valid(e))
      throw TypeError(TypeErrorKind::IllFormedCost, where,
                      "cost literal " + show_structural(e) + " does not fit cost model " +
                          std::string(m.name()));
    return;
  }
  validate_cost(c.add_lhs(), m, where);
  validate_cost(c.add_rhs(), m, where);
}

} // namespace

Type Checker::infer(const Context& ctx, const Term& t) const {
  switch (t.kind()) {
  case TermKind::Var: {
    auto* v = t.as<tm::Var>();
    auto ty = ctx.lookup(v->index);
    if (!ty)
      throw TypeError(TypeErrorKind::Unbound, t.span(),
                      "unbound variable #" + std::to_string(v->index));
    return *ty;
  }
  case TermKind::Zero:
    return ty_nat(t.span());
  case TermKind::Suc: {
    check(ctx, t.as<tm::Suc>()->arg, ty_nat());
    return ty_nat(t.span());
  }
  case TermKind::Ret: {
    Type a = as_value(infer(ctx, t.as<tm::Ret>()->arg));
    return ty_f(a, t.span());
  }
  case TermKind::Bind: {
    auto* b = t.as<tm::Bind>();
    Type x = as_comp(infer(ctx, b->scrut), b->scrut.span());
    if (x.kind() != TypeKind::F)
      throw TypeError(TypeErrorKind::Mismatch, b->scrut.span(),
                      "bind expects a returner computation", "F _", pretty(x));
    Type a = x.as<ty::F>()->arg;
    Type y = as_comp(infer(ctx.extended(a), b->body), b->body.span());
    if (mentions_var(y, 0))
      throw TypeError(TypeErrorKind::Mismatch, b->body.span(),
                      "the type of the bind body mentions the bound variable", "",
                      pretty(y));
    return shift(y, -1);
  }
  case TermKind::Step: {
    auto* s = t.as<tm::Step>();
    validate_cost(s->cost, model(), t.span());
    return as_comp(infer(ctx, s->body), s->body.span());
  }
  case TermKind::Ap: {
    auto* a = t.as<tm::Ap>();
    Term fn = a->fn;
    // Costs on the function side commute with application, so peel them.
    while (fn.kind() == TermKind::Step) {
      auto* s = fn.as<tm::Step>();
      validate_cost(s->cost, model(), fn.span());
      fn = s->body;
    }
    if (fn.kind() == TermKind::Lam) {
      Type arg_ty = as_value(infer(ctx, a->arg));
      Type body_ty =
          as_comp(infer(ctx.extended(arg_ty), fn.as<tm::Lam>()->body), fn.span());
      return subst(body_ty, a->arg);
    }
    Type fty = as_comp(infer(ctx, fn), fn.span());
    if (fty.kind() != TypeKind::Pi)
      throw TypeError(TypeErrorKind::Mismatch, fn.span(), "applied term is not a function",
                      "Pi (x : _) _", pretty(fty));
    auto* p = fty.as<ty::Pi>();
    check(ctx, a->arg, p->dom);
    return subst(p->cod, a->arg);
  }
  case TermKind::Pair: {
    auto* p = t.as<tm::Pair>();
    Type a = as_value(infer(ctx, p->fst));
    Type b = as_value(infer(ctx, p->snd));
    return ty_sig(a, shift(b, 1), t.span());
  }
  case TermKind::Split: {
    auto* s = t.as<tm::Split>();
    Type pt = infer(ctx, s->scrut);
    if (pt.kind() != TypeKind::Sig)
      throw TypeError(TypeErrorKind::Mismatch, s->scrut.span(), "split expects a pair",
                      "Sig (x : _) _", pretty(pt));
    auto* sg = pt.as<ty::Sig>();
    Type y = infer(ctx.extended(sg->fst).extended(sg->snd), s->body);
    if (mentions_var(y, 0) || mentions_var(y, 1))
      throw TypeError(TypeErrorKind::Mismatch, s->body.span(),
                      "the type of the split body mentions the bound variables", "", pretty(y));
    return shift(y, -2);
  }
  case TermKind::Seal: {
    Type a = as_value(infer(ctx, t.as<tm::Seal>()->arg));
    return ty_cl(a, t.span());
  }
  case TermKind::UnsealInd: {
    auto* u = t.as<tm::UnsealInd>();
    if (u->scrut.kind() == TermKind::Star) {
      // unseal of a bare * computes to its * branch, and the bare * keeps no
      // record of the sealed type, so the term is typed through what it
      // computes to. Such scrutinees only arise mid-rewrite: the surface
      // language always seals a concrete value.
      if (!ctx.has_phase())
        throw TypeError(TypeErrorKind::PhaseRequired, t.span(),
                        "unseal of * requires the behavioral phase");
      return infer(ctx, u->star_branch);
    }
    Type st = infer(ctx, u->scrut);
    if (st.kind() != TypeKind::Cl)
      throw TypeError(TypeErrorKind::Mismatch, u->scrut.span(), "unseal expects a sealed value",
                      "Cl _", pretty(st));
    Type a = st.as<ty::Cl>()->arg;
    Context mctx = ctx.extended(ty_cl(a));
    check_type(mctx, u->motive);
    if (!is_comp_type(u->motive))
      throw TypeError(TypeErrorKind::Polarity, t.span(), "the unseal motive must be a computation",
                      "a computation type", pretty(u->motive));
    // seal branch: the motive at seal of the freshly bound value.
    Type eta_ty = subst(shift(u->motive, 1, 1), mk_seal(mk_var(0)));
    check(ctx.extended(a), u->eta_branch, eta_ty);
    // * branch lives under the behavioral phase; it binds no term variable.
    Type star_ty = subst(u->motive, mk_star());
    check(ctx.with_phase(), u->star_branch, star_ty);
    // Coherence: under the phase the two branches must agree on every input.
    Verdict v = rw_.prove_equal(u->eta_branch, shift(u->star_branch, 1), true, fuel_);
    if (v.kind == Verdict::Kind::Distinct)
      throw TypeError(TypeErrorKind::Mismatch, t.span(),
                      "the seal and * branches disagree under the behavioral phase",
                      pretty(v.rhs_normal), pretty(v.lhs_normal));
    if (v.kind == Verdict::Kind::Undecided)
      throw TypeError(TypeErrorKind::UndecidedEquality, t.span(),
                      "could not decide that the seal and * branches agree under the behavioral "
                      "phase",
                      pretty(v.rhs_normal), pretty(v.lhs_normal));
    return subst(u->motive, u->scrut);
  }
  case TermKind::PLam: {
    Type a = as_value(infer(ctx.with_phase(), t.as<tm::PLam>()->body));
    return ty_op(a, t.span());
  }
  case TermKind::PAp: {
    if (!ctx.has_phase())
      throw TypeError(TypeErrorKind::PhaseRequired, t.span(),
                      "papp requires the behavioral phase");
    Type ot = as_value(infer(ctx, t.as<tm::PAp>()->arg));
    if (ot.kind() != TypeKind::Op)
      throw TypeError(TypeErrorKind::Mismatch, t.span(), "papp expects a phase function",
                      "Op _", pretty(ot));
    return ot.as<ty::Op>()->arg;
  }
  case TermKind::Ind: {
    auto* i = t.as<tm::Ind>();
    check(ctx, i->scrut, ty_nat());
    Context mctx = ctx.extended(ty_nat());
    check_type(mctx, i->motive);
    if (!is_comp_type(i->motive))
      throw TypeError(TypeErrorKind::Polarity, t.span(), "the ind motive must be a computation",
                      "a computation type", pretty(i->motive));
    check(ctx, i->zero_branch, subst(i->motive, mk_zero()));
    Context sctx = ctx.extended(ty_nat()).extended(ty_u(i->motive));
    Type suc_ty = subst(shift(i->motive, 2, 1), mk_suc(mk_var(1)));
    check(sctx, i->suc_branch, suc_ty);
    return subst(i->motive, i->scrut);
  }
  case TermKind::Lam:
    throw TypeError(TypeErrorKind::Mismatch, t.span(),
                    "cannot infer the type of a bare function; apply it or check it against a "
                    "function type");
  case TermKind::Refl:
    throw TypeError(TypeErrorKind::Mismatch, t.span(),
                    "cannot infer the type of refl; check it against an equality type");
  case TermKind::Star:
    throw TypeError(TypeErrorKind::Mismatch, t.span(),
                    "cannot infer the type of *; check it against a sealed type");
  }
  throw TypeError(TypeErrorKind::Mismatch, t.span(), "unrecognized term");
}

void Checker::check(const Context& ctx, const Term& t, const Type& ty) const {
  switch (t.kind()) {
  case TermKind::Lam: {
    Type x = as_comp(ty, t.span());
    if (x.kind() != TypeKind::Pi)
      throw TypeError(TypeErrorKind::Mismatch, t.span(), "found a function", pretty(ty),
                      "Pi (x : _) _");
    auto* p = x.as<ty::Pi>();
    check(ctx.extended(p->dom), t.as<tm::Lam>()->body, p->cod);
    return;
  }
  case TermKind::Refl: {
    if (ty.kind() != TypeKind::Eq)
      throw TypeError(TypeErrorKind::Mismatch, t.span(), "found refl", pretty(ty),
                      "Eq _ _ _");
    auto* e = ty.as<ty::Eq>();
    switch (prove(ctx, e->lhs, e->rhs)) {
    case TriState::Equal: return;
    case TriState::Distinct:
      throw TypeError(TypeErrorKind::Mismatch, t.span(),
                      "refl does not prove this equation: the sides are provably distinct",
                      pretty(e->lhs), pretty(e->rhs));
    case TriState::Undecided:
      throw TypeError(TypeErrorKind::UndecidedEquality, t.span(),
                      "refl does not prove this equation: the sides could not be decided equal",
                      pretty(e->lhs), pretty(e->rhs));
    }
    return;
  }
  case TermKind::Star: {
    if (ty.kind() != TypeKind::Cl)
      throw TypeError(TypeErrorKind::Mismatch, t.span(), "found *", pretty(ty), "Cl _");
    if (!ctx.has_phase())
      throw TypeError(TypeErrorKind::PhaseRequired, t.span(),
                      "the sealed unit * requires the behavioral phase");
    return;
  }
  case TermKind::Pair: {
    if (ty.kind() == TypeKind::Sig) {
      auto* s = ty.as<ty::Sig>();
      auto* p = t.as<tm::Pair>();
      check(ctx, p->fst, s->fst);
      check(ctx, p->snd, subst(s->snd, p->fst));
      return;
    }
    break;
  }
  case TermKind::Ret: {
    Type x = ty;
    if (x.kind() == TypeKind::U) x = x.as<ty::U>()->comp;
    if (x.kind() == TypeKind::F) {
      check(ctx, t.as<tm::Ret>()->arg, x.as<ty::F>()->arg);
      return;
    }
    break;
  }
  case TermKind::Step: {
    auto* s = t.as<tm::Step>();
    validate_cost(s->cost, model(), t.span());
    check(ctx, s->body, as_comp(ty, t.span()));
    return;
  }
  case TermKind::Seal: {
    if (ty.kind() == TypeKind::Cl) {
      check(ctx, t.as<tm::Seal>()->arg, ty.as<ty::Cl>()->arg);
      return;
    }
    break;
  }
  case TermKind::PLam: {
    if (ty.kind() == TypeKind::Op) {
      check(ctx.with_phase(), t.as<tm::PLam>()->body, ty.as<ty::Op>()->arg);
      return;
    }
    break;
  }
  default:
    break;
  }
  Type actual = infer(ctx, t);
  require_equal(ctx, ty, actual, t.span());
}

TriState Checker::equal_types(const Context& ctx, const Type& a, const Type& b) const {
  if (a.kind() != b.kind()) return TriState::Distinct;
  auto combine = [](TriState x, TriState y) {
    if (x == TriState::Distinct || y == TriState::Distinct) return TriState::Distinct;
    if (x == TriState::Undecided || y == TriState::Undecided) return TriState::Undecided;
    return TriState::Equal;
  };
  switch (a.kind()) {
  case TypeKind::Nat:
    return TriState::Equal;
  case TypeKind::U:
    return equal_types(ctx, a.as<ty::U>()->comp, b.as<ty::U>()->comp);
  case TypeKind::F:
    return equal_types(ctx, a.as<ty::F>()->arg, b.as<ty::F>()->arg);
  case TypeKind::Op:
    return equal_types(ctx, a.as<ty::Op>()->arg, b.as<ty::Op>()->arg);
  case TypeKind::Cl:
    return equal_types(ctx, a.as<ty::Cl>()->arg, b.as<ty::Cl>()->arg);
  case TypeKind::Sig: {
    auto* sa = a.as<ty::Sig>();
    auto* sb = b.as<ty::Sig>();
    return combine(equal_types(ctx, sa->fst, sb->fst),
                   equal_types(ctx.extended(sa->fst), sa->snd, sb->snd));
  }
  case TypeKind::Pi: {
    auto* pa = a.as<ty::Pi>();
    auto* pb = b.as<ty::Pi>();
    return combine(equal_types(ctx, pa->dom, pb->dom),
                   equal_types(ctx.extended(pa->dom), pa->cod, pb->cod));
  }
  case TypeKind::Eq: {
    auto* ea = a.as<ty::Eq>();
    auto* eb = b.as<ty::Eq>();
    TriState tt = equal_types(ctx, ea->type, eb->type);
    TriState tl = prove(ctx, ea->lhs, eb->lhs);
    TriState tr = prove(ctx, ea->rhs, eb->rhs);
    return combine(tt, combine(tl, tr));
  }
  }
  return TriState::Undecided;
}

void Checker::check_type(const Context& ctx, const Type& ty) const {
  auto require_value = [&](const Type& t, const char* what) {
    if (is_comp_type(t))
      throw TypeError(TypeErrorKind::Polarity, t.span(),
                      std::string(what) + " must be a value type", "a value type", pretty(t));
  };
  switch (ty.kind()) {
  case TypeKind::Nat:
    return;
  case TypeKind::U: {
    auto* u = ty.as<ty::U>();
    if (!is_comp_type(u->comp))
      throw TypeError(TypeErrorKind::Polarity, ty.span(), "U expects a computation type",
                      "a computation type", pretty(u->comp));
    check_type(ctx, u->comp);
    return;
  }
  case TypeKind::F: {
    auto* f = ty.as<ty::F>();
    require_value(f->arg, "the argument of F");
    check_type(ctx, f->arg);
    return;
  }
  case TypeKind::Op: {
    auto* o = ty.as<ty::Op>();
    require_value(o->arg, "the argument of Op");
    check_type(ctx, o->arg);
    return;
  }
  case TypeKind::Cl: {
    auto* c = ty.as<ty::Cl>();
    require_value(c->arg, "the argument of Cl");
    check_type(ctx, c->arg);
    return;
  }
  case TypeKind::Sig: {
    auto* s = ty.as<ty::Sig>();
    require_value(s->fst, "the first component of Sig");
    check_type(ctx, s->fst);
    require_value(s->snd, "the second component of Sig");
    check_type(ctx.extended(s->fst), s->snd);
    return;
  }
  case TypeKind::Pi: {
    auto* p = ty.as<ty::Pi>();
    require_value(p->dom, "the domain of Pi");
    check_type(ctx, p->dom);
    if (!is_comp_type(p->cod))
      throw TypeError(TypeErrorKind::Polarity, p->cod.span(),
                      "the codomain of Pi must be a computation type", "a computation type",
                      pretty(p->cod));
    check_type(ctx.extended(p->dom), p->cod);
    return;
  }
  case TypeKind::Eq: {
    auto* e = ty.as<ty::Eq>();
    require_value(e->type, "the carrier of Eq");
    check_type(ctx, e->type);
    check(ctx, e->lhs, e->type);
    check(ctx, e->rhs, e->type);
    return;
  }
  }
}

void Checker::check_file(const SourceFile& f) const {
  Context ctx;
  for (const auto& d : f.decls) {
    check_type(ctx, d.type);
    check(ctx, d.term, d.type);
    ctx = ctx.extended(d.type);
  }
  check_type(ctx, f.main_type);
  if (!is_comp_type(f.main_type))
    throw TypeError(TypeErrorKind::Polarity, f.main.span(), "main must have a computation type",
                    "a computation type", pretty(f.main_type));
  check(ctx, f.main, f.main_type);
}

} // namespace calf
