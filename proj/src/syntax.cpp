#include "calf/syntax.hpp"

#include <stdexcept>

namespace calf {

// --- cost expressions -------------------------------------------------------

struct CostExpr::Node {
  enum class Kind { Lit, Add, Zero } kind = Kind::Zero;
  CostElem elem;                       // Lit
  std::optional<CostExpr> lhs, rhs;    // Add
};

CostExpr CostExpr::lit(CostElem e) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Lit;
  n->elem = std::move(e);
  return CostExpr(std::move(n));
}

CostExpr CostExpr::add(CostExpr a, CostExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Add;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return CostExpr(std::move(n));
}

CostExpr CostExpr::zero() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Zero;
  return CostExpr(std::move(n));
}

bool CostExpr::is_lit() const { return node_->kind == Node::Kind::Lit; }
bool CostExpr::is_add() const { return node_->kind == Node::Kind::Add; }
bool CostExpr::is_zero() const { return node_->kind == Node::Kind::Zero; }

const CostElem& CostExpr::lit_elem() const {
  if (!is_lit()) throw std::logic_error("lit_elem on non-literal cost");
  return node_->elem;
}

const CostExpr& CostExpr::add_lhs() const {
  if (!is_add()) throw std::logic_error("add_lhs on non-sum cost");
  return *node_->lhs;
}

const CostExpr& CostExpr::add_rhs() const {
  if (!is_add()) throw std::logic_error("add_rhs on non-sum cost");
  return *node_->rhs;
}

CostElem CostExpr::normalized(const CostModel& m) const {
  switch (node_->kind) {
    case Node::Kind::Zero: return m.zero();
    case Node::Kind::Lit:
      if (!m.valid(node_->elem)) throw std::invalid_argument("cost literal does not fit model " + m.name());
      return node_->elem;
    case Node::Kind::Add:
      return m.plus(node_->lhs->normalized(m), node_->rhs->normalized(m));
  }
  throw std::logic_error("corrupt cost expression");
}

// --- construction ------------------------------------------------------------

Term make_term(TermNode n, Span s) {
  Term t;
  t.p_ = std::make_shared<const TermNode>(std::move(n));
  t.span_ = s;
  return t;
}

Type make_type(TypeNode n, Span s) {
  Type t;
  t.p_ = std::make_shared<const TypeNode>(std::move(n));
  t.span_ = s;
  return t;
}

Term mk_var(int index, Span s) { return make_term({tm::Var{index}}, s); }
Term mk_zero(Span s) { return make_term({tm::Zero{}}, s); }
Term mk_suc(Term arg, Span s) { return make_term({tm::Suc{std::move(arg)}}, s); }
Term mk_ret(Term arg, Span s) { return make_term({tm::Ret{std::move(arg)}}, s); }
Term mk_bind(Term scrut, Term body, Span s) {
  return make_term({tm::Bind{std::move(scrut), std::move(body)}}, s);
}
Term mk_step(CostExpr cost, Term body, Span s) {
  return make_term({tm::Step{std::move(cost), std::move(body)}}, s);
}
Term mk_lam(Term body, Span s) { return make_term({tm::Lam{std::move(body)}}, s); }
Term mk_ap(Term fn, Term arg, Span s) {
  return make_term({tm::Ap{std::move(fn), std::move(arg)}}, s);
}
Term mk_pair(Term fst, Term snd, Span s) {
  return make_term({tm::Pair{std::move(fst), std::move(snd)}}, s);
}
Term mk_split(Term scrut, Term body, Span s) {
  return make_term({tm::Split{std::move(scrut), std::move(body)}}, s);
}
Term mk_refl(Span s) { return make_term({tm::Refl{}}, s); }
Term mk_seal(Term arg, Span s) { return make_term({tm::Seal{std::move(arg)}}, s); }
Term mk_star(Span s) { return make_term({tm::Star{}}, s); }
Term mk_unseal_ind(Term scrut, Type motive, Term eta_branch, Term star_branch, Span s) {
  return make_term(
      {tm::UnsealInd{std::move(scrut), std::move(motive), std::move(eta_branch), std::move(star_branch)}},
      s);
}
Term mk_plam(Term body, Span s) { return make_term({tm::PLam{std::move(body)}}, s); }
Term mk_pap(Term arg, Span s) { return make_term({tm::PAp{std::move(arg)}}, s); }
Term mk_ind(Term scrut, Type motive, Term zero_branch, Term suc_branch, Span s) {
  return make_term(
      {tm::Ind{std::move(scrut), std::move(motive), std::move(zero_branch), std::move(suc_branch)}}, s);
}

Type ty_nat(Span s) { return make_type({ty::Nat{}}, s); }
Type ty_u(Type comp, Span s) { return make_type({ty::U{std::move(comp)}}, s); }
Type ty_sig(Type fst, Type snd, Span s) {
  return make_type({ty::Sig{std::move(fst), std::move(snd)}}, s);
}
Type ty_eq(Type type, Term lhs, Term rhs, Span s) {
  return make_type({ty::Eq{std::move(type), std::move(lhs), std::move(rhs)}}, s);
}
Type ty_op(Type arg, Span s) { return make_type({ty::Op{std::move(arg)}}, s); }
Type ty_cl(Type arg, Span s) { return make_type({ty::Cl{std::move(arg)}}, s); }
Type ty_f(Type arg, Span s) { return make_type({ty::F{std::move(arg)}}, s); }
Type ty_pi(Type dom, Type cod, Span s) {
  return make_type({ty::Pi{std::move(dom), std::move(cod)}}, s);
}

bool is_comp_type(const Type& t) {
  return t.kind() == TypeKind::F || t.kind() == TypeKind::Pi;
}

// --- context -----------------------------------------------------------------

Context Context::extended(Type t) const {
  Context c = *this;
  c.entries_.push_back(TermVar{std::move(t)});
  return c;
}

Context Context::with_phase() const {
  Context c = *this;
  c.entries_.push_back(Phase{});
  return c;
}

int Context::term_var_count() const {
  int n = 0;
  for (const auto& e : entries_)
    if (std::holds_alternative<TermVar>(e)) ++n;
  return n;
}

bool Context::has_phase() const {
  for (const auto& e : entries_)
    if (std::holds_alternative<Phase>(e)) return true;
  return false;
}

std::optional<Type> Context::lookup(int index) const {
  if (index < 0) return std::nullopt;
  int seen = 0;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (const auto* tv = std::get_if<TermVar>(&*it)) {
      if (seen == index) return shift(tv->type, index + 1);
      ++seen;
    }
  }
  return std::nullopt;
}

// --- shift / subst ----------------------------------------------------------

Term shift(const Term& t, int amount, int cutoff) {
  if (amount == 0) return t;
  return std::visit(
      overloaded{
          [&](const tm::Var& v) {
            if (v.index < cutoff) return t;
            if (v.index + amount < 0) throw std::logic_error("shift drove a variable negative");
            return mk_var(v.index + amount, t.span());
          },
          [&](const tm::Zero&) { return t; },
          [&](const tm::Suc& n) { return mk_suc(shift(n.arg, amount, cutoff), t.span()); },
          [&](const tm::Ret& n) { return mk_ret(shift(n.arg, amount, cutoff), t.span()); },
          [&](const tm::Bind& n) {
            return mk_bind(shift(n.scrut, amount, cutoff), shift(n.body, amount, cutoff + 1), t.span());
          },
          [&](const tm::Step& n) { return mk_step(n.cost, shift(n.body, amount, cutoff), t.span()); },
          [&](const tm::Lam& n) { return mk_lam(shift(n.body, amount, cutoff + 1), t.span()); },
          [&](const tm::Ap& n) {
            return mk_ap(shift(n.fn, amount, cutoff), shift(n.arg, amount, cutoff), t.span());
          },
          [&](const tm::Pair& n) {
            return mk_pair(shift(n.fst, amount, cutoff), shift(n.snd, amount, cutoff), t.span());
          },
          [&](const tm::Split& n) {
            return mk_split(shift(n.scrut, amount, cutoff), shift(n.body, amount, cutoff + 2), t.span());
          },
          [&](const tm::Refl&) { return t; },
          [&](const tm::Seal& n) { return mk_seal(shift(n.arg, amount, cutoff), t.span()); },
          [&](const tm::Star&) { return t; },
          [&](const tm::UnsealInd& n) {
            return mk_unseal_ind(shift(n.scrut, amount, cutoff), shift(n.motive, amount, cutoff + 1),
                                 shift(n.eta_branch, amount, cutoff + 1),
                                 shift(n.star_branch, amount, cutoff), t.span());
          },
          [&](const tm::PLam& n) { return mk_plam(shift(n.body, amount, cutoff), t.span()); },
          [&](const tm::PAp& n) { return mk_pap(shift(n.arg, amount, cutoff), t.span()); },
          [&](const tm::Ind& n) {
            return mk_ind(shift(n.scrut, amount, cutoff), shift(n.motive, amount, cutoff + 1),
                          shift(n.zero_branch, amount, cutoff), shift(n.suc_branch, amount, cutoff + 2),
                          t.span());
          },
      },
      node_of(t));
}

Type shift(const Type& t, int amount, int cutoff) {
  if (amount == 0) return t;
  return std::visit(
      overloaded{
          [&](const ty::Nat&) { return t; },
          [&](const ty::U& n) { return ty_u(shift(n.comp, amount, cutoff), t.span()); },
          [&](const ty::Sig& n) {
            return ty_sig(shift(n.fst, amount, cutoff), shift(n.snd, amount, cutoff + 1), t.span());
          },
          [&](const ty::Eq& n) {
            return ty_eq(shift(n.type, amount, cutoff), shift(n.lhs, amount, cutoff),
                         shift(n.rhs, amount, cutoff), t.span());
          },
          [&](const ty::Op& n) { return ty_op(shift(n.arg, amount, cutoff), t.span()); },
          [&](const ty::Cl& n) { return ty_cl(shift(n.arg, amount, cutoff), t.span()); },
          [&](const ty::F& n) { return ty_f(shift(n.arg, amount, cutoff), t.span()); },
          [&](const ty::Pi& n) {
            return ty_pi(shift(n.dom, amount, cutoff), shift(n.cod, amount, cutoff + 1), t.span());
          },
      },
      node_of(t));
}

Term subst_at(const Term& body, const Term& replacement, int depth) {
  return std::visit(
      overloaded{
          [&](const tm::Var& v) {
            if (v.index == depth) return shift(replacement, depth);
            if (v.index > depth) return mk_var(v.index - 1, body.span());
            return body;
          },
          [&](const tm::Zero&) { return body; },
          [&](const tm::Suc& n) { return mk_suc(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const tm::Ret& n) { return mk_ret(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const tm::Bind& n) {
            return mk_bind(subst_at(n.scrut, replacement, depth),
                           subst_at(n.body, replacement, depth + 1), body.span());
          },
          [&](const tm::Step& n) {
            return mk_step(n.cost, subst_at(n.body, replacement, depth), body.span());
          },
          [&](const tm::Lam& n) {
            return mk_lam(subst_at(n.body, replacement, depth + 1), body.span());
          },
          [&](const tm::Ap& n) {
            return mk_ap(subst_at(n.fn, replacement, depth), subst_at(n.arg, replacement, depth),
                         body.span());
          },
          [&](const tm::Pair& n) {
            return mk_pair(subst_at(n.fst, replacement, depth), subst_at(n.snd, replacement, depth),
                           body.span());
          },
          [&](const tm::Split& n) {
            return mk_split(subst_at(n.scrut, replacement, depth),
                            subst_at(n.body, replacement, depth + 2), body.span());
          },
          [&](const tm::Refl&) { return body; },
          [&](const tm::Seal& n) { return mk_seal(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const tm::Star&) { return body; },
          [&](const tm::UnsealInd& n) {
            return mk_unseal_ind(subst_at(n.scrut, replacement, depth),
                                 subst_at(n.motive, replacement, depth + 1),
                                 subst_at(n.eta_branch, replacement, depth + 1),
                                 subst_at(n.star_branch, replacement, depth), body.span());
          },
          [&](const tm::PLam& n) {
            return mk_plam(subst_at(n.body, replacement, depth), body.span());
          },
          [&](const tm::PAp& n) { return mk_pap(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const tm::Ind& n) {
            return mk_ind(subst_at(n.scrut, replacement, depth),
                          subst_at(n.motive, replacement, depth + 1),
                          subst_at(n.zero_branch, replacement, depth),
                          subst_at(n.suc_branch, replacement, depth + 2), body.span());
          },
      },
      node_of(body));
}

Type subst_at(const Type& body, const Term& replacement, int depth) {
  return std::visit(
      overloaded{
          [&](const ty::Nat&) { return body; },
          [&](const ty::U& n) { return ty_u(subst_at(n.comp, replacement, depth), body.span()); },
          [&](const ty::Sig& n) {
            return ty_sig(subst_at(n.fst, replacement, depth),
                          subst_at(n.snd, replacement, depth + 1), body.span());
          },
          [&](const ty::Eq& n) {
            return ty_eq(subst_at(n.type, replacement, depth), subst_at(n.lhs, replacement, depth),
                         subst_at(n.rhs, replacement, depth), body.span());
          },
          [&](const ty::Op& n) { return ty_op(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const ty::Cl& n) { return ty_cl(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const ty::F& n) { return ty_f(subst_at(n.arg, replacement, depth), body.span()); },
          [&](const ty::Pi& n) {
            return ty_pi(subst_at(n.dom, replacement, depth),
                         subst_at(n.cod, replacement, depth + 1), body.span());
          },
      },
      node_of(body));
}

Term subst(const Term& body, const Term& replacement) { return subst_at(body, replacement, 0); }
Type subst(const Type& body, const Term& replacement) { return subst_at(body, replacement, 0); }

// --- free variable queries ----------------------------------------------------

bool mentions_var(const Term& t, int index) {
  return std::visit(
      overloaded{
          [&](const tm::Var& v) { return v.index == index; },
          [&](const tm::Zero&) { return false; },
          [&](const tm::Suc& n) { return mentions_var(n.arg, index); },
          [&](const tm::Ret& n) { return mentions_var(n.arg, index); },
          [&](const tm::Bind& n) {
            return mentions_var(n.scrut, index) || mentions_var(n.body, index + 1);
          },
          [&](const tm::Step& n) { return mentions_var(n.body, index); },
          [&](const tm::Lam& n) { return mentions_var(n.body, index + 1); },
          [&](const tm::Ap& n) { return mentions_var(n.fn, index) || mentions_var(n.arg, index); },
          [&](const tm::Pair& n) { return mentions_var(n.fst, index) || mentions_var(n.snd, index); },
          [&](const tm::Split& n) {
            return mentions_var(n.scrut, index) || mentions_var(n.body, index + 2);
          },
          [&](const tm::Refl&) { return false; },
          [&](const tm::Seal& n) { return mentions_var(n.arg, index); },
          [&](const tm::Star&) { return false; },
          [&](const tm::UnsealInd& n) {
            return mentions_var(n.scrut, index) || mentions_var(n.motive, index + 1) ||
                   mentions_var(n.eta_branch, index + 1) || mentions_var(n.star_branch, index);
          },
          [&](const tm::PLam& n) { return mentions_var(n.body, index); },
          [&](const tm::PAp& n) { return mentions_var(n.arg, index); },
          [&](const tm::Ind& n) {
            return mentions_var(n.scrut, index) || mentions_var(n.motive, index + 1) ||
                   mentions_var(n.zero_branch, index) || mentions_var(n.suc_branch, index + 2);
          },
      },
      node_of(t));
}

bool mentions_var(const Type& t, int index) {
  return std::visit(
      overloaded{
          [&](const ty::Nat&) { return false; },
          [&](const ty::U& n) { return mentions_var(n.comp, index); },
          [&](const ty::Sig& n) {
            return mentions_var(n.fst, index) || mentions_var(n.snd, index + 1);
          },
          [&](const ty::Eq& n) {
            return mentions_var(n.type, index) || mentions_var(n.lhs, index) ||
                   mentions_var(n.rhs, index);
          },
          [&](const ty::Op& n) { return mentions_var(n.arg, index); },
          [&](const ty::Cl& n) { return mentions_var(n.arg, index); },
          [&](const ty::F& n) { return mentions_var(n.arg, index); },
          [&](const ty::Pi& n) {
            return mentions_var(n.dom, index) || mentions_var(n.cod, index + 1);
          },
      },
      node_of(t));
}

// --- alpha equivalence ---------------------------------------------------------

bool alpha_eq(const Term& a, const Term& b, const CostModel& m) {
  if (a.kind() != b.kind()) return false;
  return std::visit(
      overloaded{
          [&](const tm::Var& x) { return x.index == b.as<tm::Var>()->index; },
          [&](const tm::Zero&) { return true; },
          [&](const tm::Suc& x) { return alpha_eq(x.arg, b.as<tm::Suc>()->arg, m); },
          [&](const tm::Ret& x) { return alpha_eq(x.arg, b.as<tm::Ret>()->arg, m); },
          [&](const tm::Bind& x) {
            const auto* y = b.as<tm::Bind>();
            return alpha_eq(x.scrut, y->scrut, m) && alpha_eq(x.body, y->body, m);
          },
          [&](const tm::Step& x) {
            const auto* y = b.as<tm::Step>();
            return x.cost.normalized(m) == y->cost.normalized(m) && alpha_eq(x.body, y->body, m);
          },
          [&](const tm::Lam& x) { return alpha_eq(x.body, b.as<tm::Lam>()->body, m); },
          [&](const tm::Ap& x) {
            const auto* y = b.as<tm::Ap>();
            return alpha_eq(x.fn, y->fn, m) && alpha_eq(x.arg, y->arg, m);
          },
          [&](const tm::Pair& x) {
            const auto* y = b.as<tm::Pair>();
            return alpha_eq(x.fst, y->fst, m) && alpha_eq(x.snd, y->snd, m);
          },
          [&](const tm::Split& x) {
            const auto* y = b.as<tm::Split>();
            return alpha_eq(x.scrut, y->scrut, m) && alpha_eq(x.body, y->body, m);
          },
          [&](const tm::Refl&) { return true; },
          [&](const tm::Seal& x) { return alpha_eq(x.arg, b.as<tm::Seal>()->arg, m); },
          [&](const tm::Star&) { return true; },
          [&](const tm::UnsealInd& x) {
            const auto* y = b.as<tm::UnsealInd>();
            return alpha_eq(x.scrut, y->scrut, m) && alpha_eq(x.motive, y->motive, m) &&
                   alpha_eq(x.eta_branch, y->eta_branch, m) &&
                   alpha_eq(x.star_branch, y->star_branch, m);
          },
          [&](const tm::PLam& x) { return alpha_eq(x.body, b.as<tm::PLam>()->body, m); },
          [&](const tm::PAp& x) { return alpha_eq(x.arg, b.as<tm::PAp>()->arg, m); },
          [&](const tm::Ind& x) {
            const auto* y = b.as<tm::Ind>();
            return alpha_eq(x.scrut, y->scrut, m) && alpha_eq(x.motive, y->motive, m) &&
                   alpha_eq(x.zero_branch, y->zero_branch, m) &&
                   alpha_eq(x.suc_branch, y->suc_branch, m);
          },
      },
      node_of(a));
}

bool alpha_eq(const Type& a, const Type& b, const CostModel& m) {
  if (a.kind() != b.kind()) return false;
  return std::visit(
      overloaded{
          [&](const ty::Nat&) { return true; },
          [&](const ty::U& x) { return alpha_eq(x.comp, b.as<ty::U>()->comp, m); },
          [&](const ty::Sig& x) {
            const auto* y = b.as<ty::Sig>();
            return alpha_eq(x.fst, y->fst, m) && alpha_eq(x.snd, y->snd, m);
          },
          [&](const ty::Eq& x) {
            const auto* y = b.as<ty::Eq>();
            return alpha_eq(x.type, y->type, m) && alpha_eq(x.lhs, y->lhs, m) &&
                   alpha_eq(x.rhs, y->rhs, m);
          },
          [&](const ty::Op& x) { return alpha_eq(x.arg, b.as<ty::Op>()->arg, m); },
          [&](const ty::Cl& x) { return alpha_eq(x.arg, b.as<ty::Cl>()->arg, m); },
          [&](const ty::F& x) { return alpha_eq(x.arg, b.as<ty::F>()->arg, m); },
          [&](const ty::Pi& x) {
            const auto* y = b.as<ty::Pi>();
            return alpha_eq(x.dom, y->dom, m) && alpha_eq(x.cod, y->cod, m);
          },
      },
      node_of(a));
}

// --- numerals -----------------------------------------------------------------

Term numeral(std::uint64_t n) {
  Term t = mk_zero();
  for (std::uint64_t i = 0; i < n; ++i) t = mk_suc(std::move(t));
  return t;
}

std::optional<std::uint64_t> as_numeral(const Term& t) {
  std::uint64_t n = 0;
  const Term* cur = &t;
  while (true) {
    if (cur->kind() == TermKind::Zero) return n;
    const auto* s = cur->as<tm::Suc>();
    if (!s) return std::nullopt;
    ++n;
    cur = &s->arg;
  }
}

} // namespace calf
