#include "calf/gen.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace calf {

namespace {

// Kinds of variables the generator can put in scope. Thunks arise from ind's
// recursive result; Op and Cl variables from binds of returned values.
enum class VK { Nat, ThunkF, OpN, ClN };

struct Gen {
  std::mt19937_64 rng;
  const CostModel& m;
  std::vector<VK> scope;
  bool phase = false;
  std::vector<CostElem> pool;

  Gen(std::uint64_t seed, const CostModel& mm) : rng(seed), m(mm) {
    // Candidate literal elements, filtered by what the model accepts.
    std::vector<CostElem> cands;
    for (std::uint64_t i = 0; i <= 3; ++i) cands.push_back(CostElem{i, {}});
    for (std::uint64_t i = 0; i <= 2; ++i)
      for (std::uint64_t j = 0; j <= 2; ++j)
        cands.push_back(CostElem{0, {CostElem{i, {}}, CostElem{j, {}}}});
    for (const CostElem& e : cands)
      if (m.valid(e)) pool.push_back(e);
    if (pool.empty()) pool.push_back(m.zero());
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool chance(int percent) { return pick(100) < percent; }

  std::optional<int> find_var(VK k) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < scope.size(); ++i)
      if (scope[scope.size() - 1 - i] == k) idx.push_back(static_cast<int>(i));
    if (idx.empty()) return std::nullopt;
    return idx[pick(static_cast<int>(idx.size()))];
  }

  CostExpr cost() {
    int r = pick(10);
    if (r == 0) return CostExpr::zero();
    CostExpr a = CostExpr::lit(pool[pick(static_cast<int>(pool.size()))]);
    if (r == 1) return CostExpr::add(a, CostExpr::lit(pool[pick(static_cast<int>(pool.size()))]));
    return a;
  }

  Term nat_val(int budget) {
    if (budget > 4 && chance(10)) {
      int b = (budget - 2) / 3;
      Term a = nat_val(b);
      Term bb = nat_val(b);
      scope.push_back(VK::Nat);
      scope.push_back(VK::Nat);
      Term body = nat_val(b);
      scope.pop_back();
      scope.pop_back();
      return mk_split(mk_pair(a, bb), body);
    }
    if (phase && budget > 2 && chance(15)) {
      if (auto v = find_var(VK::OpN); v && chance(50)) return mk_pap(mk_var(*v));
      return mk_pap(mk_plam(nat_val(budget - 2)));
    }
    if (auto v = find_var(VK::Nat); v && chance(45)) return mk_var(*v);
    if (budget >= 2 && chance(55)) return mk_suc(nat_val(budget - 1));
    return mk_zero();
  }

  // A phase-function value; its body lives behind the phase.
  Term op_val(int budget) {
    bool saved = phase;
    phase = true;
    Term body = nat_val(std::max(1, budget - 1));
    phase = saved;
    return mk_plam(body);
  }

  Term cl_val(int budget) { return mk_seal(nat_val(std::max(1, budget - 1))); }

  Term fnat(int budget) {
    if (budget <= 2) {
      if (auto v = find_var(VK::ThunkF); v && chance(30)) return mk_var(*v);
      return mk_ret(nat_val(std::max(1, budget - 1)));
    }
    int roll = pick(100);
    if (roll < 16) return mk_ret(nat_val(budget - 1));
    if (roll < 30) return mk_step(cost(), fnat(budget - 1));
    if (roll < 52) {
      int b1 = (budget - 1) / 2;
      int b2 = budget - 1 - b1;
      int flavor = pick(10);
      if (flavor == 0 && b1 >= 4) {
        Term scrut = mk_ret(op_val(b1 - 1));
        scope.push_back(VK::OpN);
        Term body = fnat(b2);
        scope.pop_back();
        return mk_bind(scrut, body);
      }
      if (flavor == 1 && b1 >= 3) {
        Term scrut = mk_ret(cl_val(b1 - 1));
        scope.push_back(VK::ClN);
        Term body = fnat(b2);
        scope.pop_back();
        return mk_bind(scrut, body);
      }
      Term scrut = fnat(b1);
      scope.push_back(VK::Nat);
      Term body = fnat(b2);
      scope.pop_back();
      return mk_bind(scrut, body);
    }
    if (roll < 64) {
      int b1 = std::max(1, (budget - 2) * 2 / 3);
      int b2 = std::max(1, budget - 2 - b1);
      scope.push_back(VK::Nat);
      Term body = fnat(b1);
      scope.pop_back();
      Term fn = mk_lam(body);
      if (chance(35)) fn = mk_step(cost(), fn);
      return mk_ap(fn, nat_val(b2));
    }
    if (roll < 78) {
      Term scrut;
      if (auto v = find_var(VK::Nat); v && chance(40)) scrut = mk_var(*v);
      else scrut = numeral(static_cast<std::uint64_t>(pick(4)));
      int b = std::max(1, (budget - 2) / 2);
      Term zb = fnat(b);
      scope.push_back(VK::Nat);
      scope.push_back(VK::ThunkF);
      Term sb = fnat(b);
      scope.pop_back();
      scope.pop_back();
      return mk_ind(scrut, ty_f(ty_nat()), zb, sb);
    }
    if (roll < 86) {
      int b = std::max(1, (budget - 2) / 3);
      Term a = nat_val(b);
      Term bb = nat_val(b);
      scope.push_back(VK::Nat);
      scope.push_back(VK::Nat);
      Term body = fnat(b);
      scope.pop_back();
      scope.pop_back();
      return mk_split(mk_pair(a, bb), body);
    }
    if (roll < 96) {
      Term scrut;
      if (auto v = find_var(VK::ClN); v && chance(40)) scrut = mk_var(*v);
      else scrut = mk_seal(nat_val(2));
      // The branches must agree under the phase: generate the * branch and
      // reuse it (weakened) as the seal branch, optionally under a step,
      // which the phase silences.
      Term star = fnat(std::max(1, (budget - 3) / 2));
      Term eta = shift(star, 1);
      if (chance(50)) eta = mk_step(cost(), eta);
      return mk_unseal_ind(scrut, ty_f(ty_nat()), eta, star);
    }
    if (auto v = find_var(VK::ThunkF)) return mk_var(*v);
    return mk_ret(nat_val(budget - 1));
  }
};

} // namespace

Term gen_term(std::uint64_t seed, int size, const Type& target, const CostModel& model) {
  Gen g(seed, model);
  int budget = std::max(1, size);
  if (target.kind() == TypeKind::Nat) return g.nat_val(budget);
  if (target.kind() == TypeKind::F && target.as<ty::F>()->arg.kind() == TypeKind::Nat)
    return g.fnat(budget);
  if (target.kind() == TypeKind::Pi) {
    auto* p = target.as<ty::Pi>();
    if (p->dom.kind() == TypeKind::Nat && p->cod.kind() == TypeKind::F &&
        p->cod.as<ty::F>()->arg.kind() == TypeKind::Nat) {
      g.scope.push_back(VK::Nat);
      Term body = g.fnat(std::max(1, budget - 1));
      g.scope.pop_back();
      Term fn = mk_lam(body);
      if (g.chance(30)) fn = mk_step(g.cost(), fn);
      return fn;
    }
  }
  throw std::invalid_argument("gen_term: target must be nat, F nat, or Pi (x : nat) F nat");
}

void visit_subterms(const Term& t, const std::function<void(const Term&)>& f) {
  f(t);
  std::visit(overloaded{
                 [&](const tm::Var&) {},
                 [&](const tm::Zero&) {},
                 [&](const tm::Suc& n) { visit_subterms(n.arg, f); },
                 [&](const tm::Ret& n) { visit_subterms(n.arg, f); },
                 [&](const tm::Bind& n) {
                   visit_subterms(n.scrut, f);
                   visit_subterms(n.body, f);
                 },
                 [&](const tm::Step& n) { visit_subterms(n.body, f); },
                 [&](const tm::Lam& n) { visit_subterms(n.body, f); },
                 [&](const tm::Ap& n) {
                   visit_subterms(n.fn, f);
                   visit_subterms(n.arg, f);
                 },
                 [&](const tm::Pair& n) {
                   visit_subterms(n.fst, f);
                   visit_subterms(n.snd, f);
                 },
                 [&](const tm::Split& n) {
                   visit_subterms(n.scrut, f);
                   visit_subterms(n.body, f);
                 },
                 [&](const tm::Refl&) {},
                 [&](const tm::Seal& n) { visit_subterms(n.arg, f); },
                 [&](const tm::Star&) {},
                 [&](const tm::UnsealInd& n) {
                   visit_subterms(n.scrut, f);
                   visit_subterms(n.eta_branch, f);
                   visit_subterms(n.star_branch, f);
                 },
                 [&](const tm::PLam& n) { visit_subterms(n.body, f); },
                 [&](const tm::PAp& n) { visit_subterms(n.arg, f); },
                 [&](const tm::Ind& n) {
                   visit_subterms(n.scrut, f);
                   visit_subterms(n.zero_branch, f);
                   visit_subterms(n.suc_branch, f);
                 },
             },
             node_of(t));
}

} // namespace calf
