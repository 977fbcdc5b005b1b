#include "calf/eval.hpp"

#include "calf/parser.hpp"
#include "calf/rewrite.hpp"
#include "calf/syntax.hpp"
#include "calf/typecheck.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace calf;
using testutil::leaf;

namespace {

const CostModel& nat_model() {
  static CostModel m = CostModel::nat_add();
  return m;
}

const Evaluator& ev() {
  static Evaluator e(nat_model());
  return e;
}

Term T(const std::string& s) {
  auto t = parse_term_text(s, nat_model());
  REQUIRE(t.has_value());
  return *t;
}

Term linked(const std::string& src) {
  auto pr = parse(src, nat_model());
  REQUIRE(pr.ok());
  return pr.file->linked_main();
}

CostElem cost_of(const SemComp& c) {
  auto* rc = c.as<RetC>();
  REQUIRE(rc != nullptr);
  return rc->cost;
}

std::uint64_t num_of(const SemComp& c) {
  auto* rc = c.as<RetC>();
  REQUIRE(rc != nullptr);
  auto* n = rc->value.as<sem::Num>();
  REQUIRE(n != nullptr);
  return n->n;
}

} // namespace

TEST_CASE("evaluation matches the pinned examples") {
  SemComp a = ev().eval_comp({}, World::Cost, T("ret (suc (suc 0))"));
  CHECK(cost_of(a) == leaf(0));
  CHECK(num_of(a) == 2);

  SemComp b = ev().eval_comp({}, World::Cost,
                             T("bind x <- step{2} ret 1 ; step{1} ret (suc x)"));
  CHECK(cost_of(b) == leaf(3));
  CHECK(num_of(b) == 2);

  SemComp c = ev().eval_comp({}, World::Beh, T("step{3} ret 0"));
  CHECK(nat_model().is_zero(cost_of(c)));
  CHECK(num_of(c) == 0);
}

TEST_CASE("canonize reads off cost, numeral, and witness") {
  CanonResult a = canonize(T("ret 0"), true, 100000, nat_model());
  CHECK(a.cost == leaf(0));
  CHECK(a.numeral == 0);
  CHECK(pretty(a.witness) == "ret 0");
  CHECK(a.verified == CanonResult::Verified::Yes);

  CanonResult b = canonize(T("step{3} ret (suc (suc 0))"), true, 100000, nat_model());
  CHECK(b.cost == leaf(3));
  CHECK(b.numeral == 2);
  CHECK(pretty(b.witness) == "step{3} ret (suc (suc 0))");
  CHECK(b.verified == CanonResult::Verified::Yes);
  CHECK(b.trace_len == 0); // already canonical: no rewriting needed

  CanonResult c = canonize(
      T("ind 2 at m. F nat { zero => ret 0 | suc p, ih => step{1} bind r <- ih ; ret (suc r) }"),
      true, 100000, nat_model());
  CHECK(c.cost == leaf(2));
  CHECK(c.numeral == 2);
  CHECK(c.verified == CanonResult::Verified::Yes);
  CHECK(c.trace_len > 0);

  CanonResult d = canonize(T("ret 1"), false, 100000, nat_model());
  CHECK_FALSE(d.verified.has_value());
}

TEST_CASE("the evaluator agrees with the brute-force interpreter") {
  std::vector<std::string> sources = {
      "ret 0",
      "step{3} ret (suc (suc 0))",
      "bind x <- step{2} ret 1 ; step{1} ret (suc x)",
      "bind x <- ret 2 ; bind y <- ret (suc x) ; step{1} ret (suc y)",
      "(\\x. ret (suc x)) 4",
      "(step{2} \\x. ret x) 1",
      "bind f <- ret 3 ; (\\x. step{1} ret (suc x)) f",
      "split (1, 2) as (a, b) in step{1} ret b",
      "split (1, (2, 3)) as (a, b) in split b as (c, d) in ret d",
      "ind 0 at m. F nat { zero => ret 0 | suc p, ih => step{1} bind r <- ih ; ret (suc r) }",
      "ind 5 at m. F nat { zero => ret 0 | suc p, ih => step{1} bind r <- ih ; ret (suc r) }",
      "ind 3 at m. F nat { zero => step{2} ret 1 | suc p, ih => bind r <- ih ; ret (suc p) }",
      "unseal (seal 0) at c. F nat { seal a => step{2} ret 7 | * z => ret 7 }",
      "unseal (seal 4) at c. F nat { seal a => step{1} ret 6 | * z => ret 6 }",
      "bind p <- ret (2, 3) ; split p as (a, b) in ret a",
      "step{0} bind x <- ret 1 ; step{2+3} ret (suc (suc x))",
  };
  std::vector<std::string> programs = {
      "def dbl : U (Pi (x : nat) F nat) = \\x. ret (suc (suc x))\n"
      "def two : nat = suc (suc 0)\n"
      "main : F nat = dbl two\n",
      "def f : U (F nat) = step{2} ret 1\n"
      "main : F nat = bind x <- f ; bind y <- f ; ret (suc x)\n",
      "def count : U (Pi (n : nat) F nat) =\n"
      "  \\n. ind n at m. F nat { zero => ret 0 | suc p, ih => step{1} bind r <- ih ; ret (suc r) }\n"
      "main : F nat = bind a <- count 3 ; step{1} ret (suc a)\n",
  };
  std::vector<Term> terms;
  for (const auto& s : sources) terms.push_back(T(s));
  for (const auto& p : programs) terms.push_back(linked(p));

  for (const Term& t : terms) {
    CAPTURE(pretty(t));
    oracle::BruteResult bc = oracle::brute_run(t, oracle::BruteWorld::Cost, nat_model());
    SemComp rc = ev().eval_comp({}, World::Cost, t);
    CHECK(cost_of(rc) == bc.cost);
    CHECK(alpha_eq(readback(rc, ty_f(ty_nat()), nat_model()),
                   nat_model().is_zero(bc.cost)
                       ? mk_ret(bc.value)
                       : mk_step(CostExpr::lit(bc.cost), mk_ret(bc.value)),
                   nat_model()));

    oracle::BruteResult bb = oracle::brute_run(t, oracle::BruteWorld::Beh, nat_model());
    SemComp rb = ev().eval_comp({}, World::Beh, t);
    CHECK(nat_model().is_zero(cost_of(rb)));
    CHECK(nat_model().is_zero(bb.cost));
    CHECK(alpha_eq(readback(rb, ty_f(ty_nat()), nat_model()), mk_ret(bb.value), nat_model()));

    // Erasure square: restricting the cost-world result behaviorally is the
    // same as evaluating behaviorally outright.
    SemVal erased = erase(rc, ty_f(ty_nat()), nat_model());
    auto* behv = rb.as<RetC>();
    REQUIRE(behv != nullptr);
    CHECK(sem_eq(erased, behv->value, nat_model()));

    // Determinism: a second run is indistinguishable.
    CHECK(sem_eq(rc, ev().eval_comp({}, World::Cost, t), nat_model()));
  }
}

TEST_CASE("forcing a suspended computation re-incurs its cost") {
  Term t = linked("def f : U (F nat) = step{2} ret 1\n"
                  "main : F nat = bind x <- f ; bind y <- f ; ret (suc x)\n");
  SemComp r = ev().eval_comp({}, World::Cost, t);
  CHECK(cost_of(r) == leaf(4));
  CHECK(num_of(r) == 2);
}

TEST_CASE("cost hoisted over a function is discharged at application") {
  SemComp direct = ev().eval_comp({}, World::Cost, T("(step{2} \\x. ret x) 1"));
  CHECK(cost_of(direct) == leaf(2));
  CHECK(num_of(direct) == 1);

  SemComp stacked = ev().eval_comp({}, World::Cost, T("(step{1} step{2} \\x. step{3} ret x) 1"));
  CHECK(cost_of(stacked) == leaf(6));

  SemComp beh = ev().eval_comp({}, World::Beh, T("(step{2} \\x. ret x) 1"));
  CHECK(nat_model().is_zero(cost_of(beh)));
}

TEST_CASE("cost algebra laws hold semantically") {
  std::vector<std::string> bodies = {
      "ret 2",
      "bind x <- ret 1 ; ret (suc x)",
      "step{4} ret 0",
  };
  for (const auto& e : bodies) {
    CAPTURE(e);
    // zero steps vanish
    CHECK(sem_eq(ev().eval_comp({}, World::Cost, T("step{0} " + e)),
                 ev().eval_comp({}, World::Cost, T(e)), nat_model()));
    // consecutive steps add, outer first
    CHECK(sem_eq(ev().eval_comp({}, World::Cost, T("step{1} step{2} " + e)),
                 ev().eval_comp({}, World::Cost, T("step{1+2} " + e)), nat_model()));
    // behaviorally, steps are silent
    CHECK(sem_eq(ev().eval_comp({}, World::Beh, T("step{7} " + e)),
                 ev().eval_comp({}, World::Beh, T(e)), nat_model()));
  }
}

TEST_CASE("monad and structure laws hold semantically") {
  auto both_worlds_equal = [&](const std::string& lhs, const std::string& rhs) {
    CAPTURE(lhs);
    CAPTURE(rhs);
    CHECK(sem_eq(ev().eval_comp({}, World::Cost, T(lhs)), ev().eval_comp({}, World::Cost, T(rhs)),
                 nat_model()));
    CHECK(sem_eq(ev().eval_comp({}, World::Beh, T(lhs)), ev().eval_comp({}, World::Beh, T(rhs)),
                 nat_model()));
  };
  // bind of a return substitutes
  both_worlds_equal("bind x <- ret 3 ; step{1} ret (suc x)", "step{1} ret (suc 3)");
  // binding the return of the scrutinee is the scrutinee
  both_worlds_equal("bind x <- step{2} ret 5 ; ret x", "step{2} ret 5");
  // bind reassociates
  both_worlds_equal(
      "bind y <- (bind x <- step{1} ret 1 ; step{1} ret (suc x)) ; ret (suc y)",
      "bind x <- step{1} ret 1 ; bind y <- step{1} ret (suc x) ; ret (suc y)");
  // cost commutes out of the scrutinee
  both_worlds_equal("bind x <- step{3} ret 2 ; ret (suc x)",
                    "step{3} bind x <- ret 2 ; ret (suc x)");
  // cost commutes out of an applied function
  both_worlds_equal("(step{2} \\x. ret x) 9", "step{2} (\\x. ret x) 9");
  // ind computes on zero and successor
  both_worlds_equal("ind 0 at m. F nat { zero => step{2} ret 1 | suc p, ih => ret p }",
                    "step{2} ret 1");
  both_worlds_equal("ind 2 at m. F nat { zero => ret 0 | suc p, ih => step{1} bind r <- ih ; "
                    "ret (suc r) }",
                    "step{1} bind r <- (ind 1 at m. F nat { zero => ret 0 | suc p, ih => "
                    "step{1} bind r <- ih ; ret (suc r) }) ; ret (suc r)");
}

TEST_CASE("sealed data trivializes behaviorally") {
  Term t = T("ret (seal (suc 0))");
  SemComp rc = ev().eval_comp({}, World::Cost, t);
  auto* cv = rc.as<RetC>()->value.as<sem::SealedV>();
  REQUIRE(cv != nullptr);
  CHECK(cv->arg->as<sem::Num>()->n == 1);

  SemComp rb = ev().eval_comp({}, World::Beh, t);
  CHECK(rb.as<RetC>()->value.as<sem::StarV>() != nullptr);

  // The star branch runs exactly when the scrutinee collapsed to *. This
  // term's branches do not cohere (the checker rejects it), which makes the
  // dispatch observable; it exercises mechanics only.
  Term u = T("unseal (seal 4) at c. F nat { seal a => ret (suc a) | * z => ret 1 }");
  CHECK(num_of(ev().eval_comp({}, World::Cost, u)) == 5);
  CHECK(num_of(ev().eval_comp({}, World::Beh, u)) == 1);

  // Both observations are legitimate: the branches agree under the phase.
  CHECK(num_of(ev().eval_comp({}, World::Beh,
                              T("unseal (seal 4) at c. F nat "
                                "{ seal a => step{2} ret 7 | * z => ret 7 }"))) == 7);
}

TEST_CASE("phase functions store behavioral values") {
  SemComp r = ev().eval_comp({}, World::Cost, T("ret (plam w. papp (plam v. 1))"));
  auto* o = r.as<RetC>()->value.as<sem::OpV>();
  REQUIRE(o != nullptr);
  CHECK(o->payload->as<sem::Num>()->n == 1);

  // Sealed data inside a phase function is already trivialized.
  SemComp s = ev().eval_comp({}, World::Cost, T("ret (plam w. seal 3)"));
  auto* so = s.as<RetC>()->value.as<sem::OpV>();
  REQUIRE(so != nullptr);
  CHECK(so->payload->as<sem::StarV>() != nullptr);
}

TEST_CASE("erase and readback cover the ground types") {
  CHECK(is_ground_type(ty_nat()));
  CHECK(is_ground_type(ty_f(ty_nat())));
  CHECK(is_ground_type(ty_sig(ty_nat(), ty_nat())));
  CHECK(is_ground_type(ty_cl(ty_nat())));
  CHECK(is_ground_type(ty_op(ty_sig(ty_nat(), ty_nat()))));
  CHECK_FALSE(is_ground_type(ty_pi(ty_nat(), ty_f(ty_nat()))));
  CHECK_FALSE(is_ground_type(ty_u(ty_f(ty_nat()))));
  CHECK_FALSE(is_ground_type(ty_eq(ty_nat(), mk_zero(), mk_zero())));

  // readback at nat is the numeral
  CHECK(alpha_eq(readback(SemVal{sem::Num{3}}, ty_nat(), nat_model()), numeral(3), nat_model()));

  // readback at F nat reconstructs the canonical computation
  SemComp r = ev().eval_comp({}, World::Cost, T("step{2} ret 1"));
  CHECK(pretty(readback(r, ty_f(ty_nat()), nat_model())) == "step{2} ret (suc 0)");

  // erase collapses seals and drops costs
  Term sealed = T("step{3} ret (seal (suc 0))");
  SemVal e = erase(ev().eval_comp({}, World::Cost, sealed), ty_f(ty_cl(ty_nat())), nat_model());
  CHECK(e.as<sem::StarV>() != nullptr);

  Term pairy = T("ret (1, seal 2)");
  SemVal ep = erase(ev().eval_comp({}, World::Cost, pairy),
                    ty_f(ty_sig(ty_nat(), ty_cl(ty_nat()))), nat_model());
  auto* pp = ep.as<sem::PairV>();
  REQUIRE(pp != nullptr);
  CHECK(pp->fst->as<sem::Num>()->n == 1);
  CHECK(pp->snd->as<sem::StarV>() != nullptr);

  // pairs read back at ground Sig
  SemComp rp = ev().eval_comp({}, World::Cost, pairy);
  CHECK(pretty(readback(rp, ty_f(ty_sig(ty_nat(), ty_cl(ty_nat()))), nat_model())) ==
        "ret (suc 0, seal (suc (suc 0)))");

  // non-ground usage is a usage error
  CHECK_THROWS_AS((void)readback(SemVal{sem::Num{0}}, ty_u(ty_f(ty_nat())), nat_model()),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)erase(SemVal{sem::Num{0}}, ty_pi(ty_nat(), ty_f(ty_nat())), nat_model()),
                  std::invalid_argument);
}

TEST_CASE("section property: readback then evaluate is the identity") {
  for (std::uint64_t n : {0ull, 1ull, 2ull, 7ull, 40ull}) {
    SemVal v{sem::Num{n}};
    Term t = readback(v, ty_nat(), nat_model());
    CHECK(sem_eq(ev().eval_val({}, World::Cost, t), v, nat_model()));
  }
  for (std::uint64_t c : {0ull, 1ull, 5ull}) {
    for (std::uint64_t n : {0ull, 3ull}) {
      SemComp comp{RetC{leaf(c), SemVal{sem::Num{n}}}};
      Term t = readback(comp, ty_f(ty_nat()), nat_model());
      CHECK(sem_eq(ev().eval_comp({}, World::Cost, t), comp, nat_model()));
    }
  }
}

TEST_CASE("canonize verification goes through the rewriter") {
  // Verification is a genuinely independent route: with no fuel the
  // evaluator still produces the answer but the witness stays unverified.
  Term t = T("bind x <- step{2} ret 1 ; step{1} ret (suc x)");
  CanonResult starved = canonize(t, true, 0, nat_model());
  CHECK(starved.cost == leaf(3));
  CHECK(starved.numeral == 2);
  CHECK(starved.verified == CanonResult::Verified::Undecided);

  CanonResult full = canonize(t, true, 100000, nat_model());
  CHECK(full.verified == CanonResult::Verified::Yes);
  CHECK(full.trace_len > 0);
}

TEST_CASE("evaluation works in every cost model") {
  CostModel mx = CostModel::nat_max();
  Evaluator emx(mx);
  Term t = parse_term_text("bind x <- step{2} ret 1 ; step{3} ret (suc x)", mx).value();
  SemComp r = emx.eval_comp({}, World::Cost, t);
  CHECK(r.as<RetC>()->cost == leaf(3)); // max, not sum

  CostModel pr = CostModel::product(CostModel::nat_add(), CostModel::nat_max());
  Evaluator epr(pr);
  Term t2 = parse_term_text("bind x <- step{(2,2)} ret 1 ; step{(3,3)} ret (suc x)", pr).value();
  SemComp r2 = epr.eval_comp({}, World::Cost, t2);
  CHECK(r2.as<RetC>()->cost == testutil::duo(leaf(5), leaf(3)));
}

TEST_CASE("dynamic type errors are defended against") {
  CHECK_THROWS_AS((void)ev().eval_comp({}, World::Cost, T("bind x <- ret 0 ; x")),
                  std::logic_error);
  CHECK_THROWS_AS((void)ev().eval_val({}, World::Cost, mk_var(0)), std::logic_error);
  CHECK_THROWS_AS((void)ev().eval_comp({}, World::Cost, T("(\\x. ret x) 0 1")), std::logic_error);
}
