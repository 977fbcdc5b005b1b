#include "calf/parser.hpp"

#include "calf/cost.hpp"
#include "calf/syntax.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace calf;
using testutil::leaf;

namespace {

const CostModel& nat_model() {
  static CostModel m = CostModel::nat_add();
  return m;
}

SourceFile parse_ok(const std::string& src, const CostModel& m = nat_model()) {
  ParseResult r = parse(src, m);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) INFO(render_diagnostic(src, d));
    REQUIRE(r.ok());
  }
  return *r.file;
}

Diagnostic parse_err(const std::string& src, const CostModel& m = nat_model()) {
  ParseResult r = parse(src, m);
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  return r.diagnostics.front();
}

Term term_ok(const std::string& src, const CostModel& m = nat_model()) {
  std::vector<Diagnostic> diags;
  auto t = parse_term_text(src, m, &diags);
  if (!t) {
    for (const auto& d : diags) INFO(render_diagnostic(src, d));
    REQUIRE(t.has_value());
  }
  return *t;
}

} // namespace

TEST_CASE("program parsing hits the documented shapes") {
  const auto& m = nat_model();

  SourceFile a = parse_ok("main : F nat = ret 0");
  CHECK(alpha_eq(a.main, mk_ret(mk_zero()), m));
  CHECK(alpha_eq(a.main_type, ty_f(ty_nat()), m));
  CHECK(a.decls.empty());

  SourceFile b = parse_ok("main : F nat = step{3} ret (suc (suc 0))");
  CHECK(alpha_eq(b.main, mk_step(CostExpr::lit(leaf(3)), mk_ret(numeral(2))), m));

  Diagnostic d = parse_err("main : F nat = ret x");
  CHECK(d.message == "unbound identifier x");
}

TEST_CASE("diagnostic spans point at the offending token") {
  std::string src = "main : F nat = ret x";
  Diagnostic d = parse_err(src);
  REQUIRE(d.span.known());
  CHECK(src.substr(d.span.lo, d.span.hi - d.span.lo) == "x");

  std::string rendered = render_diagnostic(src, d, "demo.calf");
  CHECK(rendered.find("demo.calf:1:20: error: unbound identifier x") != std::string::npos);
  CHECK(rendered.find('^') != std::string::npos);
}

TEST_CASE("pretty prints the documented forms") {
  CHECK(pretty(mk_step(CostExpr::lit(leaf(3)), mk_ret(numeral(2)))) ==
        "step{3} ret (suc (suc 0))");
  CHECK(pretty(mk_lam(mk_ret(mk_var(0)))) == "\\x0. ret x0");
  CHECK(pretty(numeral(0)) == "0");
  CHECK(pretty(numeral(3)) == "suc (suc (suc 0))");
  CHECK(pretty(mk_star()) == "*");
  CHECK(pretty(mk_refl()) == "refl");
  CHECK(pretty(ty_pi(ty_nat(), ty_f(ty_nat()))) == "Pi (x0 : nat) F nat");
  CHECK(pretty(ty_u(ty_f(ty_nat()))) == "U F nat");
}

TEST_CASE("binder forms parse and scope correctly") {
  const auto& m = nat_model();

  Term bind = term_ok("bind x <- ret 1; ret (suc x)");
  CHECK(alpha_eq(bind, mk_bind(mk_ret(numeral(1)), mk_ret(mk_suc(mk_var(0)))), m));

  Term lam = term_ok("\\x. \\y. ret x");
  CHECK(alpha_eq(lam, mk_lam(mk_lam(mk_ret(mk_var(1)))), m));

  Term sp = term_ok("split (1, 2) as (a, b) in ret a");
  CHECK(alpha_eq(sp, mk_split(mk_pair(numeral(1), numeral(2)), mk_ret(mk_var(1))), m));

  Term app = term_ok("(\\f. f 0) (\\x. ret x)");
  CHECK(alpha_eq(app,
                 mk_ap(mk_lam(mk_ap(mk_var(0), mk_zero())), mk_lam(mk_ret(mk_var(0)))),
                 m));

  Term uns = term_ok(
      "unseal seal 0 at c. F nat { seal a => ret a | * z => ret 0 }");
  CHECK(alpha_eq(uns,
                 mk_unseal_ind(mk_seal(mk_zero()), ty_f(ty_nat()), mk_ret(mk_var(0)),
                               mk_ret(mk_zero())),
                 m));

  Term ind = term_ok(
      "ind 2 at n. F nat { zero => ret 0 | suc p, ih => step{1} ih }");
  CHECK(alpha_eq(ind,
                 mk_ind(numeral(2), ty_f(ty_nat()), mk_ret(mk_zero()),
                        mk_step(CostExpr::lit(leaf(1)), mk_var(0))),
                 m));

  Term pl = term_ok("plam w. ret (papp (plam v. 1))");
  CHECK(alpha_eq(pl, mk_plam(mk_ret(mk_pap(mk_plam(numeral(1))))), m));
}

TEST_CASE("phase names are not usable as terms") {
  Diagnostic d = parse_err("main : F nat = plam z. ret z");
  CHECK(d.message.find("phase assumption") != std::string::npos);
  CHECK_FALSE(d.hint.empty());

  Diagnostic d2 = parse_err(
      "main : F nat = unseal seal 0 at c. F nat { seal a => ret a | * z => ret z }");
  CHECK(d2.message.find("phase assumption") != std::string::npos);
}

TEST_CASE("declarations link by substitution") {
  const auto& m = nat_model();
  SourceFile f = parse_ok(
      "def two : nat = 2\n"
      "def dbl : Pi (x : nat) F nat = \\x. ret (suc (suc x))\n"
      "main : F nat = dbl two\n");
  REQUIRE(f.decls.size() == 2);
  CHECK(f.decls[0].name == "two");
  CHECK(alpha_eq(f.decls[0].type, ty_nat(), m));
  // computation-typed defs are stored with a U-wrapped type
  CHECK(alpha_eq(f.decls[1].type, ty_u(ty_pi(ty_nat(), ty_f(ty_nat()))), m));
  // main sees dbl as the innermost variable
  CHECK(alpha_eq(f.main, mk_ap(mk_var(0), mk_var(1)), m));

  Term linked = f.linked_main();
  CHECK(alpha_eq(linked,
                 mk_ap(mk_lam(mk_ret(mk_suc(mk_suc(mk_var(0))))), numeral(2)), m));

  // defs may appear in later types too
  SourceFile g = parse_ok(
      "def two : nat = 2\n"
      "main : F (eq (nat, two, suc (suc 0))) = ret refl\n");
  CHECK(alpha_eq(g.linked_main_type(),
                 ty_f(ty_eq(ty_nat(), numeral(2), numeral(2))), m));
}

TEST_CASE("declaration errors") {
  CHECK(parse_err("def a : nat = 0\ndef a : nat = 1\nmain : F nat = ret 0")
            .message.find("duplicate definition a") != std::string::npos);
  CHECK(parse_err("def a : nat = b\ndef b : nat = 0\nmain : F nat = ret 0")
            .message == "unbound identifier b");
  CHECK(parse_err("def a : nat = a\nmain : F nat = ret 0").message ==
        "unbound identifier a");
  CHECK(parse_err("main : nat = 0").message.find("main must have a computation type") !=
        std::string::npos);
  // `ret` extends maximally right, so trailing junk shows up inside the term
  CHECK(parse_err("main : F nat = ret 0 extra").message == "unbound identifier extra");
  CHECK(parse_err("main : F nat = ret 0 ; ret 1").message.find("expected end of input") !=
        std::string::npos);
}

TEST_CASE("cost literals follow the active model") {
  const auto& nat = nat_model();
  CostModel pair = CostModel::by_name("pair:nat,nat").value();

  Term sum = term_ok("step{1+2} ret 0", nat);
  CHECK(alpha_eq(sum, mk_step(CostExpr::lit(leaf(3)), mk_ret(mk_zero())), nat));

  // a bare 0 is the identity in every model
  Term z1 = term_ok("step{0} ret 0", nat);
  CHECK(alpha_eq(z1, mk_step(CostExpr::lit(leaf(0)), mk_ret(mk_zero())), nat));
  Term z2 = term_ok("step{0} ret 0", pair);
  CHECK(alpha_eq(z2, mk_step(CostExpr::zero(), mk_ret(mk_zero())), pair));

  Term tup = term_ok("step{(1,2)+(0,3)} ret 0", pair);
  CHECK(alpha_eq(tup, mk_step(CostExpr::lit(testutil::duo(leaf(1), leaf(5))), mk_ret(mk_zero())),
                 pair));

  std::vector<Diagnostic> diags;
  CHECK_FALSE(parse_term_text("step{3} ret 0", pair, &diags).has_value());
  REQUIRE_FALSE(diags.empty());
  CHECK(diags.front().message.find("does not fit cost model pair:nat,nat") !=
        std::string::npos);

  CHECK_FALSE(parse_term_text("step{} ret 0", nat, nullptr).has_value());
  CHECK_FALSE(parse_term_text("step{1+} ret 0", nat, nullptr).has_value());
  CHECK_FALSE(parse_term_text("step{1 ret 0", nat, nullptr).has_value());
}

TEST_CASE("comments and whitespace are trivia") {
  SourceFile f = parse_ok(
      "-- leading comment\n"
      "main : F nat = -- trailing\n"
      "  ret 0 -- done\n");
  CHECK(alpha_eq(f.main, mk_ret(mk_zero()), nat_model()));
}

TEST_CASE("types parse standalone and round-trip") {
  const auto& m = nat_model();
  const char* samples[] = {
      "nat",
      "U F nat",
      "U Pi (x0 : nat) F nat",
      "Sig (x0 : nat) eq (nat, x0, x0)",
      "Op nat",
      "Cl U F nat",
      "F Sig (x0 : nat) nat",
      "Pi (x0 : nat) Pi (x1 : U F nat) F eq (nat, x0, x0)",
      "F Cl nat",
  };
  for (const char* s : samples) {
    CAPTURE(s);
    auto t = parse_type_text(s, m, nullptr);
    REQUIRE(t.has_value());
    CHECK(pretty(*t) == s);
    auto again = parse_type_text(pretty(*t), m, nullptr);
    REQUIRE(again.has_value());
    CHECK(alpha_eq(*t, *again, m));
  }

  CHECK_FALSE(parse_type_text("U nat", m, nullptr).has_value());
  CHECK_FALSE(parse_type_text("F F nat", m, nullptr).has_value());
  CHECK_FALSE(parse_type_text("Sig (x : F nat) nat", m, nullptr).has_value());
}

TEST_CASE("parse after pretty is the identity on random closed terms") {
  const auto& m = nat_model();
  std::mt19937_64 rng(20240915);
  int checked = 0;
  for (int i = 0; i < 600; ++i) {
    Term t = testutil::gen_raw(rng, 1 + static_cast<int>(rng() % 24), 0);
    std::string s = pretty(t);
    CAPTURE(s);
    std::vector<Diagnostic> diags;
    auto back = parse_term_text(s, m, &diags);
    if (!back && !diags.empty()) INFO(render_diagnostic(s, diags.front()));
    REQUIRE(back.has_value());
    CHECK(alpha_eq(t, *back, m));
    // canonical text is a fixpoint of parse-then-pretty
    CHECK(pretty(*back) == s);
    ++checked;
  }
  CHECK(checked == 600);
}

TEST_CASE("line and column bookkeeping") {
  std::string src = "main : F nat =\n  ret x";
  Diagnostic d = parse_err(src);
  auto [line, col] = line_col_at(src, d.span.lo);
  CHECK(line == 2);
  CHECK(col == 7);
}
