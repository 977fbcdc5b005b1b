#pragma once

#include "calf/cost.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace calf {

// Byte range into the source a node was parsed from. Synthesized nodes carry
// the empty span.
struct Span {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  bool known() const { return hi > lo; }
  friend bool operator==(const Span&, const Span&) = default;
};

class Term;
class Type;
struct TermNode;
struct TypeNode;

// Cost annotations on step. Literals are monoid elements; sums and the
// polymorphic zero appear through rewriting and programmatic construction
// and normalize to one literal.
class CostExpr {
public:
  static CostExpr lit(CostElem e);
  static CostExpr add(CostExpr a, CostExpr b);
  static CostExpr zero();

  bool is_lit() const;
  bool is_add() const;
  bool is_zero() const;
  const CostElem& lit_elem() const;    // requires is_lit
  const CostExpr& add_lhs() const;     // requires is_add
  const CostExpr& add_rhs() const;     // requires is_add

  // Folds the expression to one element of the given monoid. Throws
  // std::invalid_argument when a literal does not fit the model.
  CostElem normalized(const CostModel& m) const;

private:
  struct Node;
  explicit CostExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class TermKind {
  Var, Zero, Suc, Ret, Bind, Step, Lam, Ap, Pair, Split,
  Refl, Seal, Star, UnsealInd, PLam, PAp, Ind,
};

enum class TypeKind { Nat, U, Sig, Eq, Op, Cl, F, Pi };

namespace tm { struct Var; }

// Immutable handle to a term node. Spans live on the handle, so shared
// subtrees keep per-occurrence source positions.
class Term {
public:
  Term() = default; // empty handle; node() requires a real one

  const struct TermNode& raw() const { return *p_; }
  TermKind kind() const;
  Span span() const { return span_; }
  Term with_span(Span s) const {
    Term t = *this;
    t.span_ = s;
    return t;
  }
  bool empty() const { return p_ == nullptr; }

  template <class T>
  const T* as() const;

  friend Term make_term(struct TermNode n, Span s);

private:
  std::shared_ptr<const TermNode> p_;
  Span span_;
};

class Type {
public:
  Type() = default;

  const struct TypeNode& raw() const { return *p_; }
  TypeKind kind() const;
  Span span() const { return span_; }
  Type with_span(Span s) const {
    Type t = *this;
    t.span_ = s;
    return t;
  }
  bool empty() const { return p_ == nullptr; }

  template <class T>
  const T* as() const;

  friend Type make_type(struct TypeNode n, Span s);

private:
  std::shared_ptr<const TypeNode> p_;
  Span span_;
};

// Term payloads. Binders are positional: a field documented as "binds n"
// holds a body whose de Bruijn indices 0..n-1 refer to the new variables,
// innermost last. Phase binders bind no term variable; term indices pass
// through them unchanged.
namespace tm {

struct Var { int index = 0; };
struct Zero {};
struct Suc { Term arg; };
struct Ret { Term arg; };
struct Bind { Term scrut; Term body; };          // body binds 1
struct Step { CostExpr cost; Term body; };
struct Lam { Term body; };                       // body binds 1
struct Ap { Term fn; Term arg; };
struct Pair { Term fst; Term snd; };
struct Split { Term scrut; Term body; };         // body binds 2: fst then snd
struct Refl {};
struct Seal { Term arg; };
struct Star {};
struct UnsealInd {
  Term scrut;
  Type motive;      // binds 1: the scrutinee
  Term eta_branch;  // binds 1: the sealed payload
  Term star_branch; // under a phase assumption, binds no term variable
};
struct PLam { Term body; };                      // under a phase assumption
struct PAp { Term arg; };
struct Ind {
  Term scrut;
  Type motive;      // binds 1: the scrutinee
  Term zero_branch;
  Term suc_branch;  // binds 2: predecessor then recursive result
};

using Node = std::variant<Var, Zero, Suc, Ret, Bind, Step, Lam, Ap, Pair, Split,
                          Refl, Seal, Star, UnsealInd, PLam, PAp, Ind>;

} // namespace tm

// Type payloads. Sig and Pi bind one term variable in their second field;
// the Ind/UnsealInd motives above follow the same convention.
namespace ty {

struct Nat {};
struct U { Type comp; };
struct Sig { Type fst; Type snd; };  // snd binds 1
struct Eq { Type type; Term lhs; Term rhs; };
struct Op { Type arg; };
struct Cl { Type arg; };
struct F { Type arg; };
struct Pi { Type dom; Type cod; };   // cod binds 1

using Node = std::variant<Nat, U, Sig, Eq, Op, Cl, F, Pi>;

} // namespace ty

struct TermNode { tm::Node v; };
struct TypeNode { ty::Node v; };

inline TermKind Term::kind() const { return static_cast<TermKind>(p_->v.index()); }
inline TypeKind Type::kind() const { return static_cast<TypeKind>(p_->v.index()); }

template <class T>
const T* Term::as() const { return p_ ? std::get_if<T>(&p_->v) : nullptr; }

template <class T>
const T* Type::as() const { return p_ ? std::get_if<T>(&p_->v) : nullptr; }

inline const tm::Node& node_of(const Term& t) { return t.raw().v; }
inline const ty::Node& node_of(const Type& t) { return t.raw().v; }

Term make_term(TermNode n, Span s = {});
Type make_type(TypeNode n, Span s = {});

// F and Pi classify computations; everything else classifies values.
bool is_comp_type(const Type& t);

// Term factories.
Term mk_var(int index, Span s = {});
Term mk_zero(Span s = {});
Term mk_suc(Term arg, Span s = {});
Term mk_ret(Term arg, Span s = {});
Term mk_bind(Term scrut, Term body, Span s = {});
Term mk_step(CostExpr cost, Term body, Span s = {});
Term mk_lam(Term body, Span s = {});
Term mk_ap(Term fn, Term arg, Span s = {});
Term mk_pair(Term fst, Term snd, Span s = {});
Term mk_split(Term scrut, Term body, Span s = {});
Term mk_refl(Span s = {});
Term mk_seal(Term arg, Span s = {});
Term mk_star(Span s = {});
Term mk_unseal_ind(Term scrut, Type motive, Term eta_branch, Term star_branch, Span s = {});
Term mk_plam(Term body, Span s = {});
Term mk_pap(Term arg, Span s = {});
Term mk_ind(Term scrut, Type motive, Term zero_branch, Term suc_branch, Span s = {});

// Type factories.
Type ty_nat(Span s = {});
Type ty_u(Type comp, Span s = {});
Type ty_sig(Type fst, Type snd, Span s = {});
Type ty_eq(Type type, Term lhs, Term rhs, Span s = {});
Type ty_op(Type arg, Span s = {});
Type ty_cl(Type arg, Span s = {});
Type ty_f(Type arg, Span s = {});
Type ty_pi(Type dom, Type cod, Span s = {});

// Ordered typing context. Term variables are addressed by de Bruijn index
// counting term entries only, innermost first; phase entries record that the
// behavioral phase is assumed from that point on.
class Context {
public:
  struct TermVar { Type type; };
  struct Phase {};
  using Entry = std::variant<TermVar, Phase>;

  Context() = default;

  Context extended(Type t) const;
  Context with_phase() const;

  int term_var_count() const;
  bool has_phase() const;

  // Type of the index-th term variable, shifted into the full context scope.
  // Empty when the index is out of range.
  std::optional<Type> lookup(int index) const;

  const std::vector<Entry>& entries() const { return entries_; }

private:
  std::vector<Entry> entries_;
};

// Adds amount to every variable index >= cutoff.
Term shift(const Term& t, int amount, int cutoff = 0);
Type shift(const Type& t, int amount, int cutoff = 0);

// Replaces variable `depth` by `replacement` (shifted under the crossed
// binders) and decrements the indices above it. subst opens an immediate
// binder: the replacement is scoped where the binder itself lives.
Term subst_at(const Term& body, const Term& replacement, int depth);
Type subst_at(const Type& body, const Term& replacement, int depth);
Term subst(const Term& body, const Term& replacement);
Type subst(const Type& body, const Term& replacement);

// True when variable `index` occurs free in the term or type.
bool mentions_var(const Term& t, int index);
bool mentions_var(const Type& t, int index);

// Structural equality modulo cost-expression normalization in the given
// monoid. De Bruijn representation makes this alpha equivalence.
bool alpha_eq(const Term& a, const Term& b, const CostModel& m);
bool alpha_eq(const Type& a, const Type& b, const CostModel& m);

// suc^n(zero) and its inverse.
Term numeral(std::uint64_t n);
std::optional<std::uint64_t> as_numeral(const Term& t);

// Exhaustive-match helper for std::visit.
template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace calf
