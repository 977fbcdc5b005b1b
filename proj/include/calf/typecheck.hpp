#pragma once

#include "calf/cost.hpp"
#include "calf/parser.hpp"
#include "calf/rewrite.hpp"
#include "calf/syntax.hpp"

#include <stdexcept>
#include <string>

namespace calf {

enum class TypeErrorKind {
  Mismatch,
  Polarity,
  Unbound,
  PhaseRequired,
  UndecidedEquality,
  IllFormedCost,
};

const char* type_error_kind_name(TypeErrorKind k);

class TypeError : public std::runtime_error {
public:
  TypeError(TypeErrorKind kind, Span span, std::string message, std::string expected = "",
            std::string actual = "");

  TypeErrorKind kind;
  Span span;
  std::string message;  // without the kind prefix; what() carries everything
  std::string expected; // pretty-printed, empty when not meaningful
  std::string actual;

  Diagnostic to_diagnostic() const;
};

enum class TriState { Equal, Distinct, Undecided };

// Bidirectional checker: introduction forms check against a type,
// elimination forms infer, and definitional equality is delegated to the
// rewriter under the context's phase. One extension on top of the pure
// discipline: an immediately applied literal lambda infers (the argument
// infers, then the body infers under it), so beta reducts of checkable
// programs stay checkable.
class Checker {
public:
  explicit Checker(CostModel model, long long fuel = 100000);

  Type infer(const Context& ctx, const Term& t) const;
  void check(const Context& ctx, const Term& t, const Type& ty) const;
  TriState equal_types(const Context& ctx, const Type& a, const Type& b) const;

  // Well-formedness: polarity discipline plus embedded terms in eq types.
  void check_type(const Context& ctx, const Type& ty) const;

  // Declarations in order, then main against its declared type.
  void check_file(const SourceFile& f) const;

  const Rewriter& rewriter() const { return rw_; }
  const CostModel& model() const { return rw_.model(); }
  long long fuel() const { return fuel_; }

private:
  TriState prove(const Context& ctx, const Term& a, const Term& b) const;
  Type as_value(Type t) const;
  Type as_comp(const Type& t, Span where) const;
  void require_equal(const Context& ctx, const Type& expected, const Type& actual,
                     Span where) const;

  Rewriter rw_;
  long long fuel_;
};

} // namespace calf
