#pragma once

#include "calf/cost.hpp"
#include "calf/syntax.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace calf {

// The two evaluation worlds: the cost world observes step counts, the
// behavioral world silences them. Behavioral evaluation never produces a
// nonzero cost (by construction: every cost operation is a no-op there).
enum class World { Cost, Beh };

struct SemVal;
struct SemComp;

namespace sem {

struct Num {
  std::uint64_t n = 0;
};

// A suspended computation; forcing is free, running it re-incurs its cost.
struct Thunk {
  std::shared_ptr<SemComp> comp;
};

// A function awaiting its argument, carrying cost hoisted over the lambda.
// The pending cost is discharged into the result at application time.
struct Closure {
  CostElem pending;
  std::vector<SemVal> env;
  Term body; // binds one variable
  World world; // world at creation; a behavioral closure never runs costfully
};

struct PairV {
  std::shared_ptr<SemVal> fst, snd;
};

struct ReflV {};

struct SealedV {
  std::shared_ptr<SemVal> arg;
};

struct StarV {};

// A value available only under the behavioral phase, stored pre-evaluated.
struct OpV {
  std::shared_ptr<SemVal> payload;
};

} // namespace sem

struct SemVal {
  std::variant<sem::Num, sem::Thunk, sem::Closure, sem::PairV, sem::ReflV, sem::SealedV,
               sem::StarV, sem::OpV>
      v;

  template <class T> const T* as() const { return std::get_if<T>(&v); }
};

// A finished returner result; the cost is the monoid identity at World::Beh.
struct RetC {
  CostElem cost;
  SemVal value;
};

struct SemComp {
  std::variant<RetC, sem::Closure> c;

  template <class T> const T* as() const { return std::get_if<T>(&c); }
};

using Env = std::vector<SemVal>;

class Evaluator {
public:
  explicit Evaluator(CostModel model);

  // Terms in value position; computation forms become thunks.
  SemVal eval_val(const Env& env, World w, const Term& t) const;
  // Terms in computation position; value forms must force to a thunk.
  SemComp eval_comp(const Env& env, World w, const Term& t) const;

  const CostModel& model() const { return model_; }

private:
  void add_cost(SemComp& r, const CostElem& amount, World w) const;

  CostModel model_;
};

// Structural equality of semantic values (costs compared as monoid elements,
// closure bodies up to alpha-equivalence).
bool sem_eq(const SemVal& a, const SemVal& b, const CostModel& m);
bool sem_eq(const SemComp& a, const SemComp& b, const CostModel& m);

// Ground types are the ones whose inhabitants are fully observable:
// nat, Sig/Cl/Op of ground, and F of ground for computations.
bool is_ground_type(const Type& ty);

// Restriction to the behavioral world: drop costs, collapse seals.
SemVal erase(const SemVal& v, const Type& ty, const CostModel& m);
SemVal erase(const SemComp& c, const Type& ty, const CostModel& m);

// Read a semantic value back into syntax; inverse of eval on canonical forms.
Term readback(const SemVal& v, const Type& ty, const CostModel& m);
Term readback(const SemComp& c, const Type& ty, const CostModel& m);

struct CanonResult {
  CostElem cost;
  std::uint64_t numeral = 0;
  Term witness;
  enum class Verified { Yes, No, Undecided };
  std::optional<Verified> verified; // engaged when verification was requested
  std::size_t trace_len = 0;        // rewrite firings used by verification
};

// Evaluate a closed computation of returner-of-nat type, read off its cost
// and numeral, and rebuild the canonical witness step{c} ret (suc^n 0)
// (step omitted at zero cost). With verify, the rewriter independently
// checks that the witness equals the input in the equational theory.
CanonResult canonize(const Term& t, bool verify, long long fuel, const CostModel& model);

} // namespace calf
