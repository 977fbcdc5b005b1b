#pragma once

#include "calf/cost.hpp"
#include "calf/syntax.hpp"

#include <cstdint>
#include <functional>

namespace calf {

// Deterministic pseudo-random generator of well-typed closed terms for
// property tests. target must be nat, F nat, or Pi (x : nat) F nat; size
// bounds the number of AST nodes (within a fixed linear factor). Cost literals are
// drawn from elements valid for the given model. refl and * are never
// emitted: their typing needs equation or phase obligations that random
// generation cannot discharge.
Term gen_term(std::uint64_t seed, int size, const Type& target,
              const CostModel& model = CostModel::nat_add());

// Depth-first visit of a term and all its subterms (motives excluded).
void visit_subterms(const Term& t, const std::function<void(const Term&)>& f);

} // namespace calf
