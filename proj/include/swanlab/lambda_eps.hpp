#pragma once

#include "swanlab/herbrand.hpp"
#include "swanlab/rat.hpp"

namespace swanlab {

// Ambient data of the Lambda_epsilon monoid: the prime, the invariant
// epsilon (a member of the value lattice), and the lattice itself.
struct EpsilonContext {
    long long p;
    Rat epsilon;
    ValGroup lambda;

    EpsilonContext(long long p_, Rat eps, ValGroup lam);
};

// Context of the degree-p^r subextension with the given upper breaks.
EpsilonContext make_epsilon_context(const BreakSequence& b,
                                    const ValGroup& lambda);

// Membership in Lambda_epsilon: t >= 0 such that for every k >= 1,
//   t < (1 - epsilon/p) nu_k  implies  p^k t in Lambda,
// with nu_k = 1 + 1/p + ... + 1/p^(k-1). Decided by a finite procedure:
// the premise set is upward closed {k >= k1} because nu_k increases, and
// p^(k1) t in Lambda already forces all later k. Empty premise set
// (t >= (p - epsilon)/(p - 1)) means vacuous membership.
bool in_lambda_epsilon(const Rat& t, const EpsilonContext& ctx);

// s + t - epsilon for members s, t >= epsilon; the result is again a member
// (checked, since the arithmetic is cheap and the claim is load-bearing).
Rat lambda_eps_shift(const Rat& s, const Rat& t, const EpsilonContext& ctx);

}  // namespace swanlab
