#pragma once

#include <variant>

#include "swanlab/datum_rules.hpp"
#include "swanlab/fierce_ext.hpp"

namespace swanlab {

// Order-p character chi_u, carried by a representative of its Kummer class
// together with the cached reduction (u * multiplier^p = reduced value).
struct CharP {
    ConstFieldPtr k;
    LocElem u;
    KummerResult red;
};

// Runs kummer_reduce; TrivialCharacter / RequiresConstantExtension /
// InvalidInput propagate from there.
CharP make_char_p(const LocElem& u);

// chi^a for a coprime to p (InvalidInput otherwise).
CharP char_p_twist(const CharP& chi, long long a);

// Order-p^2 character presented over its order-p quotient chi-bar = chi_u0:
// M is the degree-p extension cut by u0 (reduced), and the restriction
// chi|_M is the Kummer class of y z, where y is the canonical root in M
// (y = x in case (a), y = 1 + pi_t x in case (b); either way y^p is the
// reduced value and sigma(y)/y = zeta_p on the nose). The quotient
// invariant p chi = chi-bar needs no runtime check: p chi corresponds to
// (y z)^p = u0 z^p, the class of u0. Requires zeta_{p^2}, i.e. a constant
// field of root depth n >= 2 (InvalidContext otherwise).
struct CharTower {
    FierceExtPtr M;
    LocElem z;
};

CharTower make_tower(const FierceExtPtr& M, const LocElem& z);

// From a representative of the order-p^2 class itself: u_top reduces to
// u0 with u_top * mult^p = u0, so chi|_M is the class of
// u_top^{1/p} = y * mult^{-1}.
CharTower make_tower_from_class(const LocElem& u_top);

// Closed forms on the reduced shape, in the pi-system normalization:
//   case (a): (p/(p-1),      d u-bar / u-bar)
//   case (b): (p/(p-1) - pt, d w-bar)
RamPair swan_p(const CharP& chi);

// Independent route through the extension: b = N(sigma(x)/x - 1) and
// y = N(x) computed with honest Galois and norm arithmetic in M, then
// delta = v(b) and omega = res(pi_delta / b) * d y-bar / y-bar. Shares no
// formula with swan_p; the two must agree exactly.
RamPair swan_p_norm_oracle(const CharP& chi);

// Both pairs of an order-p^2 tower. The quotient pair comes from swan_p.
// The top break is delta = sw(chi|_M) + epsilon: the restriction is
// reduced over M by reduce_over_extension and epsilon is the Herbrand
// defect of the quotient. The top form descends from the restriction's
// form omega-tilde over M-bar through the trace pairing
//   tr(c-bar * omega-tilde) = Tbar(c-bar) * omega,
// where Tbar(c-bar) = res(Tr_{M/K}(c) / pi_epsilon) is the reduced trace
// and tr takes the 0th sigma-component of the ds/sigma-coefficient. Every
// basis power x^i gives one equation; indices with Tbar = 0 must have
// vanishing left side, the rest must agree on omega, and the result must
// satisfy the full order-raising case analysis against the quotient pair
// (the same case split validate_datum enforces), else
// InternalInconsistency. TrivialCharacter propagates when the restriction
// collapses (the tower was not of order p^2).
RamDatum swan_tower(const CharTower& chi);

// Addition law for pairs at the same or different breaks:
//   (i)  different deltas: the pair with the larger delta survives;
//   (ii) equal deltas, forms not cancelling: (delta, omega_1 + omega_2);
//   (iii) equal deltas, omega_1 + omega_2 = 0: only the strict bound
//         "new break < delta" survives, carried by Cancellation.
struct Cancellation {
    Rat bound;
};

using CombineResult = std::variant<RamPair, Cancellation>;

CombineResult combine(const RamPair& a, const RamPair& b);

// The full datum, with the shape classification enforced as a runtime
// assertion on the way out (InternalInconsistency on violation).
RamDatum ramification_datum(const CharP& chi);
RamDatum ramification_datum(const CharTower& chi);

// Minimal lift of a quotient with delta-bar < 1/(p-1) (InvalidInput
// otherwise): iterates chi <- chi + psi_i where psi_i is built from the
// epsilon-lift of the current form's solution, until sw drops to the floor
// p delta-bar. Strict descent is asserted each round; the budget guards
// the loop (IterationBudgetExceeded, message carries the delta trace).
// Moderation of each multiplier is checked opportunistically and reported
// on stderr without stopping the iteration.
CharTower minimize_swan(const CharP& chibar, int budget = 30);

// Realizes a validated datum over k (one pair: order p; two pairs: an
// order-p^2 tower). The recomputed datum of the result is asserted equal
// to the input. Lattice gaps raise RequiresConstantExtension with the
// suggested index; missing zeta_{p^2} raises InvalidContext; a form whose
// logarithmic preimage needs an irreducible factor beyond the solver bound
// raises SolverBoundExceeded.
using Character = std::variant<CharP, CharTower>;

Character construct_from_datum(const ConstFieldPtr& k, const RamDatum& d);

}  // namespace swanlab
