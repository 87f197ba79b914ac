#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swanlab/constants.hpp"
#include "swanlab/lambda_eps.hpp"
#include "swanlab/ratfun.hpp"

namespace swanlab {

// Element of K = k(s) under the Gauss valuation: value = pi^(sv/e') * num/den
// where num, den are polynomials in s over O_k and den has unit content
// (some coefficient of valuation 0, hence nonzero residue). Inversion swaps
// num and den, so no power series ever appear; precision lives on the
// ConstElem coefficients.
struct LocElem {
    ConstFieldPtr k;
    std::vector<ConstElem> num, den;
    long long sv = 0;  // pi-shift in 1/e' units, may be negative
};

LocElem make_loc(ConstFieldPtr k, std::vector<ConstElem> num,
                 std::vector<ConstElem> den, long long sv = 0);
LocElem loc_zero(const ConstFieldPtr& k);
LocElem loc_one(const ConstFieldPtr& k);
LocElem loc_from_int(const ConstFieldPtr& k, long long v);
LocElem loc_const(const ConstElem& c);
LocElem loc_s(const ConstFieldPtr& k);
// pi_t as a pure shift: exact for every lattice t (negative allowed)
LocElem loc_pi(const ConstFieldPtr& k, const Rat& t);

LocElem loc_add(const LocElem& a, const LocElem& b);
LocElem loc_sub(const LocElem& a, const LocElem& b);
LocElem loc_neg(const LocElem& a);
LocElem loc_mul(const LocElem& a, const LocElem& b);
LocElem loc_inv(const LocElem& a);  // throws PrecisionExhausted on 0-at-prec
LocElem loc_div(const LocElem& a, const LocElem& b);
LocElem loc_pow(const LocElem& a, long long e);  // negative e inverts first

bool loc_is_zero_at_prec(const LocElem& a);
bool loc_eq(const LocElem& a, const LocElem& b);

// Gauss valuation v(sum c_i s^i) = min v(c_i) plus the pi-shift. nullopt
// when the element vanishes at working precision.
std::optional<Rat> loc_val(const LocElem& a);
Rat gauss_valuation(const LocElem& a);  // throws PrecisionExhausted
bool loc_val_at_least(const LocElem& a, const Rat& t);

// Lower bound below which nothing about a is known: the minimum precision
// edge over the coefficients (full precision for the exact zero). Valid
// even when every coefficient vanishes at its tag.
Rat loc_prec_floor(const LocElem& a);

// Residue map onto F_q(s) for v(a) >= 0 (InvalidInput below), and the
// coefficientwise integer-representative lift. The RatFun may be built over
// any Fq with the same (p, f); packed values transfer unchanged.
RatFun loc_residue(const LocElem& a);
LocElem loc_lift(const ConstFieldPtr& k, const RatFun& abar);

std::string loc_str(const LocElem& a);  // diagnostic rendering

// --------------------------------------------------------------- reduction

// The two reduced shapes of a fierce Kummer generator: a unit whose residue
// is not a p-th power, or 1 + pi_{pt} w with 0 < t < 1/(p-1) and the
// residue of w not a p-th power.
struct ReducedUnit {
    enum class Kind { CaseA, CaseB };
    Kind kind;
    LocElem u;  // CaseA payload
    Rat t;      // CaseB exponent, u = 1 + pi_{pt} w
    LocElem w;  // CaseB payload

    static ReducedUnit case_a(LocElem unit);
    static ReducedUnit case_b(Rat t, LocElem w);
    LocElem value() const;  // the reduced unit itself
};

struct KummerResult {
    ReducedUnit reduced;
    LocElem multiplier;  // u * multiplier^p = reduced value (at precision)
};

// Strips p-th powers from u until a reduced shape remains. Errors:
// TrivialCharacter when u is a p-th power at working precision (its cyclic
// extension collapses), RequiresConstantExtension when the reduction needs
// a finer lattice (suggested e' = p e') or a larger residue field
// (suggested f' = p f), PrecisionExhausted when the loop outruns the tags,
// InvalidInput when the boundary classification shows a separable
// (non-fierce) residue datum.
KummerResult kummer_reduce(const LocElem& u);

// ---------------------------------------------------------- canonical form

// a = sum_i a_i pi_{t_i} with v(a_i) = 0 and the exponents pairwise
// inequivalent mod the base lattice; grouping happens on the pi-digit
// classes of the coefficients, so it is exact.
struct CanonicalForm {
    std::vector<Rat> exponents;   // strictly increasing
    std::vector<LocElem> parts;   // unit parts, aligned with exponents
};

// base must divide the element's lattice; den must be base-pure (its
// coefficients supported on base-lattice pi-powers), which every pipeline
// construction preserves.
CanonicalForm canonical_form(const LocElem& a, const ValGroup& base);

// All canonical exponents lie in Lambda_epsilon. Requires v(a) >= 0.
bool is_moderate(const LocElem& a, const EpsilonContext& ctx);

}  // namespace swanlab
