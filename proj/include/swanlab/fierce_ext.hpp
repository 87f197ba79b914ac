#pragma once

#include <memory>
#include <vector>

#include "swanlab/local_field.hpp"

namespace swanlab {

// The degree-p fierce Kummer extension M = K(v), v^p = u for a reduced unit
// u. The working generator x is v itself (CaseA) or z = (v - 1)/pi_t
// (CaseB); in both cases O_M = O_K[x] and the residue field is
// M-bar = K-bar(x-bar), purely inseparable of degree p, modeled as F_q(sigma)
// with sigma^p = s. The value group does not move.
struct FierceExt {
    ConstFieldPtr k;
    ReducedUnit u;
    std::vector<LocElem> rel;  // x^p = rel[0] + rel[1] x + ... + rel[p-1] x^{p-1}
    RatFun xbar_p;             // x-bar^p in K-bar (= u-bar or w-bar), over s
    RatFun xbar;               // x-bar written in F_q(sigma)
    // base-change between the K-bar-bases {x-bar^i} and {sigma^j} of M-bar:
    // x-bar^i = sum_j sig_of_x[i][j] sigma^j, sigma^j = sum_i x_of_sig[j][i] x-bar^i
    std::vector<std::vector<RatFun>> sig_of_x, x_of_sig;

    FierceExt(ConstFieldPtr field, ReducedUnit datum)
        : k(std::move(field)), u(std::move(datum)), xbar_p(k->residue_field()),
          xbar(k->residue_field()) {}
};

using FierceExtPtr = std::shared_ptr<const FierceExt>;

// Builds the extension and certifies the integral relation for x: CaseA
// x^p = u; CaseB from (1 + pi_t z)^p = 1 + pi_{pt} w, whose middle
// coefficients C(p,i) pi_t^{i-p} all have valuation 1 - (p-i)t > 0.
FierceExtPtr make_extension(const ReducedUnit& u);

// Element of M in the basis 1, x, ..., x^{p-1} over K.
struct ExtElem {
    FierceExtPtr M;
    std::vector<LocElem> c;  // length p
};

ExtElem ext_zero(const FierceExtPtr& M);
ExtElem ext_one(const FierceExtPtr& M);
ExtElem ext_from_base(const FierceExtPtr& M, const LocElem& a);
ExtElem ext_x(const FierceExtPtr& M);
ExtElem ext_make(const FierceExtPtr& M, std::vector<LocElem> coeffs);

ExtElem ext_add(const ExtElem& a, const ExtElem& b);
ExtElem ext_sub(const ExtElem& a, const ExtElem& b);
ExtElem ext_neg(const ExtElem& a);
ExtElem ext_mul(const ExtElem& a, const ExtElem& b);
ExtElem ext_inv(const ExtElem& a);  // conjugate-product route, one base inverse
ExtElem ext_div(const ExtElem& a, const ExtElem& b);
ExtElem ext_pow(const ExtElem& a, long long e);

bool ext_is_zero_at_prec(const ExtElem& a);
bool ext_eq(const ExtElem& a, const ExtElem& b);

// Valuation on M (same value group as K): min over coefficient valuations,
// exact because 1, x, ..., x^{p-1} is an O_K-basis of O_M.
std::optional<Rat> ext_val(const ExtElem& a);
Rat ext_valuation(const ExtElem& a);  // throws PrecisionExhausted
Rat ext_prec_floor(const ExtElem& a);

// Residue in M-bar = F_q(sigma) and the lift back through the x-bar-basis
// decomposition. Residue needs v(a) >= 0 (InvalidInput below).
RatFun ext_residue(const ExtElem& a);
ExtElem ext_lift(const FierceExtPtr& M, const RatFun& mbar);

// Writes an element of F_q(sigma) on the basis 1, sigma, ..., sigma^{p-1}
// over the image of K-bar: m = sum_j beta_j(sigma^p) sigma^j. Component j
// is returned as the K-bar function beta_j(s).
std::vector<RatFun> sigma_split(const RatFun& m);

// The Galois action sigma^j determined by v -> zeta_p^j v; CaseB re-expresses
// z -> zeta^j z + (zeta^j - 1)/pi_t in the z-basis. Base elements are fixed.
ExtElem galois_apply(long long j, const ExtElem& a);

// Product (resp. sum) of all p conjugates; the x-components must vanish at
// working precision (PrecisionExhausted otherwise) and the base component
// is returned.
LocElem ext_norm(const ExtElem& a);
LocElem ext_trace(const ExtElem& a);

// i_G(sigma^j) = v(sigma^j(x) - x), computed at the monogenic generator,
// which realizes the minimum over O_M. j != 0 mod p.
Rat displacement(const FierceExtPtr& M, long long j);

// ------------------------------------------------- reduction over M

struct ExtReducedUnit {
    enum class Kind { CaseA, CaseB };
    Kind kind;
    ExtElem u;  // CaseA payload
    // CaseB exponent, value = 1 + pi_{pt} w. Restrictions of base-field
    // classes routinely land at t in (1/p) Lambda \ Lambda; that is fine
    // because only pt is realized as a uniformizer power over M.
    Rat t;
    ExtElem w;  // CaseB payload

    static ExtReducedUnit case_a(ExtElem unit);
    static ExtReducedUnit case_b(Rat t, ExtElem w);
    ExtElem value() const;
};

struct ExtKummerResult {
    ExtReducedUnit reduced;
    ExtElem multiplier;  // u * multiplier^p = reduced value (at precision)
};

// Same contract as kummer_reduce, executed over M: residues live in
// F_q(sigma) and the boundary classification uses the Artin-Schreier
// solver there. Lattice gaps that need an actual element (stripping a
// p-th power residue) raise RequiresConstantExtension for the ambient
// constants (the value group of M equals that of K); the terminal CaseB
// exponent alone is allowed to be fractional, see ExtReducedUnit.
ExtKummerResult reduce_over_extension(const ExtElem& u);

// ------------------------------------------------- epsilon-lifting

// Certificate a = b^p + pi_epsilon c over M for a lift a of abar: since
// M-bar^p = K-bar, b lifts abar^{1/p} and a is the base component of b^p;
// the x-components of b^p sit at valuation >= epsilon exactly when epsilon
// respects the tower's lifting level, so no iteration is needed.
struct EpsilonLift {
    LocElem a;  // the lift of abar
    ExtElem b;
    ExtElem c;  // a - b^p = pi_epsilon * c, c integral
};

EpsilonLift epsilon_lift(const RatFun& abar, const FierceExtPtr& M,
                         const EpsilonContext& ctx);

}  // namespace swanlab
