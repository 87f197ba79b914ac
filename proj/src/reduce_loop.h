#pragma once

#include <optional>

#include "swanlab/errors.hpp"
#include "swanlab/rat.hpp"
#include "swanlab/ratfun.hpp"

namespace swanlab {
namespace detail {

// Kummer-style reduction of a unit toward its reduced multiplicative shape,
// generic over the coefficient ring: the same loop runs over the base field
// and over a fierce degree-p extension. The ops bundle supplies ring
// arithmetic, the shared value lattice (1/eprime)Z, lifts, and residues;
// residues land in a rational function field over F_q in both cases, where
// p-th power membership and the Artin-Schreier solver do the classifying.
template <class Ops>
struct ReduceOutcome {
    bool case_a;
    typename Ops::Elem payload;  // CaseA reduced unit, or CaseB cofactor
    Rat t;                       // CaseB exponent: value = 1 + pi_{pt} w
    typename Ops::Elem multiplier;
};

inline long long lattice_units_in(const Rat& t, long long eprime) {
    Rat u = t * eprime;
    if (!is_integer(u))
        throw InternalInconsistency("valuation escaped the value lattice");
    return (long long)rat_num(u).convert_to<long long>();
}

template <class Ops>
ReduceOutcome<Ops> reduce_unit_loop(const Ops& ops,
                                    const typename Ops::Elem& u0) {
    using E = typename Ops::Elem;
    const long long p = ops.p;
    const long long ep = ops.eprime;
    const Rat bound = rat(p, p - 1);

    E cur = u0;
    E mult = ops.one();

    // Valuation normalization: only p-th powers of pi can move it.
    auto v0 = ops.val(cur);
    if (!v0)
        throw PrecisionExhausted("unit vanishes at working precision");
    long long k0 = lattice_units_in(*v0, ep);
    if (k0 % p != 0)
        throw RequiresConstantExtension(
            "valuation class of the unit needs a p-th root of pi", p * ep, 0);
    if (k0 != 0) {
        mult = ops.mul(mult, ops.pi(rat(-k0 / p, ep)));
        cur = ops.mul(cur, ops.pi(rat(-k0, ep)));
    }

    const E one = ops.one();

    // Unit part: strip the p-th power content of the residue.
    RatFun ubar = ops.residue(cur);
    if (auto root = is_pth_power(ubar)) {
        E yi = ops.inv(ops.lift(*root));
        mult = ops.mul(mult, yi);
        cur = ops.mul(cur, ops.pow(yi, p));
    } else {
        // CaseA is already certain; clean visible p-th power content out of
        // the principal cofactor w = cur / lift(ubar), stopping at the first
        // obstruction (the shape tolerates any principal leftover, so an
        // uncertifiable tail, precision exhaustion, or running into the
        // degree bound just ends the cleanup).  Each step commits cur, w
        // and mult together so u * mult^p = cur survives a mid-step abort.
        E w = ops.mul(cur, ops.inv(ops.lift(ubar)));
        for (int iter = 0; iter < 4 * (int)ep + 64; ++iter) {
            try {
                E d = ops.sub(w, one);
                if (ops.is_zero(d)) break;
                Rat T = ops.valuation(d);
                if (T >= bound) {
                    if (T > bound) break;
                    RatFun abar = ops.residue(ops.mul(d, ops.pi(-T)));
                    auto z = artin_schreier_solve(-abar);
                    if (!z) break;
                    E v = ops.add(one,
                                  ops.mul(ops.lambda_elem(), ops.lift(*z)));
                    E vp = ops.pow(v, p);
                    E nc = ops.mul(cur, vp);
                    E nw = ops.mul(w, vp);
                    E nm = ops.mul(mult, v);
                    cur = std::move(nc);
                    w = std::move(nw);
                    mult = std::move(nm);
                    continue;
                }
                long long Te = lattice_units_in(T, ep);
                auto root2 =
                    is_pth_power(ops.residue(ops.mul(d, ops.pi(-T))));
                if (!root2 || Te % p != 0) break;
                E vi = ops.inv(ops.add(
                    one, ops.mul(ops.pi(rat(Te / p, ep)), ops.lift(*root2))));
                E vip = ops.pow(vi, p);
                E nc = ops.mul(cur, vip);
                E nw = ops.mul(w, vip);
                E nm = ops.mul(mult, vi);
                cur = std::move(nc);
                w = std::move(nw);
                mult = std::move(nm);
            } catch (const PrecisionExhausted&) {
                break;
            } catch (const SolverBoundExceeded&) {
                break;
            }
        }
        return {true, std::move(cur), rat(0), std::move(mult)};
    }

    // Principal unit loop: v(cur - 1) strictly increases until a reduced
    // shape, triviality, or an honest obstruction appears.
    Rat last_T = rat(-1);
    for (int iter = 0; iter < 4 * (int)ep + 64; ++iter) {
        E d = ops.sub(cur, one);
        if (ops.is_zero(d)) {
            if (ops.exact_zero(d) || ops.prec_floor(d) > bound)
                throw TrivialCharacter(
                    "unit is a p-th power at working precision");
            throw PrecisionExhausted(
                "principal part sank below the precision tags");
        }
        Rat T = ops.valuation(d);
        if (T > bound)
            throw TrivialCharacter("principal unit deeper than p/(p-1)");
        if (!(T > last_T))
            throw InternalInconsistency("kummer reduction failed to progress");
        last_T = T;
        E a = ops.mul(d, ops.pi(-T));
        RatFun abar = ops.residue(a);

        if (T == bound) {
            // lambda-regime: (1 + lambda z)^p = 1 - p lambda (z^p - z) + ...
            // and pi_{p/(p-1)} = -p lambda (1 + small), so the perturbation
            // absorbs exactly when -abar is an Artin-Schreier image.
            RatFun target = -abar;
            if (auto z = artin_schreier_solve(target)) {
                E v = ops.add(one, ops.mul(ops.lambda_elem(), ops.lift(*z)));
                cur = ops.mul(cur, ops.pow(v, p));
                mult = ops.mul(mult, v);
                continue;
            }
            for (Fq::Elem c = 1; c < (Fq::Elem)ops.F->q(); ++c) {
                if (artin_schreier_solve(target - RatFun::constant(ops.F, c)))
                    throw RequiresConstantExtension(
                        "boundary obstruction is a constant trace class; a "
                        "larger residue field absorbs it",
                        0, p * ops.f);
            }
            throw InvalidInput(
                "boundary unit carries a separable Artin-Schreier residue; "
                "the class is not fierce");
        }

        long long Te = lattice_units_in(T, ep);
        auto root = is_pth_power(abar);
        if (!root) {
            // Terminal shape 1 + pi_{pt} w. Only pt must be a lattice point;
            // rings that never build a further extension on top of the
            // outcome (fractional_t) accept t itself in (1/p) Lambda.
            if (Te % p != 0 && !Ops::fractional_t)
                throw RequiresConstantExtension(
                    "reduced exponent t = v(u-1)/p is outside the lattice",
                    p * ep, 0);
            return {false, std::move(a), rat(Te, p * ep), std::move(mult)};
        }
        if (Te % p != 0)
            throw RequiresConstantExtension(
                "absorbing a p-th power residue needs pi^(v/p) in the field",
                p * ep, 0);
        E v = ops.add(one, ops.mul(ops.pi(rat(Te / p, ep)), ops.lift(*root)));
        E vi = ops.inv(v);
        cur = ops.mul(cur, ops.pow(vi, p));
        mult = ops.mul(mult, vi);
    }
    throw IterationBudgetExceeded("kummer reduction exceeded its step budget");
}

}  // namespace detail
}  // namespace swanlab
