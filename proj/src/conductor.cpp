#include "swanlab/conductor.hpp"

#include <iostream>
#include <optional>
#include <string>

#include "swanlab/herbrand.hpp"

namespace swanlab {

namespace {

// The canonical p-th root of the reduced value inside M: y^p equals the
// value on the nose and sigma(y)/y = zeta_p exactly, both cases.
ExtElem y_elem(const FierceExtPtr& M) {
    if (M->u.kind == ReducedUnit::Kind::CaseA) return ext_x(M);
    LocElem pit = loc_pi(M->k, M->u.t);
    return ext_add(ext_one(M),
                   ext_mul(ext_from_base(M, pit), ext_x(M)));
}

// A lattice gap at exponent t is repairable by a constant extension exactly
// when the missing part of the denominator is a p-power.
long long suggest_eprime(const ConstFieldPtr& k, const Rat& t) {
    BigInt den = rat_den(t);
    BigInt g = gcd(den, BigInt(k->eprime));
    BigInt rest = den / g;
    BigInt r = rest;
    while (r % k->p == 0) r /= k->p;
    if (r != 1)
        throw InvalidInput("exponent " + rat_str(t) +
                           " lies outside every constant-extension lattice");
    return (BigInt(k->eprime) * rest).convert_to<long long>();
}

LocElem pi_shift_unit(const ConstFieldPtr& k, const Rat& mu,
                      const RatFun& abar) {
    // 1 + pi_mu * lift(abar); the caller guarantees mu in the lattice.
    return loc_add(loc_one(k), loc_mul(loc_pi(k, mu), loc_lift(k, abar)));
}

}  // namespace

CharP make_char_p(const LocElem& u) {
    KummerResult red = kummer_reduce(u);
    return CharP{u.k, u, std::move(red)};
}

CharP char_p_twist(const CharP& chi, long long a) {
    const long long p = chi.k->p;
    long long r = ((a % p) + p) % p;
    if (r == 0) throw InvalidInput("twist exponent divisible by p");
    return make_char_p(loc_pow(chi.u, r));
}

CharTower make_tower(const FierceExtPtr& M, const LocElem& z) {
    if (M->k->n < 2)
        throw InvalidContext(
            "order-p^2 towers need zeta_{p^2}: rebuild the constants with "
            "root depth n >= 2");
    if (!loc_val(z))
        throw InvalidInput("tower twist vanishes at working precision");
    return CharTower{M, z};
}

CharTower make_tower_from_class(const LocElem& u_top) {
    KummerResult red = kummer_reduce(u_top);
    FierceExtPtr M = make_extension(red.reduced);
    return make_tower(M, loc_inv(red.multiplier));
}

RamPair swan_p(const CharP& chi) {
    const ReducedUnit& r = chi.red.reduced;
    const long long p = chi.k->p;
    if (r.kind == ReducedUnit::Kind::CaseA)
        return {rat(p, p - 1), dlog(loc_residue(r.u))};
    return {rat(p, p - 1) - r.t * p, dform(loc_residue(r.w))};
}

RamPair swan_p_norm_oracle(const CharP& chi) {
    FierceExtPtr M = make_extension(chi.red.reduced);
    ExtElem x = ext_x(M);
    ExtElem a = ext_sub(ext_div(galois_apply(1, x), x), ext_one(M));
    LocElem b = ext_norm(a);
    LocElem y = ext_norm(x);
    Rat delta = gauss_valuation(b);
    RatFun unit = loc_residue(loc_mul(loc_pi(chi.k, delta), loc_inv(b)));
    return {delta, unit * dlog(loc_residue(y))};
}

RamDatum swan_tower(const CharTower& chi) {
    const FierceExtPtr& M = chi.M;
    const ConstFieldPtr& k = M->k;
    const long long p = k->p;
    const Rat cap = rat(p, p - 1);
    const Rat split = rat(1, p - 1);

    CharP chibar{k, M->u.value(), KummerResult{M->u, loc_one(k)}};
    RamPair base = swan_p(chibar);

    // Restriction chi|_M as a Kummer class over M, reduced there.
    ExtElem yz = ext_mul(y_elem(M), ext_from_base(M, chi.z));
    ExtKummerResult rest = reduce_over_extension(yz);

    Rat delta_tilde;
    DiffForm omega_tilde = DiffForm::zero(k->residue_field());
    if (rest.reduced.kind == ExtReducedUnit::Kind::CaseA) {
        delta_tilde = cap;
        omega_tilde = dlog(ext_residue(rest.reduced.u));
    } else {
        delta_tilde = cap - rest.reduced.t * p;
        omega_tilde = dform(ext_residue(rest.reduced.w));
    }

    const Rat eps = epsilon_of_breaks(BreakSequence(p, {base.delta}));
    const Rat delta = delta_tilde + eps;

    // The top form solves tr(c-bar * omega-tilde) = Tbar(c-bar) * omega
    // across the basis powers c = x^i: the left side is the 0th
    // sigma-component of x-bar^i times the coefficient of omega-tilde, the
    // reduced trace is res(Tr(x^i) / pi_epsilon). Indices with vanishing
    // reduced trace must have vanishing left side; the others must agree.
    std::optional<DiffForm> omega;
    ExtElem xi = ext_one(M);
    for (long long i = 0; i < p; ++i) {
        if (i) xi = ext_mul(xi, ext_x(M));
        LocElem shifted = loc_mul(ext_trace(xi), loc_pi(k, -eps));
        if (!loc_val_at_least(shifted, 0))
            throw InternalInconsistency(
                "trace ideal violated at basis power " + std::to_string(i));
        RatFun ci = loc_residue(shifted);
        RatFun lhs = sigma_split(pow(M->xbar, i) * omega_tilde.a)[0];
        if (ci.is_zero()) {
            if (!lhs.is_zero())
                throw InternalInconsistency(
                    "trace pairing: left side survives a vanishing reduced "
                    "trace at basis power " + std::to_string(i));
            continue;
        }
        DiffForm cand(lhs / ci);
        if (omega && !(*omega == cand))
            throw InternalInconsistency("trace pairing candidates disagree");
        omega = cand;
    }
    if (!omega)
        throw InternalInconsistency("trace pairing produced no candidate");

    // Order-raising laws against the quotient pair; any violation means the
    // descent above returned garbage, so stop hard.
    auto fail = [&](const std::string& what) {
        throw InternalInconsistency(
            "tower datum breaks the order-raising laws (" + what +
            "; quotient break " + rat_str(base.delta) + ", top break " +
            rat_str(delta) + ")");
    };
    if (omega->is_zero()) fail("vanishing top form");
    if (!(delta > base.delta)) fail("top break does not rise");
    if (base.delta > split) {
        if (delta != base.delta + 1) fail("expected the +1 break");
        if (!(*omega == -base.omega)) fail("expected the negated form");
    } else {
        const Rat floor = base.delta * p;
        if (delta < floor || delta > cap) fail("top break outside the window");
        DiffForm c = cartier(*omega);
        if (delta == floor && delta < cap) {
            if (!(c == base.omega)) fail("Cartier image at the floor");
        } else if (delta > floor && delta < cap) {
            if (!c.is_zero()) fail("Cartier image between floor and cap");
        } else if (delta > floor) {
            if (!(c == *omega)) fail("Cartier fixed point at the cap");
        } else {
            if (!(c == *omega + base.omega))
                fail("Cartier image at the floor-cap corner");
        }
    }
    return RamDatum{p, {base, RamPair{delta, *omega}}};
}

CombineResult combine(const RamPair& a, const RamPair& b) {
    if (a.delta != b.delta) return a.delta > b.delta ? a : b;
    DiffForm sum = a.omega + b.omega;
    if (sum.is_zero()) return Cancellation{a.delta};
    return RamPair{a.delta, sum};
}

RamDatum ramification_datum(const CharP& chi) {
    RamDatum d{chi.k->p, {swan_p(chi)}};
    if (!validate_datum(d).pass)
        throw InternalInconsistency(
            "order-p pair violates the shape classification");
    return d;
}

RamDatum ramification_datum(const CharTower& chi) {
    RamDatum d = swan_tower(chi);
    if (!validate_datum(d).pass)
        throw InternalInconsistency(
            "tower datum violates the shape classification");
    return d;
}

CharTower minimize_swan(const CharP& chibar, int budget) {
    const ConstFieldPtr& k = chibar.k;
    const long long p = k->p;
    const Rat cap = rat(p, p - 1);
    const Rat split = rat(1, p - 1);
    RamPair base = swan_p(chibar);
    if (!(base.delta < split))
        throw InvalidInput(
            "minimal lifts need the quotient break below 1/(p-1)");
    const Rat floor = base.delta * p;

    FierceExtPtr M = make_extension(chibar.red.reduced);
    EpsilonContext ctx =
        make_epsilon_context(BreakSequence(p, {base.delta}), k->lattice());

    LocElem z = loc_one(k);
    std::vector<Rat> seen;
    for (int round = 0; round < budget; ++round) {
        CharTower chi = make_tower(M, z);
        RamDatum d = swan_tower(chi);
        const Rat di = d.pairs[1].delta;
        if (di == floor) return chi;
        if (di < floor ||
            (!seen.empty() && di >= seen.back()))
            throw InternalInconsistency("swan descent stalled at " +
                                        rat_str(di));
        seen.push_back(di);
        const DiffForm& wi = d.pairs[1].omega;

        // Cancel the top pair with a twist of swan data (di, -wi).
        LocElem zi = loc_one(k);
        if (di == cap) {
            auto abar = solve_dlog(wi);
            if (!abar)
                throw SolverBoundExceeded(
                    "logarithmic preimage of the descent form needs an "
                    "irreducible factor beyond the solver bound");
            zi = loc_inv(epsilon_lift(*abar, M, ctx).a);
        } else {
            RatFun abar = solve_exact(wi);
            Rat mu = cap - di;
            if (!k->lattice().contains(mu))
                throw RequiresConstantExtension(
                    "descent step needs pi_" + rat_str(mu) +
                        " outside the value lattice",
                    suggest_eprime(k, mu));
            LocElem a = epsilon_lift(abar, M, ctx).a;
            zi = loc_sub(loc_one(k), loc_mul(loc_pi(k, mu), a));
        }
        if (!is_moderate(zi, ctx))
            std::cerr << "minimize_swan: round " << round
                      << " multiplier leaves the moderate monoid\n";
        z = loc_mul(z, zi);
    }
    std::string trace;
    for (const Rat& t : seen)
        trace += (trace.empty() ? "" : " -> ") + rat_str(t);
    if (trace.empty()) trace = "(none)";
    throw IterationBudgetExceeded("swan descent budget exhausted; target " +
                                  rat_str(floor) + ", breaks seen: " + trace);
}

namespace {

CharP realize_order_p(const ConstFieldPtr& k, const RamPair& pr) {
    const long long p = k->p;
    const Rat cap = rat(p, p - 1);
    CharP chi = [&] {
        if (pr.delta == cap) {
            auto abar = solve_dlog(pr.omega);
            if (!abar)
                throw SolverBoundExceeded(
                    "logarithmic preimage of the form needs an irreducible "
                    "factor beyond the solver bound");
            return make_char_p(loc_lift(k, *abar));
        }
        Rat t = (cap - pr.delta) / p;
        if (!k->lattice().contains(t))
            throw RequiresConstantExtension(
                "break " + rat_str(pr.delta) + " needs pi_" + rat_str(t) +
                    " outside the value lattice",
                suggest_eprime(k, t));
        RatFun wbar = solve_exact(pr.omega);
        return make_char_p(pi_shift_unit(k, t * p, wbar));
    }();
    if (!(swan_p(chi) == pr))
        throw InternalInconsistency(
            "order-p realization recomputes to a different pair");
    return chi;
}

CharTower realize_tower(const ConstFieldPtr& k, const RamDatum& d) {
    const long long p = k->p;
    const Rat cap = rat(p, p - 1);
    const Rat split = rat(1, p - 1);
    const RamPair& first = d.pairs[0];
    const RamPair& second = d.pairs[1];
    if (k->n < 2)
        throw InvalidContext(
            "realizing two pairs needs zeta_{p^2}: rebuild the constants "
            "with root depth n >= 2");

    CharP chibar = realize_order_p(k, first);
    FierceExtPtr M = make_extension(chibar.red.reduced);
    LocElem z = loc_one(k);

    if (first.delta > split) {
        // The untwisted tower already carries the forced pair.
    } else if (first.delta == split) {
        RamDatum d0 = swan_tower(make_tower(M, z));
        DiffForm eta = second.omega - d0.pairs[1].omega;
        if (!eta.is_zero()) {
            // Both forms obey the corner law C(w) = w + omega_1, so eta is
            // logarithmic and the twist adds the pair (cap, eta).
            auto abar = solve_dlog(eta);
            if (!abar)
                throw SolverBoundExceeded(
                    "logarithmic preimage of the correction form needs an "
                    "irreducible factor beyond the solver bound");
            z = loc_mul(z, loc_lift(k, *abar));
            CombineResult pred = combine(d0.pairs[1], RamPair{cap, eta});
            if (!std::holds_alternative<RamPair>(pred) ||
                !(std::get<RamPair>(pred) == second))
                throw InternalInconsistency(
                    "corner correction predicts the wrong pair");
        }
    } else {
        const Rat floor = first.delta * p;
        CharTower chim = minimize_swan(chibar);
        z = chim.z;
        RamDatum dm = swan_tower(chim);
        if (second.delta == floor) {
            DiffForm eta = second.omega - dm.pairs[1].omega;
            if (!eta.is_zero()) {
                // Both forms have Cartier image omega_1, so eta is exact.
                RatFun abar = solve_exact(eta);
                Rat mu = cap - floor;
                if (!k->lattice().contains(mu))
                    throw RequiresConstantExtension(
                        "floor correction needs pi_" + rat_str(mu) +
                            " outside the value lattice",
                        suggest_eprime(k, mu));
                z = loc_mul(z, pi_shift_unit(k, mu, abar));
                CombineResult pred =
                    combine(dm.pairs[1], RamPair{floor, eta});
                if (!std::holds_alternative<RamPair>(pred) ||
                    !(std::get<RamPair>(pred) == second))
                    throw InternalInconsistency(
                        "floor correction predicts the wrong pair");
            }
        } else {
            // Twist by swan data (delta_2, omega_2); the minimized tower
            // sits strictly below, so the larger pair survives combine.
            if (second.delta == cap) {
                auto abar = solve_dlog(second.omega);
                if (!abar)
                    throw SolverBoundExceeded(
                        "logarithmic preimage of the form needs an "
                        "irreducible factor beyond the solver bound");
                z = loc_mul(z, loc_lift(k, *abar));
            } else {
                RatFun abar = solve_exact(second.omega);
                Rat mu = cap - second.delta;
                if (!k->lattice().contains(mu))
                    throw RequiresConstantExtension(
                        "break " + rat_str(second.delta) + " needs pi_" +
                            rat_str(mu) + " outside the value lattice",
                        suggest_eprime(k, mu));
                z = loc_mul(z, pi_shift_unit(k, mu, abar));
            }
            CombineResult pred = combine(dm.pairs[1], second);
            if (!std::holds_alternative<RamPair>(pred) ||
                !(std::get<RamPair>(pred) == second))
                throw InternalInconsistency(
                    "direct twist predicts the wrong pair");
        }
    }

    CharTower chi = make_tower(M, z);
    if (!(swan_tower(chi) == d))
        throw InternalInconsistency(
            "tower realization recomputes to a different datum");
    return chi;
}

}  // namespace

Character construct_from_datum(const ConstFieldPtr& k, const RamDatum& d) {
    ValidationReport rep = validate_datum(d);
    if (!rep.pass) {
        std::string msg = "datum fails validation:";
        for (const auto& c : rep.conditions)
            if (!c.pass) msg += " " + c.clause;
        throw InvalidInput(msg);
    }
    if (d.p != k->p)
        throw InvalidInput("datum characteristic differs from the constants");
    const FqPtr& F = d.pairs[0].omega.a.field();
    if (F->q() != k->residue_field()->q())
        throw InvalidInput("datum forms live over the wrong residue field");
    if (d.pairs.size() == 1) return realize_order_p(k, d.pairs[0]);
    if (d.pairs.size() == 2) return realize_tower(k, d);
    throw InvalidInput("realization handles one or two pairs");
}

}  // namespace swanlab
