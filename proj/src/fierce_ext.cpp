#include "swanlab/fierce_ext.hpp"

#include <algorithm>
#include <utility>

#include "reduce_loop.h"
#include "swanlab/errors.hpp"

namespace swanlab {

namespace {

// Coefficientwise Frobenius: g with the same exponents and p-th powered
// coefficients, i.e. the unique g with g(X^p) = (input)(X)^p.
FqPoly coeff_frob(const FqPoly& a) {
    std::vector<Fq::Elem> c(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) c[i] = a.F->frob(a.c[i]);
    return FqPoly(a.F, std::move(c));
}

RatFun coeff_frob(const RatFun& a) {
    return RatFun(coeff_frob(a.num), coeff_frob(a.den));
}

// Coefficientwise inverse Frobenius, keeping exponents: the unique g with
// g(sigma)^p = (input)(sigma^p). Exists because F_q is perfect.
FqPoly semi_root(const FqPoly& a) {
    std::vector<Fq::Elem> c(a.c.size());
    for (size_t i = 0; i < a.c.size(); ++i) c[i] = a.F->pth_root(a.c[i]);
    return FqPoly(a.F, std::move(c));
}

// Gauss-Jordan inverse of a small matrix over F_q(s); exact arithmetic, so
// any nonzero pivot works.
std::vector<std::vector<RatFun>> invert_matrix(
    std::vector<std::vector<RatFun>> A, const FqPtr& F) {
    size_t n = A.size();
    std::vector<std::vector<RatFun>> inv(n, std::vector<RatFun>(n, RatFun(F)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = RatFun::constant(F, 1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n)
            throw InternalInconsistency(
                "generator powers are linearly dependent over the residue "
                "field");
        std::swap(A[piv], A[col]);
        std::swap(inv[piv], inv[col]);
        RatFun d = inverse(A[col][col]);
        for (size_t j = 0; j < n; ++j) {
            A[col][j] = A[col][j] * d;
            inv[col][j] = inv[col][j] * d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            RatFun fac = A[r][col];
            for (size_t j = 0; j < n; ++j) {
                A[r][j] = A[r][j] - fac * A[col][j];
                inv[r][j] = inv[r][j] - fac * inv[col][j];
            }
        }
    }
    return inv;
}

long long binom(long long n, long long k) {
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_same_ext(const ExtElem& a, const ExtElem& b) {
    if (a.M != b.M)
        throw InvalidInput("operands live over different extensions");
}

ExtElem ext_scale(const ExtElem& a, const LocElem& s) {
    ExtElem r = a;
    for (auto& comp : r.c) comp = loc_mul(comp, s);
    return r;
}

}  // namespace

std::vector<RatFun> sigma_split(const RatFun& m) {
    // The p-basis decomposition m = sum_j b_j^p sigma^j gives
    // beta_j = coeff_frob(b_j), since b_j(sigma)^p = coeff_frob(b_j)(sigma^p).
    std::vector<RatFun> parts = pth_power_decompose(m);
    for (auto& b : parts) b = coeff_frob(b);
    return parts;
}

FierceExtPtr make_extension(const ReducedUnit& u) {
    const ConstFieldPtr& k =
        u.kind == ReducedUnit::Kind::CaseA ? u.u.k : u.w.k;
    const long long p = k->p;
    auto M = std::make_shared<FierceExt>(k, u);

    if (u.kind == ReducedUnit::Kind::CaseA) {
        // x = u^{1/p}: the relation is x^p = u on the nose.
        M->rel.assign((size_t)p, loc_zero(k));
        M->rel[0] = u.u;
        M->xbar_p = loc_residue(u.u);
    } else {
        // x = z = (v - 1)/pi_t for v^p = 1 + pi_{pt} w. Expanding
        // (1 + pi_t z)^p with pi_t^p = pi_{pt} exact gives
        // z^p = w - sum_i C(p,i) pi_{(i-p)t} z^i, each coefficient of exact
        // valuation 1 - (p-i)t > 0 because t < 1/(p-1).
        M->rel.assign((size_t)p, loc_zero(k));
        M->rel[0] = u.w;
        for (long long i = 1; i < p; ++i) {
            LocElem coeff = loc_mul(loc_from_int(k, -binom(p, i)),
                                    loc_pi(k, u.t * (i - p)));
            Rat want = rat(1) - u.t * (p - i);
            if (!(want > 0) || gauss_valuation(coeff) != want)
                throw PrecisionExhausted(
                    "integral relation coefficient failed its valuation "
                    "certificate");
            M->rel[(size_t)i] = std::move(coeff);
        }
        M->xbar_p = loc_residue(u.w);
    }

    // Residue model: M-bar = F_q(sigma), sigma^p = s, K-bar embedded by
    // s -> sigma^p; x-bar is the exact p-th root of xbar_p there.
    M->xbar = RatFun(semi_root(M->xbar_p.num), semi_root(M->xbar_p.den));

    M->sig_of_x.resize((size_t)p);
    RatFun xp = RatFun::constant(k->residue_field(), 1);
    for (long long i = 0; i < p; ++i) {
        M->sig_of_x[(size_t)i] = sigma_split(xp);
        if (i + 1 < p) xp = xp * M->xbar;
    }
    std::vector<std::vector<RatFun>> V(
        (size_t)p, std::vector<RatFun>((size_t)p, RatFun(k->residue_field())));
    for (long long i = 0; i < p; ++i)
        for (long long j = 0; j < p; ++j)
            V[(size_t)j][(size_t)i] = M->sig_of_x[(size_t)i][(size_t)j];
    auto Vinv = invert_matrix(std::move(V), k->residue_field());
    M->x_of_sig.assign((size_t)p,
                       std::vector<RatFun>((size_t)p, RatFun(k->residue_field())));
    for (long long j = 0; j < p; ++j)
        for (long long i = 0; i < p; ++i)
            M->x_of_sig[(size_t)j][(size_t)i] = Vinv[(size_t)i][(size_t)j];
    return M;
}

// ----------------------------------------------------------- element basics

ExtElem ext_zero(const FierceExtPtr& M) {
    return ExtElem{M, std::vector<LocElem>((size_t)M->k->p, loc_zero(M->k))};
}

ExtElem ext_one(const FierceExtPtr& M) {
    ExtElem r = ext_zero(M);
    r.c[0] = loc_one(M->k);
    return r;
}

ExtElem ext_from_base(const FierceExtPtr& M, const LocElem& a) {
    if (a.k != M->k)
        throw InvalidInput("element lives over different constants");
    ExtElem r = ext_zero(M);
    r.c[0] = a;
    return r;
}

ExtElem ext_x(const FierceExtPtr& M) {
    ExtElem r = ext_zero(M);
    r.c[1] = loc_one(M->k);
    return r;
}

ExtElem ext_make(const FierceExtPtr& M, std::vector<LocElem> coeffs) {
    if ((long long)coeffs.size() != M->k->p)
        throw InvalidInput("coefficient vector has the wrong length");
    for (const auto& c : coeffs)
        if (c.k != M->k)
            throw InvalidInput("coefficient lives over different constants");
    return ExtElem{M, std::move(coeffs)};
}

ExtElem ext_add(const ExtElem& a, const ExtElem& b) {
    check_same_ext(a, b);
    ExtElem r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = loc_add(r.c[i], b.c[i]);
    return r;
}

ExtElem ext_neg(const ExtElem& a) {
    ExtElem r = a;
    for (auto& c : r.c) c = loc_neg(c);
    return r;
}

ExtElem ext_sub(const ExtElem& a, const ExtElem& b) {
    return ext_add(a, ext_neg(b));
}

ExtElem ext_mul(const ExtElem& a, const ExtElem& b) {
    check_same_ext(a, b);
    const FierceExtPtr& M = a.M;
    const ConstFieldPtr& k = M->k;
    size_t p = a.c.size();
    std::vector<LocElem> t(2 * p - 1, loc_zero(k));
    for (size_t i = 0; i < p; ++i)
        for (size_t j = 0; j < p; ++j)
            t[i + j] = loc_add(t[i + j], loc_mul(a.c[i], b.c[j]));
    // fold x^d = x^{d-p} (rel[0] + ... + rel[p-1] x^{p-1}) from the top
    for (size_t d = 2 * p - 2; d >= p; --d) {
        LocElem q = std::move(t[d]);
        t[d] = loc_zero(k);
        if (loc_is_zero_at_prec(q) && q.num.empty()) continue;
        for (size_t j = 0; j < p; ++j)
            t[d - p + j] = loc_add(t[d - p + j], loc_mul(q, M->rel[j]));
    }
    t.resize(p);
    return ExtElem{M, std::move(t)};
}

bool ext_is_zero_at_prec(const ExtElem& a) {
    for (const auto& c : a.c)
        if (!loc_is_zero_at_prec(c)) return false;
    return true;
}

bool ext_eq(const ExtElem& a, const ExtElem& b) {
    return ext_is_zero_at_prec(ext_sub(a, b));
}

// --------------------------------------------------------------- valuation

std::optional<Rat> ext_val(const ExtElem& a) {
    // 1, x, ..., x^{p-1} is an O_K-basis of O_M with [M-bar : K-bar] = p,
    // so v(a) is the minimum of the coefficient valuations (no cross-term
    // cancellation can beat it).
    std::optional<Rat> best;
    std::optional<Rat> floor_min;
    for (const auto& c : a.c) {
        auto v = loc_val(c);
        if (!v) {
            Rat fl = loc_prec_floor(c);
            if (!floor_min || fl < *floor_min) floor_min = fl;
        } else if (!best || *v < *best) {
            best = *v;
        }
    }
    if (!best) return std::nullopt;
    if (floor_min && *floor_min < *best)
        throw PrecisionExhausted(
            "a vanishing coefficient could undercut the valuation");
    return best;
}

Rat ext_valuation(const ExtElem& a) {
    auto v = ext_val(a);
    if (!v)
        throw PrecisionExhausted("element vanishes at working precision");
    return *v;
}

Rat ext_prec_floor(const ExtElem& a) {
    Rat fl = loc_prec_floor(a.c[0]);
    for (size_t i = 1; i < a.c.size(); ++i)
        fl = std::min(fl, loc_prec_floor(a.c[i]));
    return fl;
}

// ---------------------------------------------------------- residue model

RatFun ext_residue(const ExtElem& a) {
    const FierceExtPtr& M = a.M;
    RatFun acc(M->k->residue_field());
    RatFun xp = RatFun::constant(M->k->residue_field(), 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
        RatFun ri = loc_residue(a.c[i]);
        if (!ri.is_zero()) acc = acc + subst_power(ri, M->k->p) * xp;
        if (i + 1 < a.c.size()) xp = xp * M->xbar;
    }
    return acc;
}

ExtElem ext_lift(const FierceExtPtr& M, const RatFun& mbar) {
    FqPtr F = M->k->residue_field();
    if (mbar.field()->p() != F->p() || mbar.field()->f() != F->f())
        throw InvalidInput("residue datum lives over the wrong F_q");
    const long long p = M->k->p;
    std::vector<RatFun> beta = sigma_split(mbar);
    ExtElem r = ext_zero(M);
    for (long long i = 0; i < p; ++i) {
        RatFun gi(F);
        for (long long j = 0; j < p; ++j)
            gi = gi + beta[(size_t)j] * M->x_of_sig[(size_t)j][(size_t)i];
        if (!gi.is_zero()) r.c[(size_t)i] = loc_lift(M->k, gi);
    }
    return r;
}

// ------------------------------------------------------------ Galois action

ExtElem galois_apply(long long j, const ExtElem& a) {
    const FierceExtPtr& M = a.M;
    const ConstFieldPtr& k = M->k;
    const long long p = k->p;
    long long jm = ((j % p) + p) % p;
    if (jm == 0) return a;

    if (M->u.kind == ReducedUnit::Kind::CaseA) {
        // x = u^{1/p} -> zeta^j x: diagonal on the basis.
        ExtElem r = a;
        for (long long i = 1; i < p; ++i) {
            ConstElem zij = k->pow(k->zeta_p(), (i * jm) % p);
            r.c[(size_t)i] = loc_mul(r.c[(size_t)i], loc_const(zij));
        }
        return r;
    }
    // x = z = (v - 1)/pi_t and v -> zeta^j v, so
    // z -> zeta^j z + (zeta^j - 1)/pi_t (integral: v(zeta^j - 1) = 1/(p-1) > t).
    LocElem zj = loc_const(k->pow(k->zeta_p(), jm));
    LocElem shift = loc_mul(loc_sub(zj, loc_one(k)), loc_pi(k, -M->u.t));
    ExtElem img = ext_zero(M);
    img.c[0] = shift;
    img.c[1] = zj;
    ExtElem out = ext_from_base(M, a.c[0]);
    ExtElem power = ext_one(M);
    for (long long i = 1; i < p; ++i) {
        power = ext_mul(power, img);
        out = ext_add(out, ext_scale(power, a.c[(size_t)i]));
    }
    return out;
}

// ------------------------------------------------------- inverse/norm/trace

ExtElem ext_inv(const ExtElem& a) {
    // Product of the other conjugates over the norm: one base inversion,
    // everything else exact ring arithmetic.
    const FierceExtPtr& M = a.M;
    const long long p = M->k->p;
    ExtElem co = ext_one(M);
    for (long long j = 1; j < p; ++j) co = ext_mul(co, galois_apply(j, a));
    ExtElem nf = ext_mul(a, co);
    LocElem n = nf.c[0];
    return ext_scale(co, loc_inv(n));
}

ExtElem ext_div(const ExtElem& a, const ExtElem& b) {
    return ext_mul(a, ext_inv(b));
}

ExtElem ext_pow(const ExtElem& a, long long e) {
    if (e < 0) return ext_pow(ext_inv(a), -e);
    ExtElem acc = ext_one(a.M);
    ExtElem base = a;
    while (e > 0) {
        if (e & 1) acc = ext_mul(acc, base);
        base = e > 1 ? ext_mul(base, base) : base;
        e >>= 1;
    }
    return acc;
}

namespace {

LocElem descend_to_base(const ExtElem& a, const char* what) {
    for (size_t i = 1; i < a.c.size(); ++i)
        if (!loc_is_zero_at_prec(a.c[i]))
            throw PrecisionExhausted(what);
    return a.c[0];
}

}  // namespace

LocElem ext_norm(const ExtElem& a) {
    ExtElem prod = a;
    for (long long j = 1; j < a.M->k->p; ++j)
        prod = ext_mul(prod, galois_apply(j, a));
    return descend_to_base(
        prod, "norm did not land in the base field at working precision");
}

LocElem ext_trace(const ExtElem& a) {
    ExtElem sum = a;
    for (long long j = 1; j < a.M->k->p; ++j)
        sum = ext_add(sum, galois_apply(j, a));
    return descend_to_base(
        sum, "trace did not land in the base field at working precision");
}

Rat displacement(const FierceExtPtr& M, long long j) {
    if (j % M->k->p == 0)
        throw InvalidInput("displacement needs a nontrivial automorphism");
    ExtElem x = ext_x(M);
    return ext_valuation(ext_sub(galois_apply(j, x), x));
}

// ------------------------------------------------------- reduction over M

ExtReducedUnit ExtReducedUnit::case_a(ExtElem unit) {
    auto v = ext_val(unit);
    if (!v || *v != 0)
        throw InvalidInput("reduced unit must have valuation zero");
    if (is_pth_power(ext_residue(unit)))
        throw InvalidInput("reduced unit residue is a p-th power");
    FierceExtPtr M = unit.M;
    return ExtReducedUnit{Kind::CaseA, std::move(unit), rat(0), ext_zero(M)};
}

ExtReducedUnit ExtReducedUnit::case_b(Rat t, ExtElem w) {
    const FierceExtPtr& M = w.M;
    const ConstFieldPtr& k = M->k;
    if (!(t > 0) || !(t * (k->p - 1) < 1))
        throw InvalidInput("reduced exponent outside (0, 1/(p-1))");
    // Only pi_{pt} is ever formed over M, so t itself may be fractional.
    if (!k->lattice().contains(t * k->p))
        throw InvalidInput("exponent p t does not lie in the value lattice");
    auto v = ext_val(w);
    if (!v || *v != 0)
        throw InvalidInput("reduced perturbation must have valuation zero");
    if (is_pth_power(ext_residue(w)))
        throw InvalidInput("reduced perturbation residue is a p-th power");
    return ExtReducedUnit{Kind::CaseB, ext_zero(M), std::move(t),
                          std::move(w)};
}

ExtElem ExtReducedUnit::value() const {
    if (kind == Kind::CaseA) return u;
    const FierceExtPtr& M = w.M;
    return ext_add(ext_one(M),
                   ext_scale(w, loc_pi(M->k, t * M->k->p)));
}

namespace {

// Arithmetic bundle plugging M into the shared reduction loop. Residues
// live in F_q(sigma), where the same p-th power test and Artin-Schreier
// solver classify the steps; the value lattice is the one of K.
struct ExtOps {
    using Elem = ExtElem;
    // Nothing stacks a further extension on top of M, so the terminal
    // exponent may sit in (1/p) Lambda; only pi_{pt} is ever formed.
    static constexpr bool fractional_t = true;
    FierceExtPtr M;
    long long p, eprime, f;
    FqPtr F;

    explicit ExtOps(FierceExtPtr ext)
        : M(std::move(ext)), p(M->k->p), eprime(M->k->eprime), f(M->k->f),
          F(M->k->residue_field()) {}

    ExtElem one() const { return ext_one(M); }
    ExtElem pi(const Rat& t) const {
        return ext_from_base(M, loc_pi(M->k, t));
    }
    ExtElem lambda_elem() const {
        return ext_from_base(M, loc_const(M->k->lambda()));
    }
    ExtElem lift(const RatFun& r) const { return ext_lift(M, r); }
    ExtElem add(const ExtElem& a, const ExtElem& b) const {
        return ext_add(a, b);
    }
    ExtElem sub(const ExtElem& a, const ExtElem& b) const {
        return ext_sub(a, b);
    }
    ExtElem mul(const ExtElem& a, const ExtElem& b) const {
        return ext_mul(a, b);
    }
    ExtElem inv(const ExtElem& a) const { return ext_inv(a); }
    ExtElem pow(const ExtElem& a, long long e) const { return ext_pow(a, e); }
    bool is_zero(const ExtElem& a) const { return ext_is_zero_at_prec(a); }
    bool exact_zero(const ExtElem& a) const {
        for (const auto& c : a.c)
            if (!c.num.empty()) return false;
        return true;
    }
    Rat prec_floor(const ExtElem& a) const { return ext_prec_floor(a); }
    std::optional<Rat> val(const ExtElem& a) const { return ext_val(a); }
    Rat valuation(const ExtElem& a) const { return ext_valuation(a); }
    RatFun residue(const ExtElem& a) const { return ext_residue(a); }
};

}  // namespace

ExtKummerResult reduce_over_extension(const ExtElem& u) {
    ExtOps ops(u.M);
    auto out = detail::reduce_unit_loop(ops, u);
    if (out.case_a)
        return {ExtReducedUnit::case_a(std::move(out.payload)),
                std::move(out.multiplier)};
    return {ExtReducedUnit::case_b(out.t, std::move(out.payload)),
            std::move(out.multiplier)};
}

// --------------------------------------------------------- epsilon-lifting

EpsilonLift epsilon_lift(const RatFun& abar, const FierceExtPtr& M,
                         const EpsilonContext& ctx) {
    const ConstFieldPtr& k = M->k;
    FqPtr F = k->residue_field();
    if (abar.field()->p() != F->p() || abar.field()->f() != F->f())
        throw InvalidInput("residue datum lives over the wrong F_q");
    if (!(ctx.epsilon > 0))
        throw InvalidInput("lifting level must be positive");
    if (!k->lattice().contains(ctx.epsilon))
        throw InvalidInput("lifting level outside the value lattice");
    if (abar.is_zero())
        return {loc_zero(k), ext_zero(M), ext_zero(M)};

    // M-bar^p = K-bar exactly, so abar has a p-th root upstairs; b lifts it
    // and a is the base component of b^p. The x-components of b^p carry at
    // least one relation coefficient or one factor of p, which puts them at
    // depth >= the tower's own epsilon; they become the certificate c.
    auto rootbar = is_pth_power(subst_power(abar, k->p));
    if (!rootbar)
        throw InternalInconsistency("base residue escaped M-bar^p");
    ExtElem b = ext_lift(M, *rootbar);
    ExtElem B = ext_pow(b, k->p);
    ExtElem c = ext_zero(M);
    for (size_t i = 1; i < B.c.size(); ++i) {
        if (!loc_is_zero_at_prec(B.c[i]) &&
            !loc_val_at_least(B.c[i], ctx.epsilon))
            throw InvalidInput(
                "lifting level exceeds what this tower certifies");
        LocElem shifted = loc_mul(B.c[i], loc_pi(k, -ctx.epsilon));
        if (loc_is_zero_at_prec(shifted) && loc_prec_floor(shifted) < 0)
            throw PrecisionExhausted(
                "certificate component sank below the precision tags");
        c.c[i] = loc_neg(shifted);
    }
    return {B.c[0], std::move(b), std::move(c)};
}

}  // namespace swanlab
