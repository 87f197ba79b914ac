#include "swanlab/local_field.hpp"

#include <algorithm>
#include <sstream>

#include "reduce_loop.h"
#include "swanlab/errors.hpp"

namespace swanlab {

namespace {

// Polynomials in s are plain coefficient vectors over O_k, low to high.
using Poly = std::vector<ConstElem>;

constexpr long long kDegreeBound = 4096;

bool exact_zero(const ConstFieldPtr& k, const ConstElem& c) {
    return k->is_zero_at_prec(c) && c.prec >= k->full_prec();
}

void ptrim(const ConstFieldPtr& k, Poly& v) {
    while (!v.empty() && exact_zero(k, v.back())) v.pop_back();
}

bool pall_null(const ConstFieldPtr& k, const Poly& v) {
    for (const auto& c : v)
        if (!k->is_zero_at_prec(c)) return false;
    return true;
}

Poly padd(const ConstFieldPtr& k, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), k->zero());
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size() && i < b.size())
            r[i] = k->add(a[i], b[i]);
        else
            r[i] = i < a.size() ? a[i] : b[i];
    }
    ptrim(k, r);
    return r;
}

Poly pneg(const ConstFieldPtr& k, const Poly& a) {
    Poly r = a;
    for (auto& c : r) c = k->neg(c);
    return r;
}

Poly pmul(const ConstFieldPtr& k, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    if ((long long)(a.size() + b.size()) > kDegreeBound)
        throw SolverBoundExceeded("s-degree bound exceeded in local arithmetic");
    Poly r(a.size() + b.size() - 1, k->zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (k->is_zero_at_prec(a[i]) && a[i].prec >= k->full_prec()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = k->add(r[i + j], k->mul(a[i], b[j]));
    }
    ptrim(k, r);
    return r;
}

Poly pscale(const ConstFieldPtr& k, const Poly& a, const ConstElem& c) {
    Poly r = a;
    for (auto& x : r) x = k->mul(x, c);
    ptrim(k, r);
    return r;
}

// Structural identity including precision tags (stricter than ConstElem
// equality, which compares at shared precision only).
bool pden_identical(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].prec != b[i].prec || a[i].d != b[i].d) return false;
    return true;
}

// Content of a polynomial in 1/e' units: the minimum coefficient valuation.
struct Content {
    bool zero_at_prec = false;  // every coefficient vanishes at its tag
    bool certified = false;     // the minimum is provable at the tags
    long long c = 0;            // valid when certified
};

Content pcontent(const ConstFieldPtr& k, const Poly& v) {
    Content out;
    long long best = -1;
    long long weakest_null = -1;
    for (const auto& ce : v) {
        auto val = k->val(ce);
        if (val) {
            long long u = (long long)rat_num(*val * k->eprime).convert_to<long long>();
            if (best < 0 || u < best) best = u;
        } else {
            if (weakest_null < 0 || ce.prec < weakest_null) weakest_null = ce.prec;
        }
    }
    if (best < 0) {
        out.zero_at_prec = true;
        return out;
    }
    out.c = best;
    out.certified = weakest_null < 0 || weakest_null >= best;
    return out;
}

Poly pdivpi(const ConstFieldPtr& k, const Poly& v, long long units) {
    if (units == 0) return v;
    Poly r = v;
    for (auto& c : r) c = k->div_pi_pow(c, units);
    return r;
}

// Lower bound on the valuation of pi^sv * num/(unit), in 1/e' units, valid
// even when every coefficient vanishes at its precision tag.
long long prec_floor_units(const ConstFieldPtr& k, const Poly& num,
                           long long sv) {
    long long floor = -1;
    for (const auto& ce : num) {
        auto val = k->val(ce);
        long long u = val ? (long long)rat_num(*val * k->eprime).convert_to<long long>()
                          : ce.prec;
        if (floor < 0 || u < floor) floor = u;
    }
    if (floor < 0) floor = k->full_prec();
    return floor + sv;
}

void check_same_field(const LocElem& a, const LocElem& b) {
    if (a.k != b.k)
        throw InvalidInput("operands live over different constant fields");
}

long long lattice_units(const ConstFieldPtr& k, const Rat& t) {
    Rat u = t * k->eprime;
    if (!is_integer(u))
        throw InvalidInput("exponent does not lie in the value lattice");
    return (long long)rat_num(u).convert_to<long long>();
}

// Digit mask keeping only the pi-classes (i + sv) = r mod ratio. The masked
// element stays canonical: surviving digits keep their reduction bounds.
ConstElem mask_class(const ConstFieldPtr& k, const ConstElem& a, long long sv,
                     long long ratio, long long r) {
    ConstElem out = a;
    long long f = k->f;
    for (long long i = 0; i < k->eprime; ++i) {
        long long cls = ((i + sv) % ratio + ratio) % ratio;
        if (cls == r) continue;
        for (long long j = 0; j < f; ++j) out.d[(size_t)(i * f + j)] = 0;
    }
    return out;
}

bool den_is_base_pure(const ConstFieldPtr& k, const Poly& den, long long ratio) {
    long long f = k->f;
    for (const auto& ce : den)
        for (long long i = 0; i < k->eprime; ++i) {
            if (i % ratio == 0) continue;
            for (long long j = 0; j < f; ++j)
                if (ce.d[(size_t)(i * f + j)]) return false;
        }
    return true;
}

}  // namespace

LocElem make_loc(ConstFieldPtr k, std::vector<ConstElem> num,
                 std::vector<ConstElem> den, long long sv) {
    if (!k) throw InvalidInput("null constant field");
    ptrim(k, num);
    ptrim(k, den);
    if (den.empty())
        throw InvalidInput("denominator is the zero polynomial");
    Content dc = pcontent(k, den);
    if (dc.zero_at_prec)
        throw PrecisionExhausted("denominator vanishes at working precision");
    if (!dc.certified)
        throw PrecisionExhausted("denominator content not certified by tags");
    if (dc.c > 0) {
        den = pdivpi(k, den, dc.c);
        sv -= dc.c;
    }
    if (num.empty()) return LocElem{std::move(k), {}, std::move(den), 0};
    return LocElem{std::move(k), std::move(num), std::move(den), sv};
}

LocElem loc_zero(const ConstFieldPtr& k) {
    return LocElem{k, {}, {k->one()}, 0};
}

LocElem loc_one(const ConstFieldPtr& k) {
    return LocElem{k, {k->one()}, {k->one()}, 0};
}

LocElem loc_from_int(const ConstFieldPtr& k, long long v) {
    return LocElem{k, {k->from_int(v)}, {k->one()}, 0};
}

LocElem loc_const(const ConstElem& c) {
    if (!c.k) throw InvalidInput("constant without a field handle");
    ConstFieldPtr k = c.k;
    return LocElem{k, {c}, {k->one()}, 0};
}

LocElem loc_s(const ConstFieldPtr& k) {
    return LocElem{k, {k->zero(), k->one()}, {k->one()}, 0};
}

LocElem loc_pi(const ConstFieldPtr& k, const Rat& t) {
    return LocElem{k, {k->one()}, {k->one()}, lattice_units(k, t)};
}

LocElem loc_add(const LocElem& a, const LocElem& b) {
    check_same_field(a, b);
    const ConstFieldPtr& k = a.k;
    if (a.num.empty()) return b;
    if (b.num.empty()) return a;
    long long common = std::min(a.sv, b.sv);
    if (pden_identical(a.den, b.den)) {
        // shared denominator: add numerators directly instead of crossing,
        // which keeps structural elements from squaring their denominators
        Poly l = a.num, r = b.num;
        if (a.sv > common) l = pscale(k, l, k->pi_t(rat(a.sv - common, k->eprime)));
        if (b.sv > common) r = pscale(k, r, k->pi_t(rat(b.sv - common, k->eprime)));
        return make_loc(k, padd(k, l, r), a.den, common);
    }
    Poly left = pmul(k, a.num, b.den);
    Poly right = pmul(k, b.num, a.den);
    if (a.sv > common) left = pscale(k, left, k->pi_t(rat(a.sv - common, k->eprime)));
    if (b.sv > common) right = pscale(k, right, k->pi_t(rat(b.sv - common, k->eprime)));
    return make_loc(k, padd(k, left, right), pmul(k, a.den, b.den), common);
}

LocElem loc_neg(const LocElem& a) {
    LocElem r = a;
    r.num = pneg(a.k, a.num);
    return r;
}

LocElem loc_sub(const LocElem& a, const LocElem& b) {
    return loc_add(a, loc_neg(b));
}

LocElem loc_mul(const LocElem& a, const LocElem& b) {
    check_same_field(a, b);
    const ConstFieldPtr& k = a.k;
    if (a.num.empty() || b.num.empty()) return loc_zero(k);
    return make_loc(k, pmul(k, a.num, b.num), pmul(k, a.den, b.den),
                    a.sv + b.sv);
}

LocElem loc_inv(const LocElem& a) {
    const ConstFieldPtr& k = a.k;
    if (a.num.empty())
        throw PrecisionExhausted("inverting an element that is zero at precision");
    Content nc = pcontent(k, a.num);
    if (nc.zero_at_prec)
        throw PrecisionExhausted("inverting an element that is zero at precision");
    if (!nc.certified)
        throw PrecisionExhausted("numerator content not certified by tags");
    Poly nden = nc.c > 0 ? pdivpi(k, a.num, nc.c) : a.num;
    return LocElem{k, a.den, nden, -(a.sv + nc.c)};
}

LocElem loc_div(const LocElem& a, const LocElem& b) {
    return loc_mul(a, loc_inv(b));
}

LocElem loc_pow(const LocElem& a, long long e) {
    const ConstFieldPtr& k = a.k;
    if (e < 0) return loc_pow(loc_inv(a), -e);
    LocElem acc = loc_one(k);
    LocElem base = a;
    while (e > 0) {
        if (e & 1) acc = loc_mul(acc, base);
        base = e > 1 ? loc_mul(base, base) : base;
        e >>= 1;
    }
    return acc;
}

bool loc_is_zero_at_prec(const LocElem& a) {
    return pall_null(a.k, a.num);
}

bool loc_eq(const LocElem& a, const LocElem& b) {
    return loc_is_zero_at_prec(loc_sub(a, b));
}

std::optional<Rat> loc_val(const LocElem& a) {
    const ConstFieldPtr& k = a.k;
    Content nc = pcontent(k, a.num);
    if (nc.zero_at_prec) return std::nullopt;
    if (!nc.certified)
        throw PrecisionExhausted("valuation not certified by precision tags");
    return rat(a.sv + nc.c, k->eprime);
}

Rat gauss_valuation(const LocElem& a) {
    auto v = loc_val(a);
    if (!v)
        throw PrecisionExhausted("element vanishes at working precision");
    return *v;
}

bool loc_val_at_least(const LocElem& a, const Rat& t) {
    const ConstFieldPtr& k = a.k;
    Rat t0 = t - rat(a.sv, k->eprime);
    if (a.num.empty() || t0 <= 0) return true;
    for (const auto& c : a.num)
        if (!k->val_at_least(c, t0)) return false;
    return true;
}

Rat loc_prec_floor(const LocElem& a) {
    return rat(prec_floor_units(a.k, a.num, a.sv), a.k->eprime);
}

RatFun loc_residue(const LocElem& a) {
    const ConstFieldPtr& k = a.k;
    FqPtr F = k->residue_field();
    if (pall_null(k, a.num)) {
        if (prec_floor_units(k, a.num, a.sv) > 0 || a.num.empty())
            return RatFun(F);
        throw PrecisionExhausted("residue of an element only known to vanish");
    }
    Rat v = gauss_valuation(a);
    if (v < 0) throw InvalidInput("residue of an element of negative valuation");
    if (v > 0) return RatFun(F);
    Poly unum = a.sv < 0 ? pdivpi(k, a.num, -a.sv) : a.num;
    std::vector<Fq::Elem> nbar, dbar;
    nbar.reserve(unum.size());
    dbar.reserve(a.den.size());
    for (const auto& c : unum) nbar.push_back(k->residue(c));
    for (const auto& c : a.den) dbar.push_back(k->residue(c));
    return RatFun(FqPoly(F, std::move(nbar)), FqPoly(F, std::move(dbar)));
}

LocElem loc_lift(const ConstFieldPtr& k, const RatFun& abar) {
    FqPtr F = abar.field();
    if (F->p() != k->p || F->f() != k->f)
        throw InvalidInput("residue datum lives over the wrong F_q");
    Poly num, den;
    num.reserve(abar.num.c.size());
    den.reserve(abar.den.c.size());
    for (Fq::Elem c : abar.num.c) num.push_back(k->lift(c));
    for (Fq::Elem c : abar.den.c) den.push_back(k->lift(c));
    if (den.empty()) den.push_back(k->one());
    return make_loc(k, std::move(num), std::move(den), 0);
}

std::string loc_str(const LocElem& a) {
    const ConstFieldPtr& k = a.k;
    std::ostringstream os;
    auto render = [&](const Poly& v) {
        if (v.empty()) {
            os << "0";
            return;
        }
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) os << " + ";
            os << "(" << k->to_string(v[i]) << ")";
            if (i == 1) os << "*s";
            if (i > 1) os << "*s^" << i;
        }
    };
    if (a.sv) os << "pi^" << a.sv << " * ";
    os << "[";
    render(a.num);
    os << "] / [";
    render(a.den);
    os << "]";
    return os.str();
}

// --------------------------------------------------------------- reduction

ReducedUnit ReducedUnit::case_a(LocElem unit) {
    ReducedUnit r{Kind::CaseA, unit, rat(0), loc_zero(unit.k)};
    auto v = loc_val(unit);
    if (!v || *v != 0)
        throw InvalidInput("reduced unit must have valuation zero");
    if (is_pth_power(loc_residue(unit)))
        throw InvalidInput("reduced unit residue is a p-th power");
    return r;
}

ReducedUnit ReducedUnit::case_b(Rat t, LocElem w) {
    const ConstFieldPtr& k = w.k;
    if (!(t > 0) || !(t * (k->p - 1) < 1))
        throw InvalidInput("reduced exponent outside (0, 1/(p-1))");
    lattice_units(k, t);
    auto v = loc_val(w);
    if (!v || *v != 0)
        throw InvalidInput("reduced perturbation must have valuation zero");
    if (is_pth_power(loc_residue(w)))
        throw InvalidInput("reduced perturbation residue is a p-th power");
    return ReducedUnit{Kind::CaseB, loc_zero(k), std::move(t), std::move(w)};
}

LocElem ReducedUnit::value() const {
    if (kind == Kind::CaseA) return u;
    const ConstFieldPtr& k = w.k;
    return loc_add(loc_one(k), loc_mul(loc_pi(k, t * k->p), w));
}

namespace {

// Arithmetic bundle plugging the base field into the shared reduction loop.
struct BaseOps {
    using Elem = LocElem;
    // Base-level outcomes feed make_extension, which needs pi_t itself, so
    // the exponent must land in the lattice.
    static constexpr bool fractional_t = false;
    ConstFieldPtr k;
    long long p, eprime, f;
    FqPtr F;

    explicit BaseOps(ConstFieldPtr field)
        : k(std::move(field)), p(k->p), eprime(k->eprime), f(k->f),
          F(k->residue_field()) {}

    LocElem one() const { return loc_one(k); }
    LocElem pi(const Rat& t) const { return loc_pi(k, t); }
    LocElem lambda_elem() const { return loc_const(k->lambda()); }
    LocElem lift(const RatFun& r) const { return loc_lift(k, r); }
    LocElem add(const LocElem& a, const LocElem& b) const {
        return loc_add(a, b);
    }
    LocElem sub(const LocElem& a, const LocElem& b) const {
        return loc_sub(a, b);
    }
    LocElem mul(const LocElem& a, const LocElem& b) const {
        return loc_mul(a, b);
    }
    LocElem inv(const LocElem& a) const { return loc_inv(a); }
    LocElem pow(const LocElem& a, long long e) const { return loc_pow(a, e); }
    bool is_zero(const LocElem& a) const { return loc_is_zero_at_prec(a); }
    bool exact_zero(const LocElem& a) const { return a.num.empty(); }
    Rat prec_floor(const LocElem& a) const { return loc_prec_floor(a); }
    std::optional<Rat> val(const LocElem& a) const { return loc_val(a); }
    Rat valuation(const LocElem& a) const { return gauss_valuation(a); }
    RatFun residue(const LocElem& a) const { return loc_residue(a); }
};

}  // namespace

KummerResult kummer_reduce(const LocElem& u0) {
    BaseOps ops(u0.k);
    auto out = detail::reduce_unit_loop(ops, u0);
    if (out.case_a)
        return {ReducedUnit::case_a(std::move(out.payload)),
                std::move(out.multiplier)};
    return {ReducedUnit::case_b(out.t, std::move(out.payload)),
            std::move(out.multiplier)};
}

// ---------------------------------------------------------- canonical form

CanonicalForm canonical_form(const LocElem& a, const ValGroup& base) {
    const ConstFieldPtr& k = a.k;
    if (k->eprime % base.e != 0)
        throw InvalidInput("base lattice does not divide the element's lattice");
    long long ratio = k->eprime / base.e;
    auto v = loc_val(a);
    if (!v)
        throw PrecisionExhausted("canonical form of an element that is zero "
                                 "at working precision");
    if (*v < 0) throw InvalidInput("canonical form needs an integral element");
    if (!den_is_base_pure(k, a.den, ratio))
        throw InvalidInput("denominator mixes lattice classes over the base");

    CanonicalForm out;
    std::vector<std::pair<Rat, LocElem>> terms;
    for (long long r = 0; r < ratio; ++r) {
        Poly numr;
        numr.reserve(a.num.size());
        for (const auto& c : a.num) numr.push_back(mask_class(k, c, a.sv, ratio, r));
        if (pall_null(k, numr)) continue;
        LocElem comp = make_loc(k, std::move(numr), a.den, a.sv);
        Rat t = gauss_valuation(comp);
        LocElem part = loc_mul(comp, loc_pi(k, -t));
        terms.emplace_back(t, std::move(part));
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [t, part] : terms) {
        out.exponents.push_back(t);
        out.parts.push_back(std::move(part));
    }
    for (size_t i = 1; i < out.exponents.size(); ++i)
        if (base.contains(out.exponents[i] - out.exponents[i - 1]))
            throw InternalInconsistency("canonical exponents collide mod base");
    return out;
}

namespace {

bool moderate_poly(const ConstFieldPtr& k, const Poly& poly, long long sv,
                   const EpsilonContext& ctx) {
    LocElem e{k, poly, {k->one()}, sv};
    CanonicalForm cf = canonical_form(e, ctx.lambda);
    for (const Rat& t : cf.exponents)
        if (!in_lambda_epsilon(t, ctx)) return false;
    return true;
}

}  // namespace

// Numerator and denominator are tested separately: the denominator is a
// unit-content polynomial, hence (lift of its residue) * (principal unit),
// and both factors invert inside the moderate subring when they are
// moderate. On base-pure denominators this agrees with testing the
// canonical exponents of the element itself; in general it is the
// conservative direction, which is the one the closure laws need.
bool is_moderate(const LocElem& a, const EpsilonContext& ctx) {
    auto v = loc_val(a);
    if (!v)
        throw PrecisionExhausted("moderation of an element that is zero at "
                                 "working precision");
    if (*v < 0) throw InvalidInput("moderation needs an integral element");
    return moderate_poly(a.k, a.num, a.sv, ctx) &&
           moderate_poly(a.k, a.den, 0, ctx);
}

}  // namespace swanlab
