#include "swanlab/fqpoly.hpp"

#include <algorithm>

namespace swanlab {

FqPoly::FqPoly(FqPtr field, std::vector<Fq::Elem> coeffs)
    : F(std::move(field)), c(std::move(coeffs)) {
    trim();
}

FqPoly FqPoly::constant(FqPtr F, Fq::Elem a) {
    FqPoly out(std::move(F));
    if (a != 0) out.c = {a};
    return out;
}

FqPoly FqPoly::monomial(FqPtr F, Fq::Elem a, int deg) {
    FqPoly out(std::move(F));
    if (a != 0) {
        out.c.assign(deg + 1, 0);
        out.c[deg] = a;
    }
    return out;
}

void FqPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

FqPoly operator+(const FqPoly& a, const FqPoly& b) {
    FqPoly out(a.F);
    out.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < out.c.size(); ++i)
        out.c[i] = a.F->add(a.coeff(static_cast<int>(i)),
                            b.coeff(static_cast<int>(i)));
    out.trim();
    return out;
}

FqPoly operator-(const FqPoly& a) {
    FqPoly out = a;
    for (auto& x : out.c) x = a.F->neg(x);
    return out;
}

FqPoly operator-(const FqPoly& a, const FqPoly& b) { return a + (-b); }

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
    if (a.is_zero() || b.is_zero()) return FqPoly::zero(a.F);
    FqPoly out(a.F);
    out.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] =
                a.F->add(out.c[i + j], a.F->mul(a.c[i], b.c[j]));
    }
    out.trim();
    return out;
}

FqPoly scale(const FqPoly& a, Fq::Elem k) {
    FqPoly out = a;
    for (auto& x : out.c) x = a.F->mul(x, k);
    out.trim();
    return out;
}

std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b) {
    if (b.is_zero()) throw InvalidInput("polynomial division by zero");
    FqPoly q(a.F), r = a;
    if (r.degree() >= b.degree())
        q.c.assign(r.degree() - b.degree() + 1, 0);
    Fq::Elem linv = a.F->inv(b.lead());
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int k = r.degree() - b.degree();
        Fq::Elem t = a.F->mul(r.lead(), linv);
        q.c[k] = t;
        for (int i = 0; i <= b.degree(); ++i)
            r.c[k + i] = a.F->sub(r.c[k + i], a.F->mul(t, b.c[i]));
        r.trim();
    }
    q.trim();
    return {q, r};
}

FqPoly monic(const FqPoly& a) {
    if (a.is_zero()) return a;
    return scale(a, a.F->inv(a.lead()));
}

FqPoly poly_gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

ExtGcd poly_ext_gcd(const FqPoly& a, const FqPoly& b) {
    FqPoly r0 = a, r1 = b;
    FqPoly u0 = FqPoly::constant(a.F, 1), u1 = FqPoly::zero(a.F);
    FqPoly v0 = FqPoly::zero(a.F), v1 = FqPoly::constant(a.F, 1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1;
        r1 = r;
        FqPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
    }
    if (!r0.is_zero()) {
        Fq::Elem k = a.F->inv(r0.lead());
        r0 = scale(r0, k);
        u0 = scale(u0, k);
        v0 = scale(v0, k);
    }
    return {r0, u0, v0};
}

FqPoly derivative(const FqPoly& a) {
    FqPoly out(a.F);
    if (a.degree() < 1) return out;
    out.c.assign(a.c.size() - 1, 0);
    for (size_t i = 1; i < a.c.size(); ++i)
        out.c[i - 1] = a.F->mul(a.c[i], a.F->from_int(static_cast<long long>(i)));
    out.trim();
    return out;
}

Fq::Elem eval(const FqPoly& a, Fq::Elem x) {
    Fq::Elem acc = 0;
    for (size_t i = a.c.size(); i-- > 0;)
        acc = a.F->add(a.F->mul(acc, x), a.c[i]);
    return acc;
}

FqPoly pow_mod(const FqPoly& base, BigInt e, const FqPoly& mod) {
    if (e < 0) throw InvalidInput("negative exponent in pow_mod");
    FqPoly acc = FqPoly::constant(base.F, 1);
    FqPoly b = divmod(base, mod).second;
    while (e > 0) {
        if ((e & 1) != 0) acc = divmod(acc * b, mod).second;
        b = divmod(b * b, mod).second;
        e >>= 1;
    }
    return acc;
}

int low_order(const FqPoly& a) {
    if (a.is_zero()) throw InvalidInput("s-adic order of zero polynomial");
    for (size_t i = 0; i < a.c.size(); ++i)
        if (a.c[i] != 0) return static_cast<int>(i);
    throw InternalInconsistency("untrimmed zero polynomial");
}

FqPoly poly_pth_root(const FqPoly& a) {
    long long p = a.F->p();
    FqPoly out(a.F);
    if (a.is_zero()) return out;
    out.c.assign(a.degree() / p + 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        if (i % p != 0)
            throw InvalidInput("polynomial is not a p-th power");
        out.c[i / p] = a.F->pth_root(a.c[i]);
    }
    out.trim();
    return out;
}

FqPoly poly_frob(const FqPoly& a) {
    long long p = a.F->p();
    FqPoly out(a.F);
    if (a.is_zero()) return out;
    out.c.assign(static_cast<size_t>(a.degree()) * p + 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
        out.c[i * p] = a.F->pow(a.c[i], p);
    out.trim();
    return out;
}

namespace {

// Squarefree decomposition in characteristic p: peel gcd-with-derivative
// layers; a vanishing derivative means the remaining part is a p-th power,
// handled by recursion on its root with multiplicities scaled by p.
void squarefree_rec(const FqPoly& f, int mult,
                    std::vector<std::pair<FqPoly, int>>& out) {
    if (f.degree() < 1) return;
    FqPoly fp = derivative(f);
    if (fp.is_zero()) {
        squarefree_rec(poly_pth_root(f), mult * static_cast<int>(f.F->p()),
                       out);
        return;
    }
    FqPoly g = poly_gcd(f, fp);       // carries higher multiplicities
    FqPoly w = divmod(f, g).first;    // product of squarefree-part factors
    int i = 1;
    while (w.degree() >= 1) {
        FqPoly y = poly_gcd(w, g);
        FqPoly part = divmod(w, y).first;  // factors of multiplicity exactly i
        if (part.degree() >= 1) out.emplace_back(monic(part), mult * i);
        g = divmod(g, y).first;
        w = y;
        ++i;
    }
    if (g.degree() >= 1) squarefree_rec(g, mult, out);
}

// Equal-degree splitting (Cantor-Zassenhaus) of a squarefree product of
// irreducibles all of degree d.
void split_equal_degree(const FqPoly& f, int d, std::mt19937_64& rng,
                        std::vector<FqPoly>& out) {
    if (f.degree() == d) {
        out.push_back(monic(f));
        return;
    }
    const FqPtr& F = f.F;
    long long q = F->q();
    for (;;) {
        FqPoly r(F);
        r.c.resize(f.degree());
        for (auto& x : r.c) x = static_cast<Fq::Elem>(rng() % q);
        r.trim();
        if (r.degree() < 1) continue;
        FqPoly g = poly_gcd(r, f);
        if (g.degree() >= 1 && g.degree() < f.degree()) {
            split_equal_degree(g, d, rng, out);
            split_equal_degree(divmod(f, g).first, d, rng, out);
            return;
        }
        FqPoly t(F);
        if (F->p() == 2) {
            // Trace map over F_2: T(r) = r + r^2 + ... + r^(2^(d*f-1)).
            FqPoly acc = divmod(r, f).second, term = acc;
            long long steps = d * F->f();
            for (long long i = 1; i < steps; ++i) {
                term = divmod(term * term, f).second;
                acc = acc + term;
            }
            t = acc;
        } else {
            BigInt e = 1;
            for (int i = 0; i < d; ++i) e *= q;
            e = (e - 1) / 2;
            t = pow_mod(r, e, f) - FqPoly::constant(F, 1);
        }
        g = poly_gcd(t, f);
        if (g.degree() >= 1 && g.degree() < f.degree()) {
            split_equal_degree(g, d, rng, out);
            split_equal_degree(divmod(f, g).first, d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<std::pair<FqPoly, int>> factorize(const FqPoly& a,
                                              std::mt19937_64& rng) {
    std::vector<std::pair<FqPoly, int>> out;
    if (a.degree() < 1) return out;
    std::vector<std::pair<FqPoly, int>> sqf;
    squarefree_rec(monic(a), 1, sqf);
    for (auto& [part, mult] : sqf) {
        // Distinct-degree stage on each squarefree part.
        FqPoly rest = part;
        FqPoly x = FqPoly::monomial(a.F, 1, 1);
        FqPoly xq = x;
        for (int d = 1; rest.degree() >= 1; ++d) {
            if (2 * d > rest.degree()) {
                out.emplace_back(monic(rest), mult);
                break;
            }
            xq = pow_mod(xq, BigInt(a.F->q()), rest);
            FqPoly g = poly_gcd(xq - x, rest);
            if (g.degree() >= 1) {
                std::vector<FqPoly> pieces;
                split_equal_degree(g, d, rng, pieces);
                for (auto& piece : pieces) out.emplace_back(piece, mult);
                rest = divmod(rest, g).first;
                xq = divmod(xq, rest).second;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        if (l.first.degree() != r.first.degree())
            return l.first.degree() < r.first.degree();
        return l.first.c < r.first.c;
    });
    return out;
}

bool is_irreducible(const FqPoly& a) {
    if (a.degree() < 1) return false;
    if (a.degree() == 1) return true;
    // Rabin test: x^(q^n) = x mod a and gcd(x^(q^(n/l)) - x, a) = 1 for
    // prime divisors l of n.
    int n = a.degree();
    FqPoly x = FqPoly::monomial(a.F, 1, 1);
    auto xq_power = [&](int steps) {
        FqPoly acc = divmod(x, a).second;
        for (int i = 0; i < steps; ++i)
            acc = pow_mod(acc, BigInt(a.F->q()), a);
        return acc;
    };
    if (!(xq_power(n) - divmod(x, a).second).is_zero()) return false;
    for (int l = 2; l <= n; ++l) {
        if (n % l != 0) continue;
        bool lprime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) lprime = false;
        if (!lprime) continue;
        if (poly_gcd(xq_power(n / l) - x, a).degree() != 0) return false;
    }
    return true;
}

}  // namespace swanlab
