#include "swanlab/ratfun.hpp"

#include <algorithm>

namespace swanlab {

RatFun::RatFun(FqPoly n, FqPoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw InvalidInput("rational function with zero denominator");
    if (num.is_zero()) {
        den = FqPoly::constant(num.F, 1);
        return;
    }
    FqPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
        num = divmod(num, g).first;
        den = divmod(den, g).first;
    }
    Fq::Elem linv = num.F->inv(den.lead());
    num = scale(num, linv);
    den = scale(den, linv);
}

RatFun RatFun::from_poly(FqPoly p) {
    FqPtr F = p.F;
    return RatFun(std::move(p), FqPoly::constant(F, 1));
}

RatFun RatFun::constant(FqPtr F, Fq::Elem a) {
    return from_poly(FqPoly::constant(std::move(F), a));
}

RatFun RatFun::s(FqPtr F) {
    return from_poly(FqPoly::monomial(std::move(F), 1, 1));
}

RatFun operator+(const RatFun& a, const RatFun& b) {
    return RatFun(a.num * b.den + b.num * a.den, a.den * b.den);
}

RatFun operator-(const RatFun& a, const RatFun& b) {
    return RatFun(a.num * b.den - b.num * a.den, a.den * b.den);
}

RatFun operator*(const RatFun& a, const RatFun& b) {
    return RatFun(a.num * b.num, a.den * b.den);
}

RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw InvalidInput("division by zero rational function");
    return RatFun(a.num * b.den, a.den * b.num);
}

RatFun operator-(const RatFun& a) {
    RatFun out = a;
    out.num = -out.num;
    return out;
}

RatFun inverse(const RatFun& a) {
    if (a.is_zero()) throw InvalidInput("inverse of zero rational function");
    return RatFun(a.den, a.num);
}

RatFun pow(const RatFun& a, long long e) {
    if (e < 0) return pow(inverse(a), -e);
    RatFun acc = RatFun::constant(a.field(), 1), b = a;
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

RatFun derivative(const RatFun& a) {
    return RatFun(derivative(a.num) * a.den - a.num * derivative(a.den),
                  a.den * a.den);
}

int s_order(const RatFun& a) {
    if (a.is_zero()) throw InvalidInput("s-adic order of zero");
    return low_order(a.num) - low_order(a.den);
}

RatFun subst_power(const RatFun& a, long long k) {
    auto stretch = [&](const FqPoly& p) {
        FqPoly out(p.F);
        if (p.is_zero()) return out;
        out.c.assign(static_cast<size_t>(p.degree()) * k + 1, 0);
        for (size_t i = 0; i < p.c.size(); ++i) out.c[i * k] = p.c[i];
        out.trim();
        return out;
    };
    return RatFun(stretch(a.num), stretch(a.den));
}

std::vector<RatFun> pth_power_decompose(const RatFun& a) {
    const FqPtr& F = a.field();
    const long long p = F->p();
    // a = N D^(p-1) / D^p; split N D^(p-1) by exponent class mod p.
    FqPoly P = a.num;
    for (long long i = 0; i < p - 1; ++i) P = P * a.den;
    std::vector<RatFun> out;
    out.reserve(p);
    for (long long i = 0; i < p; ++i) {
        FqPoly bi(F);
        if (!P.is_zero()) {
            bi.c.assign(P.degree() / p + 1, 0);
            for (long long j = i; j <= P.degree(); j += p)
                bi.c[j / p] = F->pth_root(P.coeff(static_cast<int>(j)));
            bi.trim();
        }
        out.emplace_back(std::move(bi), a.den);
    }
    return out;
}

std::optional<RatFun> is_pth_power(const RatFun& a) {
    if (a.is_zero()) return RatFun(a.field());
    std::vector<RatFun> b = pth_power_decompose(a);
    for (size_t i = 1; i < b.size(); ++i)
        if (!b[i].is_zero()) return std::nullopt;
    return b[0];
}

std::optional<RatFun> artin_schreier_solve(const RatFun& a) {
    const FqPtr& F = a.field();
    const long long p = F->p(), f = F->f();
    if (a.is_zero()) return RatFun(F);

    // Any solution is C/D with D^p = den(a): the denominator of b^p - b in
    // lowest terms is exactly den(b)^p.
    FqPoly D(F);
    try {
        D = poly_pth_root(a.den);
    } catch (const InvalidInput&) {
        return std::nullopt;
    }
    const FqPoly& A = a.num;
    FqPoly Dp1 = FqPoly::constant(F, 1);
    for (long long i = 0; i < p - 1; ++i) Dp1 = Dp1 * D;

    int budget = std::max(D.degree(), (A.degree() + static_cast<int>(p) - 1) /
                                          static_cast<int>(p));
    budget = std::max(budget, 0);
    int max_deg = std::max(budget * static_cast<int>(p),
                           budget + Dp1.degree());
    max_deg = std::max(max_deg, A.degree());

    // F_p-linear system: unknowns are the F_p-digits of the coefficients of
    // C, equations the digits of the coefficients of C^p - C D^(p-1) - A.
    int ncols = (budget + 1) * static_cast<int>(f);
    int nrows = (max_deg + 1) * static_cast<int>(f);
    std::vector<std::vector<int>> M(nrows, std::vector<int>(ncols + 1, 0));

    auto add_poly_digits = [&](const FqPoly& poly, int col, int sign) {
        for (int j = 0; j <= poly.degree(); ++j) {
            long long e = poly.coeff(j);
            for (int b = 0; b < f; ++b) {
                int digit = static_cast<int>(e % p);
                e /= p;
                if (digit == 0) continue;
                int row = j * static_cast<int>(f) + b;
                int v = (M[row][col] + sign * digit) % static_cast<int>(p);
                M[row][col] = (v + static_cast<int>(p)) % static_cast<int>(p);
            }
        }
    };

    // F_p-basis of F_q: the packed power basis alpha^b <-> integer p^b.
    std::vector<Fq::Elem> fp_basis(f);
    long long pb = 1;
    for (int b = 0; b < f; ++b) {
        fp_basis[b] = static_cast<Fq::Elem>(pb);
        pb *= p;
    }

    for (int i = 0; i <= budget; ++i) {
        for (int b = 0; b < f; ++b) {
            Fq::Elem basis = fp_basis[b];
            int col = i * static_cast<int>(f) + b;
            // Image of basis*s^i under C -> C^p - C D^(p-1).
            FqPoly t1 = FqPoly::monomial(F, F->pow(basis, p),
                                         i * static_cast<int>(p));
            FqPoly t2 = scale(Dp1, basis);
            // shift t2 by s^i
            FqPoly t2s(F);
            if (!t2.is_zero()) {
                t2s.c.assign(t2.c.size() + i, 0);
                for (size_t k = 0; k < t2.c.size(); ++k) t2s.c[k + i] = t2.c[k];
            }
            add_poly_digits(t1, col, 1);
            add_poly_digits(t2s, col, -1);
        }
    }
    add_poly_digits(A, ncols, 1);  // right-hand side

    // Gaussian elimination over F_p.
    std::vector<int> pivot_col(nrows, -1);
    int rank = 0;
    for (int col = 0; col < ncols && rank < nrows; ++col) {
        int sel = -1;
        for (int r = rank; r < nrows; ++r)
            if (M[r][col] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(M[rank], M[sel]);
        // Normalize pivot to 1 (F_p inverse by exponentiation).
        int piv = M[rank][col];
        int pinv = 1;
        for (int k = 0; k < p - 2; ++k) pinv = (pinv * piv) % static_cast<int>(p);
        for (int cc = col; cc <= ncols; ++cc)
            M[rank][cc] = (M[rank][cc] * pinv) % static_cast<int>(p);
        for (int r = 0; r < nrows; ++r) {
            if (r == rank || M[r][col] == 0) continue;
            int factor = M[r][col];
            for (int cc = col; cc <= ncols; ++cc) {
                int v = (M[r][cc] - factor * M[rank][cc]) % static_cast<int>(p);
                M[r][cc] = (v + static_cast<int>(p)) % static_cast<int>(p);
            }
        }
        pivot_col[rank] = col;
        ++rank;
    }
    for (int r = rank; r < nrows; ++r)
        if (M[r][ncols] != 0) return std::nullopt;  // inconsistent

    std::vector<int> x(ncols, 0);
    for (int r = 0; r < rank; ++r) x[pivot_col[r]] = M[r][ncols];

    FqPoly C(F);
    C.c.assign(budget + 1, 0);
    for (int i = 0; i <= budget; ++i) {
        Fq::Elem acc = 0;
        for (int b = 0; b < f; ++b) {
            Fq::Elem digit = F->from_int(x[i * static_cast<int>(f) + b]);
            acc = F->add(acc, F->mul(digit, fp_basis[b]));
        }
        C.c[i] = acc;
    }
    C.trim();

    RatFun b(C, D);
    if (!(pow(b, p) - b == a))
        throw InternalInconsistency("Artin-Schreier solution fails to verify");
    return b;
}

DiffForm operator+(const DiffForm& x, const DiffForm& y) {
    return DiffForm(x.a + y.a);
}
DiffForm operator-(const DiffForm& x, const DiffForm& y) {
    return DiffForm(x.a - y.a);
}
DiffForm operator-(const DiffForm& x) { return DiffForm(-x.a); }
DiffForm operator*(const RatFun& z, const DiffForm& x) {
    return DiffForm(z * x.a);
}

DiffForm dform(const RatFun& y) {
    return DiffForm(RatFun::s(y.field()) * derivative(y));
}

DiffForm dlog(const RatFun& y) {
    if (y.is_zero()) throw InvalidInput("dlog of zero");
    return DiffForm(RatFun::s(y.field()) * derivative(y) / y);
}

DiffForm cartier(const DiffForm& w) {
    return DiffForm(pth_power_decompose(w.a)[0]);
}

RatFun solve_exact(const DiffForm& w) {
    const FqPtr& F = w.a.field();
    std::vector<RatFun> b = pth_power_decompose(w.a);
    if (!b[0].is_zero())
        throw NotKilledByCartier("form has nonzero Cartier image");
    // a = sum_{i>=1} b_i^p s^i integrates to sum b_i^p s^i / i termwise
    // (the b_i^p blocks are killed by d).
    RatFun y(F);
    RatFun spow = RatFun::constant(F, 1);
    for (long long i = 1; i < F->p(); ++i) {
        spow = spow * RatFun::s(F);
        if (b[i].is_zero()) continue;
        Fq::Elem c = F->inv(F->from_int(i));
        y = y + RatFun::constant(F, c) * pow(b[i], F->p()) * spow;
    }
    if (!(dform(y) == w))
        throw InternalInconsistency("antiderivative fails to verify");
    return y;
}

std::optional<RatFun> solve_dlog(const DiffForm& w, int degree_bound) {
    const FqPtr& F = w.a.field();
    if (!(cartier(w) == w))
        throw NotFixedByCartier("form is not fixed by the Cartier operator");
    if (w.is_zero()) return RatFun::constant(F, 1);

    // omega = g ds with g = a/s; a Cartier-fixed form is a finite sum of
    // dq/q over monic irreducibles q with F_p exponents, recovered from the
    // simple-pole residues of g.
    RatFun g = w.a / RatFun::s(F);
    std::mt19937_64 rng(0x5eed);
    RatFun y = RatFun::constant(F, 1);
    for (auto& [q, mult] : factorize(g.den, rng)) {
        if (mult != 1)
            throw InternalInconsistency("Cartier-fixed form with a higher-order pole");
        if (q.degree() > degree_bound) return std::nullopt;
        FqPoly B1 = divmod(g.den, q).first;
        FqPoly qp = derivative(q);
        // residue = A / (B1 q') mod q, must be a constant in F_p.
        ExtGcd e = poly_ext_gcd(divmod(B1 * qp, q).second, q);
        if (e.g.degree() != 0)
            throw InternalInconsistency("non-invertible residue denominator");
        FqPoly res = divmod(g.num * e.u, q).second;
        res = scale(res, F->inv(e.g.coeff(0)));
        if (res.degree() > 0)
            throw InternalInconsistency("non-constant residue on a Cartier-fixed form");
        Fq::Elem r = res.coeff(0);
        long long n = -1;
        for (long long k = 0; k < F->p(); ++k)
            if (F->from_int(k) == r) {
                n = k;
                break;
            }
        if (n < 0)
            throw InternalInconsistency("residue outside the prime field");
        if (n == 0)
            throw InternalInconsistency("vanishing residue at a pole");
        y = y * pow(RatFun::from_poly(q), n);
    }
    if (!(dlog(y) == w))
        throw InternalInconsistency("dlog preimage fails to verify");
    return y;
}

int v1(const DiffForm& w) {
    if (w.is_zero()) throw InvalidInput("v1 of the zero form");
    return s_order(w.a);
}

}  // namespace swanlab
