#include "swanlab/constants.hpp"

#include <algorithm>
#include <sstream>

#include "swanlab/errors.hpp"

namespace swanlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 addm(u64 a, u64 b, u64 mod) {
    u64 s = a + b;  // a,b < mod <= 2^62, no overflow
    return s >= mod ? s - mod : s;
}

u64 subm(u64 a, u64 b, u64 mod) { return a >= b ? a - b : a + (mod - b); }

u64 mulm(u64 a, u64 b, u64 mod) { return (u128)a * b % mod; }

// inverse of a mod m for gcd(a,m)=1, via extended Euclid
u64 invm(u64 a, u64 m) {
    long long t = 0, nt = 1;
    long long r = (long long)m, nr = (long long)(a % m);
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw InternalInconsistency("invm: not a unit");
    if (t < 0) t += (long long)m;
    return (u64)t;
}

bool is_prime_ll(long long v) {
    if (v < 2) return false;
    for (long long d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

long long vp_of(u64 d, long long p, long long cap) {
    if (d == 0) return cap;
    long long v = 0;
    while (d % (u64)p == 0) {
        d /= (u64)p;
        ++v;
        if (v >= cap) break;
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------- element ops

bool ConstElem::operator==(const ConstElem& o) const {
    if (!k || k != o.k)
        throw InvalidInput("comparing elements of different constant fields");
    return k->is_zero_at_prec(k->sub(*this, o));
}

ConstElem operator+(const ConstElem& a, const ConstElem& b) {
    return a.k->add(a, b);
}
ConstElem operator-(const ConstElem& a, const ConstElem& b) {
    return a.k->sub(a, b);
}
ConstElem operator*(const ConstElem& a, const ConstElem& b) {
    return a.k->mul(a, b);
}
ConstElem operator-(const ConstElem& a) { return a.k->neg(a); }

void ConstField::canonicalize(ConstElem& a) const {
    if (a.prec > full_prec()) a.prec = full_prec();
    if (a.prec < 0) a.prec = 0;
    static thread_local std::vector<u64> ppow;
    ppow.assign((size_t)N + 1, 1);
    for (long long i = 1; i <= N; ++i) ppow[(size_t)i] = ppow[(size_t)i - 1] * (u64)p;
    for (long long i = 0; i < eprime; ++i) {
        long long cap = a.prec - i;
        cap = cap <= 0 ? 0 : (cap + eprime - 1) / eprime;
        if (cap > N) cap = N;
        u64 mod = ppow[(size_t)cap];
        for (long long j = 0; j < f; ++j) {
            u64& d = a.d[(size_t)(i * f + j)];
            d = cap == 0 ? 0 : d % mod;
        }
    }
}

ConstElem ConstField::zero() const {
    ConstElem r;
    r.k = shared_from_this();
    r.d.assign((size_t)(eprime * f), 0);
    r.prec = full_prec();
    return r;
}

ConstElem ConstField::one() const { return from_int(1); }

ConstElem ConstField::from_int(long long v) const {
    ConstElem r = zero();
    long long m2 = (long long)pN_;
    long long vv = v % m2;
    if (vv < 0) vv += m2;
    r.d[0] = (u64)vv;
    return r;
}

ConstElem ConstField::lift(Fq::Elem a) const {
    if (a < 0 || a >= k_residue->q())
        throw InvalidInput("residue element out of range");
    ConstElem r = zero();
    for (long long j = 0; j < f; ++j) {
        r.d[(size_t)j] = (u64)(a % p);
        a /= (Fq::Elem)p;
    }
    return r;
}

ConstElem ConstField::pi() const {
    ConstElem r = zero();
    if (eprime == 1) return pi_t(rat(1));
    r.d[(size_t)f] = 1;
    return r;
}

ConstElem ConstField::pi_t(const Rat& t) const {
    if (t < 0) throw InvalidInput("pi_t needs t >= 0");
    if (!lattice().contains(t)) throw InvalidInput("pi_t: t not in the value group");
    Rat ke = t * eprime;
    long long kk = (long long)rat_num(ke);
    if (eprime == 1) {
        // X itself reduces: g = X + p, so pi = -p exactly
        ConstElem base = from_int(-(long long)p);
        return pow(base, kk);
    }
    ConstElem base = zero();
    base.d[(size_t)f] = 1;
    return pow(base, kk);
}

ConstElem ConstField::add(const ConstElem& a, const ConstElem& b) const {
    ConstElem r = zero();
    r.prec = std::min(a.prec, b.prec);
    for (size_t i = 0; i < r.d.size(); ++i) r.d[i] = addm(a.d[i], b.d[i], pN_);
    canonicalize(r);
    return r;
}

ConstElem ConstField::sub(const ConstElem& a, const ConstElem& b) const {
    ConstElem r = zero();
    r.prec = std::min(a.prec, b.prec);
    for (size_t i = 0; i < r.d.size(); ++i) r.d[i] = subm(a.d[i], b.d[i], pN_);
    canonicalize(r);
    return r;
}

ConstElem ConstField::neg(const ConstElem& a) const {
    ConstElem r = zero();
    r.prec = a.prec;
    for (size_t i = 0; i < r.d.size(); ++i) r.d[i] = subm(0, a.d[i], pN_);
    canonicalize(r);
    return r;
}

void ConstField::wmul_acc(const u64* a, const u64* b, u64* acc) const {
    for (long long i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (long long j = 0; j < f; ++j) {
            if (b[j] == 0) continue;
            u64& t = acc[(size_t)(i + j)];
            t = addm(t, mulm(a[i], b[j], pN_), pN_);
        }
    }
}

std::vector<u64> ConstField::wreduce(std::vector<u64> t) const {
    // reduce a (2f-1)-digit block mod h (monic)
    for (long long i = 2 * f - 2; i >= f; --i) {
        u64 c = t[(size_t)i];
        if (c == 0) continue;
        for (long long k2 = 0; k2 < f; ++k2)
            t[(size_t)(i - f + k2)] =
                subm(t[(size_t)(i - f + k2)], mulm(c, h_[(size_t)k2], pN_), pN_);
        t[(size_t)i] = 0;
    }
    t.resize((size_t)f);
    return t;
}

ConstElem ConstField::mul(const ConstElem& a, const ConstElem& b) const {
    long long alo = eprime, ahi = -1, blo = eprime, bhi = -1;
    for (long long i = 0; i < eprime; ++i) {
        for (long long j = 0; j < f; ++j) {
            if (a.d[(size_t)(i * f + j)]) {
                alo = std::min(alo, i);
                ahi = std::max(ahi, i);
            }
            if (b.d[(size_t)(i * f + j)]) {
                blo = std::min(blo, i);
                bhi = std::max(bhi, i);
            }
        }
    }
    ConstElem r = zero();
    r.prec = std::min(a.prec, b.prec);
    if (ahi < 0 || bhi < 0) {
        canonicalize(r);
        return r;
    }
    long long width = 2 * eprime - 1;
    std::vector<u64> buf((size_t)(width * (2 * f - 1)), 0);
    for (long long i = alo; i <= ahi; ++i)
        for (long long j = blo; j <= bhi; ++j)
            wmul_acc(&a.d[(size_t)(i * f)], &b.d[(size_t)(j * f)],
                     &buf[(size_t)((i + j) * (2 * f - 1))]);
    std::vector<std::vector<u64>> blocks((size_t)width);
    for (long long i = 0; i < width; ++i) {
        std::vector<u64> t(buf.begin() + (size_t)(i * (2 * f - 1)),
                           buf.begin() + (size_t)((i + 1) * (2 * f - 1)));
        blocks[(size_t)i] = wreduce(std::move(t));
    }
    // reduce X-degree by the monic Eisenstein modulus
    for (long long i = width - 1; i >= eprime; --i) {
        for (long long j = 0; j < f; ++j) {
            u64 c = blocks[(size_t)i][(size_t)j];
            if (c == 0) continue;
            for (long long k2 = 0; k2 < eprime; ++k2)
                blocks[(size_t)(i - eprime + k2)][(size_t)j] =
                    subm(blocks[(size_t)(i - eprime + k2)][(size_t)j],
                         mulm(c, g_[(size_t)k2], pN_), pN_);
            blocks[(size_t)i][(size_t)j] = 0;
        }
    }
    for (long long i = 0; i < eprime; ++i)
        for (long long j = 0; j < f; ++j) r.d[(size_t)(i * f + j)] = blocks[(size_t)i][(size_t)j];
    canonicalize(r);
    return r;
}

ConstElem ConstField::pow(const ConstElem& a, long long e) const {
    if (e < 0) throw InvalidInput("pow needs e >= 0; invert units explicitly");
    ConstElem r = one();
    ConstElem base = a;
    r.prec = a.prec;
    canonicalize(r);
    while (e) {
        if (e & 1) r = mul(r, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return r;
}

ConstElem ConstField::unit_inv(const ConstElem& a) const {
    Fq::Elem res = residue(a);
    if (res == 0) throw InvalidInput("unit_inv: not a unit at working precision");
    ConstElem y = lift(k_residue->inv(res));
    ConstElem two = from_int(2);
    long long goal = std::min(a.prec, full_prec());
    long long have = 1;
    while (have < goal) {
        y = mul(y, sub(two, mul(a, y)));
        have *= 2;
    }
    y.prec = a.prec;
    canonicalize(y);
    if (!is_zero_at_prec(sub(mul(a, y), one())))
        throw InternalInconsistency("unit_inv: refinement did not converge");
    return y;
}

ConstElem ConstField::div_pi_pow(const ConstElem& a, long long k2) const {
    if (k2 < 0) throw InvalidInput("div_pi_pow needs k >= 0");
    ConstElem x = a;
    for (long long step = 0; step < k2; ++step) {
        // t = c_0 / g_0 in W, then (x - t g)/X drops every degree by one
        std::vector<u64> t((size_t)f, 0);
        for (long long j = 0; j < f; ++j) {
            u64 c = x.d[(size_t)j];
            if (c % (u64)p != 0)
                throw InvalidInput("div_pi_pow: element is not divisible by pi");
            t[(size_t)j] = mulm(c / (u64)p, g0_over_p_inv_, pN_);
        }
        ConstElem y = zero();
        for (long long i = 0; i < eprime; ++i) {
            for (long long j = 0; j < f; ++j) {
                u64 v = i + 1 < eprime ? x.d[(size_t)((i + 1) * f + j)] : 0;
                y.d[(size_t)(i * f + j)] =
                    subm(v, mulm(t[(size_t)j], g_[(size_t)(i + 1)], pN_), pN_);
            }
        }
        y.prec = std::min(x.prec, full_prec()) - 1;
        if (y.prec <= 0)
            throw PrecisionExhausted("div_pi_pow: precision exhausted");
        canonicalize(y);
        x = y;
    }
    return x;
}

bool ConstField::is_zero_at_prec(const ConstElem& a) const {
    for (u64 d : a.d)
        if (d) return false;
    return true;
}

ConstElem ConstField::clamp_prec(const ConstElem& a, long long prec) const {
    ConstElem r = a;
    r.prec = std::min(prec, full_prec());
    canonicalize(r);
    return r;
}

std::optional<Rat> ConstField::val(const ConstElem& a) const {
    long long best = -1;
    for (long long i = 0; i < eprime; ++i)
        for (long long j = 0; j < f; ++j) {
            u64 d = a.d[(size_t)(i * f + j)];
            if (!d) continue;
            long long cand = vp_of(d, p, N) * eprime + i;
            if (best < 0 || cand < best) best = cand;
        }
    if (best < 0) return std::nullopt;
    return rat(best, eprime);
}

Rat ConstField::certified_val(const ConstElem& a) const {
    auto v = val(a);
    if (!v) {
        if (a.prec >= full_prec())
            throw PrecisionExhausted("valuation of the ring zero is not finite");
        throw PrecisionExhausted("valuation not certified at working precision");
    }
    return *v;
}

bool ConstField::val_at_least(const ConstElem& a, const Rat& t) const {
    auto v = val(a);
    if (v) return *v >= t;
    if (rat(a.prec, eprime) >= t) return true;
    throw PrecisionExhausted("val_at_least: precision too small to decide");
}

Fq::Elem ConstField::residue(const ConstElem& a) const {
    Fq::Elem r = 0;
    Fq::Elem scale = 1;
    for (long long j = 0; j < f; ++j) {
        r += (Fq::Elem)(a.d[(size_t)j] % (u64)p) * scale;
        scale *= (Fq::Elem)p;
    }
    return r;
}

std::string ConstField::modulus_string() const {
    std::ostringstream os;
    bool first = true;
    for (long long i = eprime; i >= 0; --i) {
        u64 c = g_[(size_t)i];
        if (!c) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c != 1) os << c;
        if (i > 0) {
            if (c != 1) os << "*";
            os << "X";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string ConstField::to_string(const ConstElem& a) const {
    std::ostringstream os;
    bool first = true;
    for (long long i = 0; i < eprime; ++i)
        for (long long j = 0; j < f; ++j) {
            u64 d = a.d[(size_t)(i * f + j)];
            if (!d) continue;
            if (!first) os << " + ";
            first = false;
            os << d;
            if (i > 0) {
                os << "*X";
                if (i > 1) os << "^" << i;
            }
            if (j > 0) {
                os << "*Y";
                if (j > 1) os << "^" << j;
            }
        }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------- hensel

namespace {

ConstElem poly_eval(const std::vector<ConstElem>& c, const ConstElem& x) {
    const ConstField& F = *x.k;
    ConstElem acc = c.back();
    for (size_t i = c.size() - 1; i-- > 0;) acc = F.add(F.mul(acc, x), c[i]);
    return acc;
}

std::vector<ConstElem> poly_deriv(const std::vector<ConstElem>& c) {
    const ConstField& F = *c[0].k;
    std::vector<ConstElem> d;
    for (size_t i = 1; i < c.size(); ++i)
        d.push_back(F.mul(c[i], F.from_int((long long)i)));
    if (d.empty()) d.push_back(F.zero());
    return d;
}

long long lattice_units(const ConstField& F, const Rat& t) {
    Rat u = t * F.eprime;
    if (!is_integer(u)) throw InternalInconsistency("valuation outside lattice");
    return (long long)rat_num(u).convert_to<long long>();
}

}  // namespace

ConstElem hensel_root(const std::vector<ConstElem>& poly, const ConstElem& x0) {
    if (poly.size() < 2) throw InvalidInput("hensel_root needs degree >= 1");
    const ConstField& F = *x0.k;
    std::vector<ConstElem> dpoly = poly_deriv(poly);
    ConstElem x = x0;
    Rat last_vfx = rat(-1);
    for (int iter = 0; iter < 64; ++iter) {
        ConstElem fx = poly_eval(poly, x);
        if (F.is_zero_at_prec(fx)) return x;
        Rat vfx = F.certified_val(fx);
        ConstElem fdx = poly_eval(dpoly, x);
        if (F.is_zero_at_prec(fdx)) {
            if (iter == 0)
                throw NoConvergenceCertificate(
                    "hensel_root: derivative vanishes at the seed");
            throw InternalInconsistency("hensel_root: derivative collapsed");
        }
        Rat vfdx = F.certified_val(fdx);
        if (iter == 0) {
            if (!(vfx > 2 * vfdx))
                throw NoConvergenceCertificate(
                    "hensel_root: v(f(x0)) > 2 v(f'(x0)) fails; no quadratic basin");
        } else if (!(vfx > last_vfx)) {
            throw InternalInconsistency("hensel_root: residual stopped improving");
        }
        last_vfx = vfx;
        long long gu = lattice_units(F, vfdx);
        ConstElem step =
            F.mul(F.div_pi_pow(fx, gu), F.unit_inv(F.div_pi_pow(fdx, gu)));
        x = F.sub(x, step);
    }
    throw InternalInconsistency("hensel_root: iteration budget exceeded");
}

// ---------------------------------------------------------------- builders

void ConstField::build_tables() {
    pN_ = 1;
    for (long long i = 0; i < N; ++i) pN_ *= (u64)p;
    u64 g0 = g_[0];
    if (g0 % (u64)p != 0 || (g0 / (u64)p) % (u64)p == 0)
        throw InternalInconsistency("modulus is not Eisenstein at p");
    g0_over_p_inv_ = invm(g0 / (u64)p, pN_);
}

void ConstField::finish_construction() {
    if (n == 1) {
        // zeta_p from the root lambda of sum_j C(p,j+1) T^j near pi^(e'/(p-1));
        // the seed satisfies t0^(p-1) = -p exactly, so v(G(t0)) = 1 + 1/(p-1).
        std::vector<ConstElem> G;
        BigInt c = BigInt(p);
        for (long long j = 0; j < p; ++j) {
            G.push_back(from_int((long long)(c % BigInt(pN_)).convert_to<long long>()));
            c = c * BigInt(p - 1 - j) / BigInt(j + 2);
        }
        ConstElem t = pi_t(rat(eprime / (p - 1), eprime));
        std::vector<ConstElem> Gd = poly_deriv(G);
        Rat last = rat(-1);
        for (int polish = 0; polish < 10; ++polish) {
            ConstElem Gt = poly_eval(G, t);
            if (is_zero_at_prec(Gt)) break;
            Rat vG = certified_val(Gt);
            ConstElem Gdt = poly_eval(Gd, t);
            if (is_zero_at_prec(Gdt))
                throw NoConvergenceCertificate("constants: Phi_p' vanished at seed");
            Rat vGd = certified_val(Gdt);
            if (vG > 2 * vGd) {
                t = hensel_root(G, t);
                break;
            }
            if (polish > 0 && !(vG > last))
                throw NoConvergenceCertificate(
                    "constants: residual not improving while seeking zeta_p");
            last = vG;
            long long gu = lattice_units(*this, vGd);
            t = sub(t, mul(div_pi_pow(Gt, gu), unit_inv(div_pi_pow(Gdt, gu))));
        }
        lambda_ = t;
        zeta_p_ = add(one(), lambda_);
        zeta_pn_ = zeta_p_;
    } else {
        long long jj = std::max(m, n - 1) - (n - 1);
        long long pj = 1;
        for (long long i = 0; i < jj; ++i) pj *= p;
        ConstElem z = add(one(), pi_t(rat(pj, eprime)));
        zeta_pn_ = z;
        long long pn1 = 1;
        for (long long i = 0; i < n - 1; ++i) pn1 *= p;
        zeta_p_ = pow(z, pn1);
        lambda_ = sub(zeta_p_, one());
    }
    if (certified_val(lambda_) != rat(1, p - 1))
        throw InternalInconsistency("constants: v(zeta_p - 1) != 1/(p-1)");
    // Phi_p(zeta_p) = 0 at working precision
    ConstElem phi = zero();
    for (long long k2 = 0; k2 < p; ++k2) phi = add(phi, pow(zeta_p_, k2));
    if (!is_zero_at_prec(phi))
        throw InternalInconsistency("constants: zeta_p is not a p-th root of unity");
    // the pinned uniformizer realizes the normalized system
    if (!val_at_least(sub(pi_t(rat(eprime / (p - 1), eprime)), lambda_),
                      rat(1, p - 1) + rat(1, eprime)))
        throw InternalInconsistency("constants: pi_{1/(p-1)} != lambda mod higher");
    if (!val_at_least(add(pi_t(rat(1)), from_int(p)), rat(1) + rat(1, eprime)))
        throw InternalInconsistency("constants: pi_1 != -p mod higher");
}

ConstFieldPtr build_constants(long long p, long long m, long long n, long long N,
                              long long f) {
    if (!is_prime_ll(p)) throw InvalidInput("p must be prime");
    if (m < 0) throw InvalidInput("m must be >= 0");
    if (n < 1) throw InvalidInput("n must be >= 1");
    if (N < 4) throw InvalidInput("working precision must be at least 4");
    if (f < 1) throw InvalidInput("f must be >= 1");
    const long long margin = 8;
    long long Nint = N + margin;
    u64 pN = 1;
    for (long long i = 0; i < Nint; ++i) {
        if (pN > (u64(1) << 62) / (u64)p)
            throw InvalidInput("p^(N+margin) exceeds the digit budget; lower prec");
        pN *= (u64)p;
    }
    long long expn = n == 1 ? m : std::max(m, n - 1);
    long long eprime = p - 1;
    for (long long i = 0; i < expn; ++i) {
        if (eprime > 4096 / p) throw InvalidInput("e' too large for desk scale");
        eprime *= p;
    }
    if (eprime * f > 8192) throw InvalidInput("e'*f too large for desk scale");

    auto F = std::shared_ptr<ConstField>(new ConstField());
    F->p = p;
    F->m = m;
    F->n = n;
    F->f = f;
    F->eprime = eprime;
    F->N_user = N;
    F->N = Nint;
    F->k_residue = make_fq(p, f);
    F->h_.assign((size_t)f + 1, 0);
    {
        auto hm = F->k_residue->modulus();
        for (size_t i = 0; i < hm.size(); ++i) F->h_[i] = (u64)hm[i];
    }
    F->g_.assign((size_t)eprime + 1, 0);
    if (n == 1) {
        F->g_[0] = (u64)p;
        F->g_[(size_t)eprime] = 1;
    } else {
        // Phi_{p^n}(1 + T), then T = X^(p^j)
        long long jj = std::max(m, n - 1) - (n - 1);
        long long pj = 1;
        for (long long i = 0; i < jj; ++i) pj *= p;
        long long pn1 = 1;
        for (long long i = 0; i < n - 1; ++i) pn1 *= p;
        long long deg = (p - 1) * pn1;
        std::vector<BigInt> coef((size_t)deg + 1, BigInt(0));
        for (long long k2 = 0; k2 < p; ++k2) {
            long long a = k2 * pn1;
            BigInt b(1);
            for (long long i = 0; i <= a; ++i) {
                coef[(size_t)i] += b;
                b = b * BigInt(a - i) / BigInt(i + 1);
            }
        }
        BigInt mod(pN);
        for (long long i = 0; i <= deg; ++i)
            F->g_[(size_t)(i * pj)] =
                (u64)(coef[(size_t)i] % mod).convert_to<u64>();
        for (long long i = 0; i < eprime; ++i)
            if (F->g_[(size_t)i] % (u64)p != 0)
                throw InternalInconsistency("cyclotomic modulus not Eisenstein");
    }
    F->build_tables();
    F->finish_construction();
    return F;
}

ConstFieldPtr ConstField::build(long long p, long long m, long long n, long long N,
                                long long f) {
    return build_constants(p, m, n, N, f);
}

// ---------------------------------------------------------------- pi system

PiSystem::PiSystem(ConstFieldPtr field) : k(field), base(field->pi()) {}

PiSystem::PiSystem(ConstFieldPtr field, ConstElem base_elem)
    : k(field), base(std::move(base_elem)) {
    if (k->certified_val(base) != rat(1, k->eprime))
        throw InvalidInput("pi system base must have valuation 1/e'");
}

ConstElem PiSystem::pi(const Rat& t) const {
    if (t < 0) throw InvalidInput("pi_t needs t >= 0");
    if (!k->lattice().contains(t))
        throw InvalidInput("pi_t: t not in the value group");
    long long kk = (long long)rat_num(t * k->eprime).convert_to<long long>();
    return k->pow(base, kk);
}

PiSystemReport verify_pi_system(const PiSystem& sys) {
    const ConstField& F = *sys.k;
    PiSystemReport rep;
    std::ostringstream detail;
    std::vector<Rat> ts = {rat(1, F.eprime), rat(2, F.eprime), rat(1, F.p - 1),
                           rat(1), rat(F.eprime + 1, F.eprime), rat(2)};
    rep.valuations_ok = true;
    for (const Rat& t : ts) {
        if (F.certified_val(sys.pi(t)) != t) {
            rep.valuations_ok = false;
            detail << "v(pi_" << rat_str(t) << ") != " << rat_str(t) << "; ";
        }
    }
    rep.powers_ok = true;
    std::vector<std::pair<Rat, long long>> pows = {
        {rat(1, F.eprime), 2}, {rat(1, F.eprime), 3}, {rat(1, F.p - 1), 2}, {rat(1), 2}};
    for (auto& [t, k2] : pows) {
        ConstElem lhs = F.pow(sys.pi(t), k2);
        ConstElem rhs = sys.pi(t * k2);
        if (!(lhs == rhs)) {
            rep.powers_ok = false;
            detail << "pi_" << rat_str(t) << "^" << k2 << " != pi_"
                   << rat_str(t * k2) << "; ";
        }
    }
    Rat need3 = rat(1, F.p - 1) + rat(1, F.eprime);
    rep.lambda_ok =
        F.val_at_least(F.sub(sys.pi(rat(1, F.p - 1)), F.lambda()), need3);
    if (!rep.lambda_ok) detail << "pi_{1/(p-1)} != lambda mod P^" << rat_str(need3) << "; ";
    Rat need4 = rat(1) + rat(1, F.eprime);
    rep.minus_p_ok =
        F.val_at_least(F.add(sys.pi(rat(1)), F.from_int(F.p)), need4);
    if (!rep.minus_p_ok) detail << "pi_1 != -p mod P^" << rat_str(need4) << "; ";
    rep.detail = detail.str();
    return rep;
}

// ---------------------------------------------------------------- extension

ConstElem ConstEmbedding::apply(const ConstElem& a) const {
    if (a.k != from) throw InvalidInput("embedding applied to a foreign element");
    const ConstField& A = *from;
    const ConstField& B = *to;
    long long r = B.eprime / A.eprime;
    std::vector<ConstElem> ypow;
    ypow.push_back(B.one());
    for (long long j = 1; j < A.f; ++j) ypow.push_back(B.mul(ypow.back(), y_image));
    ConstElem acc = B.zero();
    ConstElem xpow = B.one();
    for (long long i = 0; i < A.eprime; ++i) {
        ConstElem wsum = B.zero();
        bool any = false;
        for (long long j = 0; j < A.f; ++j) {
            u64 d = a.d[(size_t)(i * A.f + j)];
            if (!d) continue;
            any = true;
            wsum = B.add(wsum, B.mul(B.from_int((long long)d), ypow[(size_t)j]));
        }
        if (any) acc = B.add(acc, B.mul(wsum, xpow));
        if (i + 1 < A.eprime) xpow = B.mul(xpow, x_image);
    }
    return B.clamp_prec(acc, a.prec * r);
}

namespace {

std::vector<Fq::Elem> identity_residue_map(const ConstFieldPtr& k) {
    std::vector<Fq::Elem> t((size_t)k->residue_field()->q());
    for (size_t i = 0; i < t.size(); ++i) t[i] = (Fq::Elem)i;
    return t;
}

ConstElem ygen_or_one(const ConstFieldPtr& k) {
    if (k->f == 1) return k->one();
    ConstElem r = k->zero();
    r.d[1] = 1;
    return r;
}

ConstEmbedding make_e_embedding(const ConstFieldPtr& A, const ConstFieldPtr& B) {
    long long r = B->eprime / A->eprime;
    ConstEmbedding e{A, B, B->pow(B->pi(), r), ygen_or_one(B),
                     identity_residue_map(A)};
    if (!(e.apply(A->zeta_pn()) == B->zeta_pn()))
        throw InternalInconsistency("extension does not fix zeta_{p^n}");
    return e;
}

ConstEmbedding make_f_embedding(const ConstFieldPtr& A, const ConstFieldPtr& B) {
    ConstEmbedding e{A, B, B->pi(), B->one(), identity_residue_map(A)};
    if (A->f > 1 || B->f > A->f) {
        e.residue_map = embedding_table(*A->residue_field(), *B->residue_field());
        if (A->f > 1) {
            // lift the residue embedding of Y to a root of the old h
            auto hm = A->residue_field()->modulus();
            std::vector<ConstElem> H;
            for (auto c : hm) H.push_back(B->from_int((long long)c));
            Fq::Elem gen = 0;
            {
                // packed generator of the old residue field is p
                gen = (Fq::Elem)A->p;
            }
            ConstElem seed = B->lift(e.residue_map[(size_t)gen]);
            e.y_image = hensel_root(H, seed);
        }
    }
    if (!(e.apply(A->zeta_pn()) == B->zeta_pn()))
        throw InternalInconsistency("residue extension does not fix zeta_{p^n}");
    return e;
}

ConstEmbedding compose(const ConstEmbedding& e1, const ConstEmbedding& e2) {
    ConstEmbedding e{e1.from, e2.to, e2.apply(e1.x_image), e2.apply(e1.y_image),
                     {}};
    e.residue_map.resize(e1.residue_map.size());
    for (size_t i = 0; i < e1.residue_map.size(); ++i)
        e.residue_map[i] = e2.residue_map[(size_t)e1.residue_map[i]];
    return e;
}

}  // namespace

std::pair<ConstFieldPtr, ConstEmbedding> extend_constants(const ConstFieldPtr& k,
                                                          long long new_eprime,
                                                          long long new_f) {
    if (new_eprime < k->eprime || new_f < k->f)
        throw InvalidInput("constant extension cannot shrink e' or f");
    if (new_f % k->f != 0) throw InvalidInput("new f must be a multiple of old f");
    if (new_eprime % (k->p - 1) != 0)
        throw InvalidInput("new e' must be (p-1) times a p-power");
    long long q = new_eprime / (k->p - 1);
    long long M = 0;
    while (q % k->p == 0) {
        q /= k->p;
        ++M;
    }
    if (q != 1)
        throw InvalidInput("new e' must be (p-1) times a p-power");
    if (k->n >= 2 && M < k->n - 1)
        throw InvalidInput("new e' is below the base requirement for zeta_{p^n}");
    long long m_new = M;

    ConstFieldPtr cur = k;
    ConstEmbedding total{k, k, k->pi(), ygen_or_one(k), identity_residue_map(k)};
    if (new_f > k->f) {
        ConstFieldPtr B = build_constants(k->p, k->m, k->n, k->N_user, new_f);
        total = compose(total, make_f_embedding(cur, B));
        cur = B;
    }
    if (new_eprime > cur->eprime) {
        ConstFieldPtr C = build_constants(k->p, m_new, k->n, k->N_user, new_f);
        total = compose(total, make_e_embedding(cur, C));
        cur = C;
    }
    PiSystemReport rep = verify_pi_system(PiSystem(cur));
    if (!rep.all())
        throw InternalInconsistency("extended pi system failed verification: " +
                                    rep.detail);
    return {cur, total};
}

}  // namespace swanlab
