#include "swanlab/fq.hpp"

#include <algorithm>

namespace swanlab {

namespace {

// Construction-time polynomial helpers over F_p (dense, low to high).
using PPoly = std::vector<int>;

void ptrim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly pmod(PPoly a, const PPoly& m, long long p) {
    // m monic.
    while (a.size() >= m.size()) {
        int lead = a.back();
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) {
            long long v = a[off + i] - static_cast<long long>(lead) * m[i];
            a[off + i] = static_cast<int>(((v % p) + p) % p);
        }
        ptrim(a);
        if (a.size() > off + m.size() - 1) a.resize(off + m.size() - 1);
        ptrim(a);
    }
    return a;
}

PPoly pmul(const PPoly& a, const PPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    PPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = static_cast<int>(
                (c[i + j] + static_cast<long long>(a[i]) * b[j]) % p);
    ptrim(c);
    return c;
}

bool irreducible(const PPoly& h, long long p) {
    // Trial division by every monic polynomial of degree 1..deg(h)/2.
    long long deg = static_cast<long long>(h.size()) - 1;
    for (long long d = 1; 2 * d <= deg; ++d) {
        long long count = 1;
        for (long long i = 0; i < d; ++i) count *= p;
        for (long long idx = 0; idx < count; ++idx) {
            PPoly cand(d + 1, 0);
            long long n = idx;
            for (long long i = 0; i < d; ++i) {
                cand[i] = static_cast<int>(n % p);
                n /= p;
            }
            cand[d] = 1;
            if (pmod(h, cand, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace

Fq::Fq(long long p, long long f) : p_(p), f_(f) {
    if (p < 2 || f < 1) throw InvalidInput("finite field needs p >= 2, f >= 1");
    q_ = 1;
    for (long long i = 0; i < f; ++i) {
        q_ *= p;
        if (q_ > (1 << 20)) throw InvalidInput("residue field too large");
    }

    // Defining modulus: lexicographically first monic irreducible of degree f
    // with nonzero constant term.
    if (f == 1) {
        mod_ = {0, 1};
    } else {
        long long count = 1;
        for (long long i = 0; i < f; ++i) count *= p;
        bool found = false;
        for (long long idx = 0; idx < count && !found; ++idx) {
            PPoly cand(f + 1, 0);
            long long n = idx;
            for (long long i = 0; i < f; ++i) {
                cand[i] = static_cast<int>(n % p);
                n /= p;
            }
            cand[f] = 1;
            if (cand[0] == 0) continue;
            if (irreducible(cand, p)) {
                mod_ = cand;
                found = true;
            }
        }
        if (!found) throw InternalInconsistency("no irreducible polynomial");
    }

    auto pack = [&](const PPoly& a) {
        long long v = 0;
        for (size_t i = a.size(); i-- > 0;) v = v * p + a[i];
        return static_cast<Elem>(v);
    };
    auto unpack = [&](Elem a) {
        PPoly out;
        long long n = a;
        while (n) {
            out.push_back(static_cast<int>(n % p));
            n /= p;
        }
        return out;
    };

    // Multiplicative generator: first element of full order q - 1.
    auto order_of = [&](Elem a) {
        PPoly base = unpack(a), acc = {1};
        for (long long k = 1; k <= q_; ++k) {
            acc = pmod(pmul(acc, base, p), mod_, p);
            if (pack(acc) == 1) return k;
        }
        return q_ + 1;
    };
    gen_ = 0;
    for (Elem a = 2; a < q_; ++a) {
        if (order_of(a) == q_ - 1) {
            gen_ = a;
            break;
        }
    }
    if (q_ == 2) gen_ = 1;
    if (gen_ == 0) throw InternalInconsistency("no multiplicative generator");

    exp_.assign(q_ - 1, 0);
    log_.assign(q_, -1);
    PPoly base = unpack(gen_), acc = {1};
    for (long long i = 0; i < q_ - 1; ++i) {
        Elem v = pack(acc);
        exp_[i] = v;
        log_[v] = i;
        acc = pmod(pmul(acc, base, p), mod_, p);
    }
}

Fq::Elem Fq::add(Elem a, Elem b) const {
    Elem out = 0;
    long long mul = 1;
    while (a || b) {
        long long d = (a % p_ + b % p_) % p_;
        out += static_cast<Elem>(d * mul);
        mul *= p_;
        a /= static_cast<Elem>(p_);
        b /= static_cast<Elem>(p_);
    }
    return out;
}

Fq::Elem Fq::neg(Elem a) const {
    Elem out = 0;
    long long mul = 1;
    while (a) {
        long long d = (p_ - a % p_) % p_;
        out += static_cast<Elem>(d * mul);
        mul *= p_;
        a /= static_cast<Elem>(p_);
    }
    return out;
}

Fq::Elem Fq::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Fq::Elem Fq::mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

Fq::Elem Fq::inv(Elem a) const {
    if (a == 0) throw InvalidInput("inverse of zero in F_q");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Fq::Elem Fq::div(Elem a, Elem b) const { return mul(a, inv(b)); }

Fq::Elem Fq::pow(Elem a, long long e) const {
    if (a == 0) {
        if (e < 0) throw InvalidInput("negative power of zero");
        return e == 0 ? 1 : 0;
    }
    long long m = ((e % (q_ - 1)) + (q_ - 1)) % (q_ - 1);
    return exp_[(log_[a] * m) % (q_ - 1)];
}

Fq::Elem Fq::from_int(long long n) const {
    return static_cast<Elem>(((n % p_) + p_) % p_);
}

Fq::Elem Fq::frob(Elem a) const { return pow(a, p_); }

Fq::Elem Fq::pth_root(Elem a) const {
    if (a == 0) return 0;
    long long e = 1;
    for (long long i = 0; i < f_ - 1; ++i) e *= p_;  // p^(f-1)
    return pow(a, e);
}

std::string Fq::to_string(Elem a) const {
    if (f_ == 1) return std::to_string(a);
    if (a == 0) return "0";
    if (a == 1) return "1";
    long long k = log_[a];
    if (k == 1) return "g";
    return "g^" + std::to_string(k);
}

long long Fq::dlog(Elem a) const {
    if (a == 0) throw InvalidInput("dlog of zero");
    return log_[a];
}

FqPtr make_fq(long long p, long long f) { return std::make_shared<Fq>(p, f); }

std::vector<Fq::Elem> embedding_table(const Fq& small, const Fq& big) {
    if (small.p() != big.p() || big.f() % small.f() != 0)
        throw InvalidInput("no embedding between these fields");
    // Root of the small modulus in the big field, smallest packed index.
    Fq::Elem root = -1;
    for (Fq::Elem x = 0; x < big.q(); ++x) {
        Fq::Elem acc = 0;
        for (size_t i = small.modulus().size(); i-- > 0;)
            acc = big.add(big.mul(acc, x), big.from_int(small.modulus()[i]));
        if (acc == 0) {
            root = x;
            break;
        }
    }
    if (root < 0) throw InternalInconsistency("modulus has no root upstairs");
    std::vector<Fq::Elem> table(small.q());
    for (Fq::Elem a = 0; a < small.q(); ++a) {
        Fq::Elem acc = 0, rp = 1;
        long long n = a;
        while (n) {
            acc = big.add(acc, big.mul(big.from_int(n % small.p()), rp));
            rp = big.mul(rp, root);
            n /= small.p();
        }
        table[a] = acc;
    }
    return table;
}

}  // namespace swanlab
