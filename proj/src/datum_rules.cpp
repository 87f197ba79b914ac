#include "swanlab/datum_rules.hpp"

#include <utility>

#include "swanlab/io.hpp"

namespace swanlab {

namespace {

bool is_prime_ll(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Structural invariants of the type itself; clause records only make sense
// on top of these.
void require_well_formed(const RamDatum& d) {
    if (!is_prime_ll(d.p)) throw InvalidInput("datum needs a prime p");
    if (d.pairs.empty()) throw InvalidInput("datum has no pairs");
    Rat last = 0;
    for (const auto& pr : d.pairs) {
        if (pr.omega.is_zero())
            throw InvalidInput("zero differential in datum");
        if (pr.omega.a.field()->p() != d.p)
            throw InvalidInput("form lives over the wrong characteristic");
        if (!(pr.delta > last))
            throw InvalidInput("breaks must increase strictly from 0");
        last = pr.delta;
    }
}

std::string eq_witness(const std::string& lhs_name, const DiffForm& lhs,
                       const std::string& rhs_name, const DiffForm& rhs) {
    return lhs_name + " = " + diff_str(lhs) + ", " + rhs_name + " = " +
           diff_str(rhs);
}

}  // namespace

bool operator==(const RamPair& a, const RamPair& b) {
    return a.delta == b.delta && a.omega == b.omega;
}

bool operator==(const RamDatum& a, const RamDatum& b) {
    if (a.p != b.p || a.pairs.size() != b.pairs.size()) return false;
    for (size_t i = 0; i < a.pairs.size(); ++i)
        if (!(a.pairs[i] == b.pairs[i])) return false;
    return true;
}

bool eq_up_to_scalar(const RamDatum& a, const RamDatum& b) {
    if (a.p != b.p || a.pairs.size() != b.pairs.size()) return false;
    if (a.pairs.empty()) return true;
    for (size_t i = 0; i < a.pairs.size(); ++i)
        if (a.pairs[i].delta != b.pairs[i].delta) return false;
    if (a.pairs[0].omega.is_zero() || b.pairs[0].omega.is_zero())
        return a.pairs[0].omega.is_zero() == b.pairs[0].omega.is_zero();
    RatFun c = b.pairs[0].omega.a / a.pairs[0].omega.a;
    if (!c.is_constant() || c.is_zero()) return false;
    for (size_t i = 0; i < a.pairs.size(); ++i)
        if (!(c * a.pairs[i].omega == b.pairs[i].omega)) return false;
    return true;
}

void ValidationReport::record(const std::string& clause, bool ok,
                              const std::string& witness) {
    conditions.push_back({clause, ok, witness});
    pass = pass && ok;
}

ValidationReport validate_datum(const RamDatum& d) {
    require_well_formed(d);
    ValidationReport r;
    const Rat cap = rat(d.p, d.p - 1);
    const Rat split = rat(1, d.p - 1);

    const RamPair& first = d.pairs[0];
    r.record("i.window", first.delta <= cap,
             "delta_1 = " + rat_str(first.delta) + ", cap = " + rat_str(cap));
    if (first.delta == cap) {
        DiffForm c1 = cartier(first.omega);
        r.record("i.a", c1 == first.omega,
                 eq_witness("C(omega_1)", c1, "omega_1", first.omega));
    } else if (first.delta < cap) {
        DiffForm c1 = cartier(first.omega);
        r.record("i.b", c1.is_zero(),
                 eq_witness("C(omega_1)", c1, "0",
                            DiffForm::zero(first.omega.a.field())));
    }

    for (size_t i = 1; i < d.pairs.size(); ++i) {
        const RamPair& prev = d.pairs[i - 1];
        const RamPair& cur = d.pairs[i];
        const std::string nth = std::to_string(i + 1);
        if (prev.delta > split) {
            bool ok =
                cur.delta == prev.delta + 1 && cur.omega == -prev.omega;
            r.record("ii",
                     ok,
                     "delta_" + nth + " = " + rat_str(cur.delta) +
                         " vs previous + 1 = " + rat_str(prev.delta + 1) +
                         "; " +
                         eq_witness("omega_" + nth, cur.omega,
                                    "-previous", -prev.omega));
            continue;
        }
        const Rat floor = prev.delta * d.p;
        bool window = floor <= cur.delta && cur.delta <= cap;
        r.record("iii.window", window,
                 "delta_" + nth + " = " + rat_str(cur.delta) + " in [" +
                     rat_str(floor) + ", " + rat_str(cap) + "]");
        if (!window) continue;
        DiffForm c = cartier(cur.omega);
        if (cur.delta == floor && cur.delta < cap) {
            r.record("iii.a", c == prev.omega,
                     eq_witness("C(omega_" + nth + ")", c, "previous omega",
                                prev.omega));
        } else if (cur.delta > floor && cur.delta < cap) {
            r.record("iii.b", c.is_zero(),
                     eq_witness("C(omega_" + nth + ")", c, "0",
                                DiffForm::zero(cur.omega.a.field())));
        } else if (cur.delta > floor) {
            r.record("iii.c", c == cur.omega,
                     eq_witness("C(omega_" + nth + ")", c, "omega_" + nth,
                                cur.omega));
        } else {
            r.record("iii.d", c == cur.omega + prev.omega,
                     eq_witness("C(omega_" + nth + ")", c,
                                "omega_" + nth + " + previous",
                                cur.omega + prev.omega));
        }
    }
    return r;
}

bool operator==(const BreakSeqCharP& a, const BreakSeqCharP& b) {
    return a.p == b.p && a.u == b.u;
}

ValidationReport validate_charp_breaks(const BreakSeqCharP& b) {
    if (!is_prime_ll(b.p)) throw InvalidInput("break sequence needs a prime p");
    if (b.u.empty()) throw InvalidInput("empty break sequence");
    long long last = 0;
    for (long long v : b.u) {
        if (v <= last)
            throw InvalidInput("breaks must increase strictly from 0");
        last = v;
    }
    ValidationReport r;
    r.record("i", b.u[0] % b.p != 0, "u_1 = " + std::to_string(b.u[0]));
    for (size_t i = 1; i < b.u.size(); ++i) {
        long long cur = b.u[i], prev = b.u[i - 1];
        bool ok = cur == b.p * prev || (cur > b.p * prev && cur % b.p != 0);
        r.record("ii", ok,
                 "u_" + std::to_string(i + 1) + " = " + std::to_string(cur) +
                     " vs p u_" + std::to_string(i) + " = " +
                     std::to_string(b.p * prev));
    }
    return r;
}

std::vector<BreakSeqCharP> enumerate_charp_breaks(long long p, int n,
                                                  long long u_max) {
    if (!is_prime_ll(p)) throw InvalidInput("enumeration needs a prime p");
    std::vector<BreakSeqCharP> out;
    if (n <= 0 || u_max <= 0) return out;
    std::vector<long long> cur;
    // Depth-first with ascending candidates is lexicographic by itself.
    auto rec = [&](auto&& self) -> void {
        if ((int)cur.size() == n) {
            out.push_back({p, cur});
            return;
        }
        long long lo = cur.empty() ? 1 : p * cur.back();
        for (long long v = lo; v <= u_max; ++v) {
            bool ok = cur.empty() ? v % p != 0
                                  : (v == lo || (v > lo && v % p != 0));
            if (!ok) continue;
            cur.push_back(v);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return out;
}

ValidationReport check_hyodo(const RamDatum& d) {
    require_well_formed(d);
    if (d.pairs.size() != 2)
        throw InvalidInput("the two-break window needs exactly two pairs");
    const Rat d1 = d.pairs[0].delta, d2 = d.pairs[1].delta;
    const Rat split = rat(1, d.p - 1);
    const Rat hi = rat(d.p, d.p - 1) + d1 * rat(d.p - 1, d.p);
    ValidationReport r;
    if (d1 >= split)
        r.record("a", d1 + 1 <= d2 && d2 <= hi,
                 "delta_2 = " + rat_str(d2) + " in [" + rat_str(d1 + 1) +
                     ", " + rat_str(hi) + "]");
    if (d1 <= split)
        r.record("b", d.p * d1 <= d2 && d2 <= hi,
                 "delta_2 = " + rat_str(d2) + " in [" + rat_str(d.p * d1) +
                     ", " + rat_str(hi) + "]");
    return r;
}

std::vector<RamDatum> enumerate_valid_data(const FqPtr& F, long long p,
                                           const Rat& step,
                                           int degree_bound) {
    if (!is_prime_ll(p)) throw InvalidInput("enumeration needs a prime p");
    if (F->p() != p)
        throw InvalidInput("palette field has the wrong characteristic");
    if (!(step > 0)) throw InvalidInput("grid step must be positive");
    if (degree_bound < 0) throw InvalidInput("negative degree bound");

    const Rat cap = rat(p, p - 1);
    const Rat split = rat(1, p - 1);

    std::vector<Rat> grid;
    for (Rat t = step; t <= cap; t += step) grid.push_back(t);

    // Coefficient palette {0, 1, -1} (just {0, 1} at p = 2), enumerated as
    // base-b counters over the s-degrees; Cartier images precomputed once.
    const long long base = p == 2 ? 2 : 3;
    long long total = 1;
    for (int i = 0; i <= degree_bound; ++i) {
        if (total > 100000 / base)
            throw InvalidInput("palette too large; lower the degree bound");
        total *= base;
    }
    std::vector<DiffForm> palette;
    std::vector<DiffForm> pal_cartier;
    for (long long code = 1; code < total; ++code) {
        std::vector<Fq::Elem> coeffs((size_t)degree_bound + 1, F->zero());
        long long rest = code;
        for (int i = 0; i <= degree_bound; ++i) {
            long long digit = rest % base;
            rest /= base;
            coeffs[(size_t)i] = digit == 2 ? F->from_int(-1)
                                           : F->from_int(digit);
        }
        DiffForm w(RatFun::from_poly(FqPoly(F, std::move(coeffs))));
        pal_cartier.push_back(cartier(w));
        palette.push_back(std::move(w));
    }

    std::vector<RamDatum> out;
    auto keep_if_valid = [&](RamDatum d) {
        if (validate_datum(d).pass) out.push_back(std::move(d));
    };

    // Length 1.
    for (const Rat& d1 : grid)
        for (const DiffForm& w1 : palette)
            keep_if_valid({p, {{d1, w1}}});

    // Length 2: candidates are narrowed by the precomputed Cartier images
    // (pure speed; validate_datum remains the filter of record).
    for (const Rat& d1 : grid) {
        for (size_t i1 = 0; i1 < palette.size(); ++i1) {
            const DiffForm& w1 = palette[i1];
            bool first_ok = d1 == cap ? pal_cartier[i1] == w1
                                      : pal_cartier[i1].is_zero();
            if (!first_ok) continue;
            if (d1 > split) {
                keep_if_valid({p, {{d1, w1}, {d1 + 1, -w1}}});
                continue;
            }
            for (const Rat& d2 : grid) {
                if (d2 < p * d1 || d2 > cap) continue;
                for (size_t i2 = 0; i2 < palette.size(); ++i2) {
                    const DiffForm& c = pal_cartier[i2];
                    bool match;
                    if (d2 == p * d1 && d2 < cap)
                        match = c == w1;
                    else if (d2 > p * d1 && d2 < cap)
                        match = c.is_zero();
                    else if (d2 > p * d1)
                        match = c == palette[i2];
                    else
                        match = c == palette[i2] + w1;
                    if (match)
                        keep_if_valid({p, {{d1, w1}, {d2, palette[i2]}}});
                }
            }
        }
    }
    return out;
}

}  // namespace swanlab
