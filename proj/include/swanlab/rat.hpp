#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "swanlab/errors.hpp"

namespace swanlab {

// Exact rational arithmetic, always in lowest terms with positive
// denominator. Expression templates are off so Rat behaves as a plain value
// type (ternaries, initializer lists, auto all work naturally).
using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rat rat(long long n, long long d = 1) {
    if (d == 0) throw InvalidInput("rational with zero denominator");
    return Rat(n, d);
}

BigInt rat_num(const Rat& r);
BigInt rat_den(const Rat& r);

bool is_integer(const Rat& r);

// Largest integer <= r.
BigInt rat_floor(const Rat& r);

// Serialization: integers as "n", everything else as "num/den".
std::string rat_str(const Rat& r);

// Inverse of rat_str; also accepts optional whitespace. Throws InvalidInput.
Rat parse_rat(const std::string& s);

// The value lattice Lambda = (1/e) Z of a local field whose valuation is
// normalized by v(p) = 1.
struct ValGroup {
    long long e;

    explicit ValGroup(long long e_) : e(e_) {
        if (e <= 0) throw InvalidInput("value lattice needs positive index");
    }

    bool contains(const Rat& t) const { return is_integer(t * e); }
    Rat gen() const { return Rat(1, e); }
};

// Upper ramification breaks delta_1 < ... < delta_r of a cyclic p^r
// subextension; the companion of every epsilon / Herbrand computation.
struct BreakSequence {
    long long p;
    std::vector<Rat> breaks;

    BreakSequence(long long p_, std::vector<Rat> breaks_);
};

}  // namespace swanlab
