#include "swanlab/rat.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace swanlab {

BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

bool is_integer(const Rat& r) { return rat_den(r) == 1; }

BigInt rat_floor(const Rat& r) {
    BigInt n = rat_num(r), d = rat_den(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

std::string rat_str(const Rat& r) { return r.str(); }

Rat parse_rat(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvalidInput("empty rational literal");
    std::string core = s.substr(b, e - b + 1);
    // cpp_rational's string constructor accepts "a/b" and "a" but aborts the
    // process on garbage in some configurations, so validate first.
    size_t slash = core.find('/');
    auto is_int_literal = [](const std::string& t) {
        if (t.empty()) return false;
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    try {
        if (slash == std::string::npos) {
            if (!is_int_literal(core))
                throw InvalidInput("bad rational literal: " + s);
            return Rat(BigInt(core));
        }
        std::string ns = core.substr(0, slash), ds = core.substr(slash + 1);
        if (!is_int_literal(ns) || !is_int_literal(ds))
            throw InvalidInput("bad rational literal: " + s);
        BigInt d(ds);
        if (d == 0) throw InvalidInput("zero denominator: " + s);
        return Rat(BigInt(ns), d);
    } catch (const std::exception&) {
        throw InvalidInput("bad rational literal: " + s);
    }
}

BreakSequence::BreakSequence(long long p_, std::vector<Rat> breaks_)
    : p(p_), breaks(std::move(breaks_)) {
    if (p < 2) throw InvalidInput("break sequence needs a prime p");
    if (breaks.empty()) throw InvalidInput("empty break sequence");
    Rat prev = 0;
    for (const Rat& b : breaks) {
        if (b <= prev)
            throw InvalidInput("breaks must be strictly increasing, positive");
        prev = b;
    }
}

}  // namespace swanlab
