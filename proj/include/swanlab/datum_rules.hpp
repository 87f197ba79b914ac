#pragma once

#include <string>
#include <vector>

#include "swanlab/rat.hpp"
#include "swanlab/ratfun.hpp"

namespace swanlab {

// One ramification break with its differential: delta > 0 and a nonzero
// a ds/s form over the residue field.
struct RamPair {
    Rat delta;
    DiffForm omega;
};

bool operator==(const RamPair& a, const RamPair& b);

// Ramification datum of a fierce cyclic p^n character: the (delta, omega)
// pairs of its quotient characters of orders p, p^2, ..., p^n in that
// order. The deltas increase strictly and every omega is nonzero.
struct RamDatum {
    long long p;
    std::vector<RamPair> pairs;
};

bool operator==(const RamDatum& a, const RamDatum& b);

// Datum equality up to one global unit scalar on the forms: deltas exact,
// and some c in F_q^x with b.omega_i = c * a.omega_i for every i. The
// differential normalization depends on the uniformizer system only up to
// such a constant, so round-trip comparisons across constant extensions
// use this relation instead of structural equality.
bool eq_up_to_scalar(const RamDatum& a, const RamDatum& b);

// Outcome of one named validation clause: its identifier, whether it held,
// and a rendering of the comparison that decided it.
struct ConditionRecord {
    std::string clause;
    bool pass;
    std::string witness;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ConditionRecord> conditions;

    void record(const std::string& clause, bool ok,
                const std::string& witness);
};

// The shape classification of ramification data. With cap = p/(p-1):
//   i.window  0 < delta_1 <= cap
//   i.a       delta_1 = cap  <=>  C(omega_1) = omega_1
//   i.b       delta_1 < cap  <=>  C(omega_1) = 0
// and for each later index, writing (d, w) for the previous pair:
//   ii          d > 1/(p-1):  delta = d + 1 and omega = -w
//   iii.window  d <= 1/(p-1): p d <= delta <= cap, and then
//   iii.a       delta = p d < cap    =>  C(omega) = w
//   iii.b       p d < delta < cap    =>  C(omega) = 0
//   iii.c       p d < delta = cap    =>  C(omega) = omega
//   iii.d       delta = p d = cap    =>  C(omega) = omega + w
// The two i-clauses are equivalences, so the delta side selects which
// Cartier equation is demanded; the iii-clauses are one-directional
// (delta configuration => Cartier equation) and are never read backwards,
// since the converses fail in cases (b) and (d).
// Malformed input (non-prime p, empty list, a zero form, deltas not
// strictly increasing or not positive, forms over a residue field of the
// wrong characteristic) throws InvalidInput.
ValidationReport validate_datum(const RamDatum& d);

// Break sequence of a char-p cyclic p^n extension: strictly increasing
// positive integers.
struct BreakSeqCharP {
    long long p;
    std::vector<long long> u;
};

bool operator==(const BreakSeqCharP& a, const BreakSeqCharP& b);

// Admissibility of char-p break sequences:
//   (i)  p does not divide u_1;
//   (ii) for each later break, u_i = p u_{i-1}, or u_i > p u_{i-1} with
//        p not dividing u_i.
// Non-increasing or non-positive sequences throw InvalidInput.
ValidationReport validate_charp_breaks(const BreakSeqCharP& b);

// All admissible sequences of length n with u_n <= u_max, in lexicographic
// order. Empty for n <= 0 or u_max <= 0.
std::vector<BreakSeqCharP> enumerate_charp_breaks(long long p, int n,
                                                  long long u_max);

// The coarser two-break window, split at delta_1 = 1/(p-1):
//   a  delta_1 >= 1/(p-1): delta_1 + 1 <= delta_2 <= p/(p-1) + delta_1 (p-1)/p
//   b  delta_1 <= 1/(p-1): p delta_1  <= delta_2 <= p/(p-1) + delta_1 (p-1)/p
// Exactly two pairs required (InvalidInput otherwise). Every datum passing
// validate_datum satisfies the applicable inequality; the reverse fails.
ValidationReport check_hyodo(const RamDatum& d);

// Every datum with deltas on the positive step-grid up to p/(p-1) (plus
// the delta_1 + 1 breaks demanded above 1/(p-1)) and forms with polynomial
// coefficient of degree <= degree_bound over {0, 1, -1}, filtered by
// validate_datum. Lengths 1 and 2, lexicographic in (delta_1, omega_1,
// delta_2, omega_2) with the palette in its generation order.
std::vector<RamDatum> enumerate_valid_data(const FqPtr& F, long long p,
                                           const Rat& step, int degree_bound);

}  // namespace swanlab
