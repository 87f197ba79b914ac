#pragma once

#include <vector>

#include "swanlab/rat.hpp"

namespace swanlab {

// Piecewise-linear, continuous, strictly increasing map f with f(0) = 0.
// slopes[i] applies on [knots[i-1], knots[i]] (with knots[-1] := 0) and
// slopes.back() on the final unbounded interval. Normalized: no knot
// separates two intervals of equal slope.
struct HerbrandMap {
    std::vector<Rat> knots;   // strictly increasing, all > 0
    std::vector<Rat> slopes;  // size knots.size() + 1, all > 0
    bool is_psi = true;       // orientation tag: psi (upper->lower) or phi

    Rat eval(const Rat& t) const;
    HerbrandMap invert() const;

    bool operator==(const HerbrandMap& o) const {
        return knots == o.knots && slopes == o.slopes;
    }
};

// Inverse Herbrand function psi of the cyclic p^r extension with upper
// breaks b: slope p^{i-r} between the i-th and (i+1)-st break, slope 1 above
// the top break.
HerbrandMap psi_from_breaks(const BreakSequence& b);
HerbrandMap phi_from_breaks(const BreakSequence& b);

// (a o b)(t) = a(b(t)). Tower transitivity: psi_{L/K} = psi_{L/M} o psi_{M/K}.
HerbrandMap compose(const HerbrandMap& a, const HerbrandMap& b);

// The defect t - psi(t) above the top break:
// epsilon = sum_i delta_i (p-1) / p^(r-i+1), r = #breaks.
Rat epsilon_of_breaks(const BreakSequence& b);

}  // namespace swanlab
