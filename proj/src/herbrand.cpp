#include "swanlab/herbrand.hpp"

#include <algorithm>

#include "swanlab/errors.hpp"

namespace swanlab {

namespace {

// Drop knots that do not change the slope; the normalized form makes
// structural equality meaningful (psi o phi == identity literally).
HerbrandMap normalized(HerbrandMap m) {
    std::vector<Rat> knots, slopes;
    slopes.push_back(m.slopes[0]);
    for (size_t i = 0; i < m.knots.size(); ++i) {
        if (m.slopes[i + 1] == slopes.back()) continue;
        knots.push_back(m.knots[i]);
        slopes.push_back(m.slopes[i + 1]);
    }
    m.knots = std::move(knots);
    m.slopes = std::move(slopes);
    return m;
}

// Local slope at sample point t (any t avoiding the knots themselves).
Rat slope_at(const HerbrandMap& m, const Rat& t) {
    size_t i = 0;
    while (i < m.knots.size() && t > m.knots[i]) ++i;
    return m.slopes[i];
}

}  // namespace

Rat HerbrandMap::eval(const Rat& t) const {
    if (t < 0) throw InvalidInput("Herbrand maps are defined on t >= 0");
    Rat acc = 0, pos = 0;
    for (size_t i = 0; i < knots.size(); ++i) {
        if (t <= knots[i]) return acc + slopes[i] * (t - pos);
        acc += slopes[i] * (knots[i] - pos);
        pos = knots[i];
    }
    return acc + slopes.back() * (t - pos);
}

HerbrandMap HerbrandMap::invert() const {
    HerbrandMap out;
    out.is_psi = !is_psi;
    out.slopes.reserve(slopes.size());
    for (const Rat& k : knots) out.knots.push_back(eval(k));
    for (const Rat& s : slopes) out.slopes.push_back(Rat(1) / s);
    return out;
}

HerbrandMap psi_from_breaks(const BreakSequence& b) {
    const size_t r = b.breaks.size();
    HerbrandMap m;
    m.is_psi = true;
    m.knots = b.breaks;
    Rat slope(1);
    for (size_t i = 0; i < r; ++i) slope /= b.p;
    for (size_t i = 0; i <= r; ++i) {
        m.slopes.push_back(slope);
        slope *= b.p;
    }
    return m;
}

HerbrandMap phi_from_breaks(const BreakSequence& b) {
    return psi_from_breaks(b).invert();
}

HerbrandMap compose(const HerbrandMap& a, const HerbrandMap& b) {
    HerbrandMap binv = b.invert();
    std::vector<Rat> knots = b.knots;
    for (const Rat& k : a.knots) knots.push_back(binv.eval(k));
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    HerbrandMap out;
    out.is_psi = a.is_psi;
    out.knots = knots;
    Rat pos = 0;
    for (size_t i = 0; i <= knots.size(); ++i) {
        // Sample strictly inside the i-th interval.
        Rat sample = (i < knots.size()) ? (pos + knots[i]) / 2 : pos + 1;
        out.slopes.push_back(slope_at(b, sample) * slope_at(a, b.eval(sample)));
        if (i < knots.size()) pos = knots[i];
    }
    return normalized(out);
}

Rat epsilon_of_breaks(const BreakSequence& b) {
    const size_t r = b.breaks.size();
    Rat eps = 0;
    Rat denom = 1;
    for (size_t i = 0; i < r + 1; ++i) denom *= b.p;
    // denom = p^(r+1); coefficient of delta_i (1-based) is (p-1) p^(i-r-1).
    Rat coeff = Rat(b.p - 1) / denom;
    for (size_t i = 0; i < r; ++i) {
        coeff *= b.p;
        eps += b.breaks[i] * coeff;
    }
    if (eps > b.breaks.back())
        throw InternalInconsistency("epsilon exceeds the top break");
    return eps;
}

}  // namespace swanlab
