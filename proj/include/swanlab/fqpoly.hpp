#pragma once

#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "swanlab/fq.hpp"
#include "swanlab/rat.hpp"

namespace swanlab {

// Dense polynomial in s over F_q, low to high degree, no trailing zeros
// (zero polynomial = empty coefficient vector).
struct FqPoly {
    FqPtr F;
    std::vector<Fq::Elem> c;

    explicit FqPoly(FqPtr field) : F(std::move(field)) {}
    FqPoly(FqPtr field, std::vector<Fq::Elem> coeffs);

    static FqPoly zero(FqPtr F) { return FqPoly(std::move(F)); }
    static FqPoly constant(FqPtr F, Fq::Elem a);
    static FqPoly monomial(FqPtr F, Fq::Elem a, int deg);

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 = zero
    Fq::Elem lead() const { return c.empty() ? 0 : c.back(); }
    Fq::Elem coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0;
    }
    void trim();

    bool operator==(const FqPoly& o) const { return c == o.c; }
};

FqPoly operator+(const FqPoly& a, const FqPoly& b);
FqPoly operator-(const FqPoly& a, const FqPoly& b);
FqPoly operator*(const FqPoly& a, const FqPoly& b);
FqPoly operator-(const FqPoly& a);
FqPoly scale(const FqPoly& a, Fq::Elem k);

// Quotient and remainder; b nonzero.
std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b);

FqPoly monic(const FqPoly& a);
FqPoly poly_gcd(FqPoly a, FqPoly b);  // monic
// g = gcd(a,b) together with u, v such that u a + v b = g.
struct ExtGcd {
    FqPoly g, u, v;
};
ExtGcd poly_ext_gcd(const FqPoly& a, const FqPoly& b);

FqPoly derivative(const FqPoly& a);
Fq::Elem eval(const FqPoly& a, Fq::Elem x);
FqPoly pow_mod(const FqPoly& base, BigInt e, const FqPoly& mod);

// s-adic order: index of the lowest nonzero coefficient. Zero -> throws.
int low_order(const FqPoly& a);

// Inverse Frobenius on polynomials all of whose exponents are divisible by
// p and whose coefficients are (automatically) p-th powers: returns r with
// r^p = a. Throws InvalidInput when a is not of that shape.
FqPoly poly_pth_root(const FqPoly& a);
FqPoly poly_frob(const FqPoly& a);  // a(s)^p, computed coefficientwise

// Full factorization into monic irreducibles with multiplicities; the unit
// is returned separately as the leading coefficient of the input. The rng
// drives Cantor-Zassenhaus splitting only (result is seed-independent).
std::vector<std::pair<FqPoly, int>> factorize(const FqPoly& a,
                                              std::mt19937_64& rng);

bool is_irreducible(const FqPoly& a);

}  // namespace swanlab
