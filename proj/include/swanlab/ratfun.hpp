#pragma once

#include <optional>
#include <vector>

#include "swanlab/fqpoly.hpp"

namespace swanlab {

// Element of F_q(s): numerator / monic denominator, coprime. The zero
// element is 0/1. This canonical form makes equality structural.
struct RatFun {
    FqPoly num, den;

    explicit RatFun(FqPtr F)
        : num(FqPoly::zero(F)), den(FqPoly::constant(F, 1)) {}
    RatFun(FqPoly n, FqPoly d);  // normalizes

    static RatFun from_poly(FqPoly p);
    static RatFun constant(FqPtr F, Fq::Elem a);
    static RatFun s(FqPtr F);  // the coordinate function

    const FqPtr& field() const { return num.F; }
    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.degree() <= 0 && den.degree() == 0; }

    bool operator==(const RatFun& o) const {
        return num == o.num && den == o.den;
    }
};

RatFun operator+(const RatFun& a, const RatFun& b);
RatFun operator-(const RatFun& a, const RatFun& b);
RatFun operator*(const RatFun& a, const RatFun& b);
RatFun operator/(const RatFun& a, const RatFun& b);
RatFun operator-(const RatFun& a);
RatFun inverse(const RatFun& a);
RatFun pow(const RatFun& a, long long e);
RatFun derivative(const RatFun& a);

// Order of vanishing at s = 0 (negative at poles). Zero input -> throws.
int s_order(const RatFun& a);

// a(s) -> a(s^k); the embedding of F_q(s) into F_q(sigma) with s = sigma^k.
RatFun subst_power(const RatFun& a, long long k);

// The unique p-basis decomposition a = sum_i b_i^p s^i, i = 0..p-1.
std::vector<RatFun> pth_power_decompose(const RatFun& a);

// b with b^p = a, when a is a p-th power in F_q(s).
std::optional<RatFun> is_pth_power(const RatFun& a);

// b with b^p - b = a, when solvable in F_q(s). Complete: the denominator
// shape forces den(b)^p = den(a), and the numerator lives in an explicit
// finite-dimensional F_p-linear system.
std::optional<RatFun> artin_schreier_solve(const RatFun& a);

// Differential form omega = a ds/s (the p-basis element is globally fixed
// as s, so this representation is canonical).
struct DiffForm {
    RatFun a;

    explicit DiffForm(RatFun coeff) : a(std::move(coeff)) {}
    static DiffForm zero(FqPtr F) { return DiffForm(RatFun(std::move(F))); }

    bool is_zero() const { return a.is_zero(); }
    bool operator==(const DiffForm& o) const { return a == o.a; }
};

DiffForm operator+(const DiffForm& x, const DiffForm& y);
DiffForm operator-(const DiffForm& x, const DiffForm& y);
DiffForm operator-(const DiffForm& x);
DiffForm operator*(const RatFun& z, const DiffForm& x);

// dy and dy/y as forms in the a ds/s representation.
DiffForm dform(const RatFun& y);
DiffForm dlog(const RatFun& y);

// Cartier operator: C(a ds/s) = b_0 ds/s with b_0 the 0-th p-basis
// component of a. Kills exact forms, fixes logarithmic ones.
DiffForm cartier(const DiffForm& w);

// Antiderivative: y with dy = w. Requires C(w) = 0 (NotKilledByCartier);
// under that precondition the closed-form primitive always exists here.
RatFun solve_exact(const DiffForm& w);

// Logarithmic preimage: y with dy/y = w. Requires C(w) = w
// (NotFixedByCartier). Returns none when the denominator of w needs an
// irreducible factor of degree > degree_bound; otherwise succeeds.
std::optional<RatFun> solve_dlog(const DiffForm& w, int degree_bound = 64);

// s-adic order of the coefficient a (ds/s itself has order 0).
int v1(const DiffForm& w);

}  // namespace swanlab
