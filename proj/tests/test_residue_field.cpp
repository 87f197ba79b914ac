#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "swanlab/errors.hpp"
#include "swanlab/fq.hpp"
#include "swanlab/fqpoly.hpp"
#include "swanlab/ratfun.hpp"

using namespace swanlab;

namespace {

FqPoly random_poly(const FqPtr& F, std::mt19937_64& rng, int max_deg) {
    FqPoly out(F);
    int d = static_cast<int>(rng() % (max_deg + 1));
    out.c.resize(d + 1);
    for (auto& x : out.c) x = static_cast<Fq::Elem>(rng() % F->q());
    out.trim();
    return out;
}

RatFun random_ratfun(const FqPtr& F, std::mt19937_64& rng, int max_deg,
                     bool nonzero = false) {
    for (;;) {
        FqPoly n = random_poly(F, rng, max_deg);
        FqPoly d = random_poly(F, rng, max_deg);
        if (d.is_zero()) continue;
        RatFun r(n, d);
        if (nonzero && r.is_zero()) continue;
        return r;
    }
}

}  // namespace

TEST_CASE("finite field tables") {
    for (auto [p, f] : {std::pair<long long, long long>{2, 1},
                        {2, 2},
                        {3, 1},
                        {3, 2},
                        {5, 1},
                        {7, 2}}) {
        FqPtr F = make_fq(p, f);
        long long q = F->q();
        // Field axioms on all pairs (q is tiny).
        for (Fq::Elem a = 0; a < q; ++a) {
            CHECK(F->add(a, F->neg(a)) == 0);
            if (a != 0) {
                CHECK(F->mul(a, F->inv(a)) == 1);
                CHECK(F->pow(a, q - 1) == 1);
            }
            CHECK(F->frob(F->pth_root(a)) == a);
            CHECK(F->pth_root(F->frob(a)) == a);
            for (Fq::Elem b = 0; b < q; ++b) {
                CHECK(F->add(a, b) == F->add(b, a));
                CHECK(F->mul(a, b) == F->mul(b, a));
                // Frobenius is additive.
                CHECK(F->frob(F->add(a, b)) == F->add(F->frob(a), F->frob(b)));
            }
        }
        // Generator has full order.
        Fq::Elem g = F->gen();
        long long ord = 1;
        Fq::Elem acc = g;
        while (acc != 1) {
            acc = F->mul(acc, g);
            ++ord;
        }
        CHECK(ord == q - 1);
    }
}

TEST_CASE("field embedding tables") {
    FqPtr F2 = make_fq(3, 1), F9 = make_fq(3, 2);
    auto t = embedding_table(*F2, *F9);
    for (Fq::Elem a = 0; a < 3; ++a)
        for (Fq::Elem b = 0; b < 3; ++b) {
            CHECK(t[F2->add(a, b)] == F9->add(t[a], t[b]));
            CHECK(t[F2->mul(a, b)] == F9->mul(t[a], t[b]));
        }
    CHECK(t[1] == 1);
    FqPtr F4 = make_fq(2, 2), F16 = make_fq(2, 4);
    auto t2 = embedding_table(*F4, *F16);
    for (Fq::Elem a = 0; a < 4; ++a)
        for (Fq::Elem b = 0; b < 4; ++b) {
            CHECK(t2[F4->add(a, b)] == F16->add(t2[a], t2[b]));
            CHECK(t2[F4->mul(a, b)] == F16->mul(t2[a], t2[b]));
        }
}

TEST_CASE("polynomial arithmetic and factorization") {
    std::mt19937_64 rng(1001);
    for (auto [p, f] : {std::pair<long long, long long>{2, 1},
                        {3, 1},
                        {3, 2},
                        {5, 1}}) {
        FqPtr F = make_fq(p, f);
        for (int trial = 0; trial < 40; ++trial) {
            FqPoly a = random_poly(F, rng, 8), b = random_poly(F, rng, 6);
            if (!b.is_zero()) {
                auto [q, r] = divmod(a, b);
                CHECK(q * b + r == a);
                CHECK(r.degree() < b.degree());
            }
            FqPoly g = poly_gcd(a, b);
            if (!a.is_zero() && !b.is_zero()) {
                CHECK(divmod(a, g).second.is_zero());
                CHECK(divmod(b, g).second.is_zero());
                ExtGcd e = poly_ext_gcd(a, b);
                CHECK(e.u * a + e.v * b == e.g);
                CHECK(e.g == g);
            }
            // Factorization round-trip on a nontrivial product.
            FqPoly prod = a * b;
            if (prod.degree() >= 1) {
                auto factors = factorize(prod, rng);
                FqPoly re = FqPoly::constant(F, prod.lead());
                for (auto& [fac, mult] : factors) {
                    CHECK(is_irreducible(fac));
                    CHECK(fac.lead() == 1);
                    for (int i = 0; i < mult; ++i) re = re * fac;
                }
                CHECK(re == prod);
            }
        }
        // Frobenius / p-th root of polynomials.
        for (int trial = 0; trial < 20; ++trial) {
            FqPoly a = random_poly(F, rng, 5);
            CHECK(poly_pth_root(poly_frob(a)) == a);
        }
    }
}

TEST_CASE("p-th power decomposition: pinned examples") {
    FqPtr F = make_fq(3, 1);
    RatFun s = RatFun::s(F);

    // s^3 -> b_0 = s.
    auto b = pth_power_decompose(pow(s, 3));
    CHECK(b[0] == s);
    CHECK(b[1].is_zero());
    CHECK(b[2].is_zero());

    // s -> b_1 = 1.
    b = pth_power_decompose(s);
    CHECK(b[0].is_zero());
    CHECK(b[1] == RatFun::constant(F, 1));
    CHECK(b[2].is_zero());

    // 1/(s^3 - s): the round-trip is the oracle.
    RatFun a = inverse(pow(s, 3) - s);
    b = pth_power_decompose(a);
    RatFun re(F);
    for (long long i = 0; i < 3; ++i) re = re + pow(b[i], 3) * pow(s, i);
    CHECK(re == a);
}

TEST_CASE("p-th power decomposition: random round-trips") {
    std::mt19937_64 rng(77);
    for (auto [p, f] :
         {std::pair<long long, long long>{2, 1}, {3, 1}, {3, 2}, {5, 1}}) {
        FqPtr F = make_fq(p, f);
        RatFun s = RatFun::s(F);
        for (int trial = 0; trial < 50; ++trial) {
            RatFun a = random_ratfun(F, rng, 5);
            auto b = pth_power_decompose(a);
            RatFun re(F);
            for (long long i = 0; i < p; ++i)
                re = re + pow(b[i], p) * pow(s, i);
            CHECK(re == a);
        }
    }
}

TEST_CASE("is_pth_power") {
    FqPtr F = make_fq(3, 1);
    RatFun s = RatFun::s(F);
    auto r = is_pth_power(pow(s, 3));
    REQUIRE(r.has_value());
    CHECK(*r == s);
    CHECK(!is_pth_power(s).has_value());

    RatFun t = (s * s + RatFun::constant(F, 1)) / s;
    auto r2 = is_pth_power(pow(t, 3));
    REQUIRE(r2.has_value());
    CHECK(*r2 == t);

    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        RatFun a = random_ratfun(F, rng, 4, true);
        auto root = is_pth_power(pow(a, 3));
        REQUIRE(root.has_value());
        CHECK(pow(*root, 3) == pow(a, 3));
    }
}

TEST_CASE("Artin-Schreier solver") {
    std::mt19937_64 rng(999);
    for (auto [p, f] :
         {std::pair<long long, long long>{2, 1}, {3, 1}, {3, 2}, {5, 1}}) {
        FqPtr F = make_fq(p, f);
        // a = 0 -> 0 is a solution.
        auto z = artin_schreier_solve(RatFun(F));
        REQUIRE(z.has_value());
        CHECK(pow(*z, p) - *z == RatFun(F));

        // Construct-then-solve.
        for (int trial = 0; trial < 25; ++trial) {
            RatFun b = random_ratfun(F, rng, 3);
            RatFun a = pow(b, p) - b;
            auto sol = artin_schreier_solve(a);
            REQUIRE(sol.has_value());
            CHECK(pow(*sol, p) - *sol == a);
            // Solutions differ by a prime-field constant.
            RatFun diff = *sol - b;
            CHECK(pow(diff, p) == diff);
        }
    }
    // 1/s has a simple pole: not of the form b^p - b.
    FqPtr F3 = make_fq(3, 1);
    CHECK(!artin_schreier_solve(inverse(RatFun::s(F3))).has_value());
}

TEST_CASE("Cartier operator: pinned examples") {
    FqPtr F = make_fq(3, 1);
    RatFun s = RatFun::s(F);
    DiffForm dss(RatFun::constant(F, 1));  // ds/s
    CHECK(cartier(dss) == dss);

    DiffForm ds(s);  // ds = s * ds/s
    CHECK(cartier(ds).is_zero());

    DiffForm s2ds(pow(s, 3));  // s^2 ds in the a ds/s representation
    CHECK(cartier(s2ds) == ds);
}

TEST_CASE("Cartier operator: properties") {
    std::mt19937_64 rng(271828);
    for (auto [p, f] :
         {std::pair<long long, long long>{2, 1}, {3, 1}, {3, 2}, {5, 1}}) {
        FqPtr F = make_fq(p, f);
        for (int trial = 0; trial < 40; ++trial) {
            DiffForm w1(random_ratfun(F, rng, 4));
            DiffForm w2(random_ratfun(F, rng, 4));
            RatFun z = random_ratfun(F, rng, 3, true);
            CHECK(cartier(w1 + w2) == cartier(w1) + cartier(w2));
            CHECK(cartier(pow(z, p) * w1) == z * cartier(w1));
            RatFun y = random_ratfun(F, rng, 3, true);
            CHECK(cartier(dform(y)).is_zero());
            CHECK(cartier(dlog(y)) == dlog(y));
        }
    }
}

TEST_CASE("solve_exact") {
    FqPtr F = make_fq(3, 1);
    RatFun s = RatFun::s(F);
    // ds -> s (antiderivatives are unique up to p-th powers; check d).
    RatFun y = solve_exact(DiffForm(s));
    CHECK(dform(y) == DiffForm(s));
    // d(s^2) = 2s ds has coefficient 2s^2 in the ds/s representation.
    RatFun y2 = solve_exact(DiffForm(RatFun::constant(F, 2) * s * s));
    CHECK(dform(y2) == dform(s * s));
    // C(w) != 0 is rejected: w = (s^3 + s) ds/s.
    CHECK_THROWS_AS(solve_exact(DiffForm(pow(s, 3) + s)), NotKilledByCartier);

    std::mt19937_64 rng(5551);
    for (auto [p, f] :
         {std::pair<long long, long long>{2, 1}, {3, 1}, {5, 1}}) {
        FqPtr Fx = make_fq(p, f);
        for (int trial = 0; trial < 30; ++trial) {
            RatFun u = random_ratfun(Fx, rng, 4);
            DiffForm w = dform(u);
            RatFun v = solve_exact(w);
            CHECK(dform(v) == w);
        }
    }
}

TEST_CASE("solve_dlog") {
    FqPtr F = make_fq(3, 1);
    RatFun s = RatFun::s(F);
    auto y = solve_dlog(DiffForm(RatFun::constant(F, 1)));
    REQUIRE(y.has_value());
    CHECK(dlog(*y) == DiffForm(RatFun::constant(F, 1)));

    RatFun sp1 = s + RatFun::constant(F, 1);
    auto y2 = solve_dlog(dlog(sp1));
    REQUIRE(y2.has_value());
    CHECK(dlog(*y2) == dlog(sp1));

    // Degree bound honored: a factor of degree 2 with bound 1 -> none.
    RatFun q = s * s + RatFun::constant(F, 1);  // irreducible over F_3
    auto none = solve_dlog(dlog(q), 1);
    CHECK(!none.has_value());
    auto some = solve_dlog(dlog(q), 2);
    CHECK(some.has_value());

    CHECK_THROWS_AS(solve_dlog(DiffForm(s)), NotFixedByCartier);

    std::mt19937_64 rng(8080);
    for (auto [p, f] :
         {std::pair<long long, long long>{2, 1}, {3, 1}, {3, 2}, {5, 1}}) {
        FqPtr Fx = make_fq(p, f);
        for (int trial = 0; trial < 25; ++trial) {
            RatFun u = random_ratfun(Fx, rng, 4, true);
            DiffForm w = dlog(u);
            auto v = solve_dlog(w);
            REQUIRE(v.has_value());
            CHECK(dlog(*v) == w);
        }
    }
}

TEST_CASE("v1 normalization") {
    FqPtr F = make_fq(3, 1);
    RatFun s = RatFun::s(F);
    CHECK(v1(DiffForm(RatFun::constant(F, 1))) == 0);  // ds/s
    CHECK(v1(DiffForm(s)) == 1);                       // ds
    CHECK(v1(DiffForm(inverse(s))) == -1);             // (1/s) ds/s
    CHECK_THROWS_AS(v1(DiffForm(RatFun(F))), InvalidInput);
}
