#pragma once

#include <memory>
#include <string>
#include <vector>

#include "swanlab/errors.hpp"

namespace swanlab {

// The finite field F_q, q = p^f, with table-based arithmetic. Elements are
// integers in [0, q): the base-p digits of an element are its coordinates
// on the power basis 1, alpha, ..., alpha^(f-1), where alpha is a root of
// the defining irreducible polynomial. Addition is digitwise; products go
// through discrete log/exp tables on a fixed multiplicative generator.
class Fq {
  public:
    using Elem = int;

    Fq(long long p, long long f);

    long long p() const { return p_; }
    long long f() const { return f_; }
    long long q() const { return q_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem gen() const { return gen_; }

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const;
    Elem pow(Elem a, long long e) const;

    // Image of an integer through the prime field.
    Elem from_int(long long n) const;

    // Frobenius x -> x^p and its inverse (a bijection on a finite field).
    Elem frob(Elem a) const;
    Elem pth_root(Elem a) const;

    // f = 1: plain integers. f > 1: "0", "1", or "g^k" powers of gen().
    std::string to_string(Elem a) const;

    // Defining polynomial, low to high degree, over F_p (monic, length f+1).
    const std::vector<int>& modulus() const { return mod_; }

    // Discrete log of a nonzero element with respect to gen().
    long long dlog(Elem a) const;

  private:
    long long p_, f_, q_;
    Elem gen_;
    std::vector<int> mod_;
    std::vector<Elem> exp_;       // exp_[i] = gen^i, i in [0, q-1)
    std::vector<long long> log_;  // inverse of exp_ on nonzero elements
};

using FqPtr = std::shared_ptr<const Fq>;

FqPtr make_fq(long long p, long long f);

// Coordinatewise image of the smaller field in the bigger one along the
// embedding that sends the small field's alpha to the smallest root of its
// modulus in the big field. Requires small.f | big.f and equal p.
std::vector<Fq::Elem> embedding_table(const Fq& small, const Fq& big);

}  // namespace swanlab
