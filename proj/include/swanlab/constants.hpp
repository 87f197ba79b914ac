#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swanlab/fq.hpp"
#include "swanlab/rat.hpp"

namespace swanlab {

class ConstField;
using ConstFieldPtr = std::shared_ptr<const ConstField>;

// Element of O_k / p^N for the constants field k: coefficient vector on the
// basis X^i Y^j (X the Eisenstein uniformizer, Y the unramified generator),
// digits stored mod p^N. `prec` is the certification level in 1/e' units:
// the element is known modulo P^prec, P the maximal ideal. Elements are
// always integral; negative valuations live upstairs in the local field.
struct ConstElem {
    ConstFieldPtr k;
    std::vector<std::uint64_t> d;  // size e' * f, d[i*f + j] ~ X^i Y^j
    long long prec = 0;

    bool operator==(const ConstElem& o) const;  // equality at shared precision
};

// A finite totally ramified (over its unramified core) model of the field
// of constants: Z_p[Y]/(h(Y)) -[Eisenstein g(X)]-> O_k, with h lifting the
// residue field modulus. Two concrete models:
//   n=1: g = X^e' + p, e' = (p-1) p^m; zeta_p Newton-lifted near 1 + X^(e'/(p-1)).
//   n=2: g = Phi_{p^2}(1 + X^(p^j)), j = max(m,1)-1; zeta_{p^2} = 1 + X^(p^j) exact.
// Both make pi_1 = -p and pi_{1/(p-1)} = lambda hold (exactly for n=1,
// to certified precision for n=2); verify_pi_system rechecks at runtime.
class ConstField : public std::enable_shared_from_this<ConstField> {
  public:
    long long p, m, n, f, eprime;
    long long N_user;  // requested certification level (p-adic digits)
    long long N;       // internal working level: N_user + margin
    FqPtr k_residue;

    FqPtr residue_field() const { return k_residue; }
    ValGroup lattice() const { return ValGroup(eprime); }
    long long full_prec() const { return N * eprime; }

    ConstElem zero() const;
    ConstElem one() const;
    ConstElem from_int(long long v) const;
    ConstElem lift(Fq::Elem a) const;  // naive (digitwise) lift of a residue
    ConstElem pi() const;              // the base uniformizer pi_{1/e'}
    ConstElem pi_t(const Rat& t) const;  // t >= 0, t in the lattice
    ConstElem zeta_p() const { return zeta_p_; }
    ConstElem zeta_pn() const { return zeta_pn_; }  // = zeta_p when n = 1
    ConstElem lambda() const { return lambda_; }    // zeta_p - 1

    ConstElem add(const ConstElem& a, const ConstElem& b) const;
    ConstElem sub(const ConstElem& a, const ConstElem& b) const;
    ConstElem neg(const ConstElem& a) const;
    ConstElem mul(const ConstElem& a, const ConstElem& b) const;
    ConstElem pow(const ConstElem& a, long long e) const;  // e >= 0

    // Inverse of a unit (certified v = 0), by residue inversion plus
    // quadratic Newton refinement. Precision-preserving.
    ConstElem unit_inv(const ConstElem& a) const;

    // Exact division by pi^k; requires v(a) >= k/e'. Loses k precision
    // units, tracked on the result.
    ConstElem div_pi_pow(const ConstElem& a, long long k) const;

    // True when every digit vanishes at the element's precision. At full
    // precision that is the ring zero of O_k/p^N.
    bool is_zero_at_prec(const ConstElem& a) const;

    // Canonical representative of a at the given (possibly lower) precision.
    ConstElem clamp_prec(const ConstElem& a, long long prec) const;

    // Valuation in (1/e')Z if certified below the element's precision.
    std::optional<Rat> val(const ConstElem& a) const;
    Rat certified_val(const ConstElem& a) const;  // throws PrecisionExhausted

    // Decides v(a) >= t; throws PrecisionExhausted only when the element is
    // zero-at-precision but prec < t e'.
    bool val_at_least(const ConstElem& a, const Rat& t) const;

    // Residue map O_k -> F_q (the X^0 block mod p).
    Fq::Elem residue(const ConstElem& a) const;

    std::string modulus_string() const;  // g(X), for reproducibility
    std::string to_string(const ConstElem& a) const;

    // --- construction ---
    static ConstFieldPtr build(long long p, long long m, long long n,
                               long long N, long long f = 1);

    // Internal helpers shared with the builders (digit arithmetic).
    std::uint64_t pN() const { return pN_; }
    const std::vector<std::uint64_t>& g_digits() const { return g_; }

  private:
    friend ConstFieldPtr build_constants(long long, long long, long long,
                                         long long, long long);
    ConstField() = default;

    std::uint64_t pN_ = 0;
    std::vector<std::uint64_t> g_;  // modulus digits mod p^N, size e'+1
    std::vector<std::uint64_t> h_;  // unramified modulus digits, size f+1
    std::uint64_t g0_over_p_inv_ = 0;  // inverse of g_0/p mod p^N
    ConstElem zeta_p_, zeta_pn_, lambda_;

    void canonicalize(ConstElem& a) const;
    // W = Z_p[Y]/h arithmetic on f-digit blocks.
    void wmul_acc(const std::uint64_t* a, const std::uint64_t* b,
                  std::uint64_t* acc2f) const;  // acc (2f-1 digits) += a*b
    std::vector<std::uint64_t> wreduce(std::vector<std::uint64_t> t) const;
    void build_tables();
    void finish_construction();  // roots of unity etc.
};

ConstElem operator+(const ConstElem& a, const ConstElem& b);
ConstElem operator-(const ConstElem& a, const ConstElem& b);
ConstElem operator*(const ConstElem& a, const ConstElem& b);
ConstElem operator-(const ConstElem& a);

// Public builder; N is the requested certification level (>= 4).
ConstFieldPtr build_constants(long long p, long long m, long long n,
                              long long N, long long f = 1);

// Newton root with the strict slope certificate v(f(x0)) > 2 v(f'(x0)).
// poly holds coefficients low to high. A seed with f(seed) already zero at
// precision is returned as-is.
ConstElem hensel_root(const std::vector<ConstElem>& poly, const ConstElem& x0);

// The uniformizer system t -> pi_t = base^(e' t). The default system uses
// the field's pinned base; alternative bases exist for negative controls.
struct PiSystem {
    ConstFieldPtr k;
    ConstElem base;

    explicit PiSystem(ConstFieldPtr field);
    PiSystem(ConstFieldPtr field, ConstElem base_elem);

    ConstElem pi(const Rat& t) const;  // t >= 0 in the lattice
};

struct PiSystemReport {
    bool valuations_ok = false;      // v(pi_t) = t on a sample of t
    bool powers_ok = false;          // pi_t^k = pi_{kt} on a sample
    bool lambda_ok = false;          // pi_{1/(p-1)} = lambda mod P^(1/(p-1)+1/e')
    bool minus_p_ok = false;         // pi_1 = -p mod P^(1+1/e')
    std::string detail;

    bool all() const {
        return valuations_ok && powers_ok && lambda_ok && minus_p_ok;
    }
};

PiSystemReport verify_pi_system(const PiSystem& sys);

// Embedding attached to a constant extension: X -> X'^(e_new/e_old) and
// Y -> Newton lift of the residue-field embedding.
struct ConstEmbedding {
    ConstFieldPtr from, to;
    ConstElem x_image, y_image;
    std::vector<Fq::Elem> residue_map;

    ConstElem apply(const ConstElem& a) const;
};

// Extends the constants field to new_eprime (a p-power multiple of the old
// e') and/or new_f (a multiple of the old f). The new pi system restricts
// to the old one exactly on the old lattice.
std::pair<ConstFieldPtr, ConstEmbedding> extend_constants(
    const ConstFieldPtr& k, long long new_eprime, long long new_f);

}  // namespace swanlab
