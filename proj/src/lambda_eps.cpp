#include "swanlab/lambda_eps.hpp"

#include "swanlab/errors.hpp"

namespace swanlab {

EpsilonContext::EpsilonContext(long long p_, Rat eps, ValGroup lam)
    : p(p_), epsilon(std::move(eps)), lambda(lam) {
    if (p < 2) throw InvalidContext("epsilon context needs a prime p");
    if (epsilon < 0) throw InvalidContext("epsilon must be nonnegative");
    if (epsilon >= p) throw InvalidContext("epsilon must be < p");
    if (!lambda.contains(epsilon))
        throw InvalidContext(
            "epsilon outside the value lattice; enlarge e instead of "
            "extending silently");
}

EpsilonContext make_epsilon_context(const BreakSequence& b,
                                    const ValGroup& lambda) {
    return EpsilonContext(b.p, epsilon_of_breaks(b), lambda);
}

bool in_lambda_epsilon(const Rat& t, const EpsilonContext& ctx) {
    if (t < 0) throw InvalidInput("Lambda_epsilon lives in Q_{>=0}");
    // Thresholds (1 - eps/p) nu_k increase with limit (p - eps)/(p - 1).
    const Rat limit = Rat(ctx.p - ctx.epsilon) / (ctx.p - 1);
    if (t >= limit) return true;  // premise holds for no k
    const Rat scale = 1 - ctx.epsilon / ctx.p;
    Rat nu = 1;           // nu_1
    Rat pk = ctx.p;       // p^k
    Rat inv_pow = 1;      // p^(1-k)
    for (long long k = 1;; ++k) {
        if (t < scale * nu) {
            // k1 = k: the single decisive check.
            return ctx.lambda.contains(pk * t);
        }
        inv_pow /= ctx.p;
        nu += inv_pow;
        pk *= ctx.p;
    }
}

Rat lambda_eps_shift(const Rat& s, const Rat& t, const EpsilonContext& ctx) {
    if (s < ctx.epsilon || t < ctx.epsilon)
        throw InvalidInput("shift needs s, t >= epsilon");
    if (!in_lambda_epsilon(s, ctx) || !in_lambda_epsilon(t, ctx))
        throw InvalidInput("shift needs s, t in Lambda_epsilon");
    Rat out = s + t - ctx.epsilon;
    if (!in_lambda_epsilon(out, ctx))
        throw InternalInconsistency("shift left Lambda_epsilon");
    return out;
}

}  // namespace swanlab
