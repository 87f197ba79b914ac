#pragma once

#include <stdexcept>
#include <string>

namespace swanlab {

// Root of the library's error taxonomy. Everything thrown on purpose derives
// from this; anything else escaping the library is a bug.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
struct InvalidInput : Error {
    using Error::Error;
};

// A context object (lattice, epsilon data, field handle) cannot serve the
// request, e.g. epsilon does not lie in the ambient value lattice.
struct InvalidContext : Error {
    using Error::Error;
};

// The working precision is too small to certify the requested decision.
// Raised instead of guessing: valuation comparisons at the precision
// boundary would otherwise silently corrupt exact downstream invariants.
struct PrecisionExhausted : Error {
    using Error::Error;
};

// The Newton/Hensel slope certificate v(f(x0)) > 2 v(f'(x0)) failed, so no
// contraction guarantee exists for the iteration.
struct NoConvergenceCertificate : Error {
    using Error::Error;
};

// The Kummer class under inspection is trivial (a p-th power to working
// precision). Control flow must stop; this is not a failure of the math.
struct TrivialCharacter : Error {
    using Error::Error;
};

// The computation is sound but needs a larger field of constants: a finer
// value lattice, more roots of unity, or a bigger residue field. Carries
// concrete suggestions so drivers can retry.
struct RequiresConstantExtension : Error {
    long long suggested_eprime;  // 0 = keep current ramification index
    long long suggested_f;       // 0 = keep current residue degree
    RequiresConstantExtension(const std::string& what, long long eprime = 0,
                              long long f = 0)
        : Error(what), suggested_eprime(eprime), suggested_f(f) {}
};

// Preconditions of the two differential inverse problems: solve_dlog needs
// a Cartier-fixed form, solve_exact needs a Cartier-killed form.
struct NotFixedByCartier : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct NotKilledByCartier : InvalidInput {
    using InvalidInput::InvalidInput;
};

// A redundant internal cross-check failed. Never reachable through bad user
// input; indicates a defect in the library itself and is never swallowed.
struct InternalInconsistency : Error {
    using Error::Error;
};

// An iterative procedure exceeded its configured budget. Carries the trace
// of the iteration for diagnosis.
struct IterationBudgetExceeded : Error {
    using Error::Error;
};

// A solver honored its configured degree bound and found nothing within it.
struct SolverBoundExceeded : Error {
    using Error::Error;
};

}  // namespace swanlab
