#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Topological phase boundary: ||Re n(k)|| fell below the gap threshold, the
// winding number is undefined at this parameter point.
struct GapClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accumulated winding angle not within tolerance of an integer even after
// grid refinement — signals a convention bug or a pathological operator.
struct NonIntegerWinding : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |h1| exceeded tolerance at some k; the Bloch vector left the chiral plane.
struct ChiralAxisViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Im(n0) of the scaled operator exceeded tolerance; the real-quasienergy
// criterion n0^2 <= 1 would be meaningless.
struct ComplexN0 : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gamma = (1-p)^(-1/4) requested at p = 1.
struct GammaUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// lambda_+ == lambda_- within tolerance: biorthonormal eigenvectors are
// ill-conditioned and the pseudo-unitarity witness cannot be formed.
struct DegenerateSpectrum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Surviving population vanished; survival-normalized observables undefined.
struct ZeroSurvival : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense eigendecomposition did not converge or failed the residual check.
struct EigensolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed inputs: unknown variant tag, overlapping lattice regions, ...
struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace qwalk
