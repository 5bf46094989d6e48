#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Bloch decomposition
// ---------------------------------------------------------------------------

// U(k) = n0*sigma_0 - i*(n1*sigma_x + n2*sigma_y + n3*sigma_z).
struct BlochVector {
    double k = 0.0;
    Complex n0, n1, n2, n3;
};

// h = Re(n) / ||Re(n)||; h1 vanishes for every implemented variant, so the
// winding of (h2, h3) about the x-axis is well defined.
struct HVector {
    double h1 = 0.0, h2 = 0.0, h3 = 0.0;
};

struct WindingPair {
    int nu_prime = 0;
    int nu_double_prime = 0;
};

// (nu0, nu_pi) = ((nu' + nu'')/2, (nu' - nu'')/2); half-integers in general.
struct SymmetrizedInvariants {
    double nu0 = 0.0;
    double nu_pi = 0.0;
};

struct Quasienergy {
    Complex eps_plus, eps_minus;     // eps = i log(lambda), Re in (-pi, pi]
    Complex lambda_plus, lambda_minus; // lambda_{+-} = n0 -+ i sqrt(n.n)
};

struct PseudoUnitarity {
    bool is_pseudo_unitary = false;
    double max_n0_sq = 0.0; // max over k of (Re n0)^2 of the gamma-scaled operator
};

// Momentum-space 2x2 matrix of one period, built as the ordered product of
// primitive blocks under the Fourier convention
//   Shift(k) = diag(e^{ik}, e^{-ik}),  ShiftUp(k) = diag(1, e^{-ik}),
//   ShiftDown(k) = diag(e^{ik}, 1).
// gamma_scaled multiplies by gamma = (1-p)^(-1/4).
Mat2 momentum_matrix(const FloquetSequence& seq, double k, bool gamma_scaled = false);

// n0 = tr(U)/2, n_j = (i/2) tr(sigma_j U). Requires a homogeneous sequence.
BlochVector bloch_decompose(const FloquetSequence& seq, double k,
                            bool gamma_scaled = false);

// Unit vector Re(n)/||Re(n)||. Throws GapClosed below the gap threshold and
// ChiralAxisViolation if |h1| > 1e-9.
HVector h_vector(const BlochVector& b);

// nu = -(1/2pi) * closed-loop sum of wrapped increments of atan2(h3, h2).
// The grid auto-doubles (up to 32768) if the pre-round value strays more than
// 1e-6 from an integer; GapClosed/ChiralAxisViolation propagate immediately.
int winding_number(const FloquetSequence& seq, int n_grid = 4096);

// Winding numbers of both chiral time frames of a family.
WindingPair winding_pair(CoinParams coin, LossParams loss, Family family,
                         int n_grid = 4096);

SymmetrizedInvariants nu0_nupi(WindingPair pair);

// lambda_{+-} = n0 -+ i sqrt(n.n) (principal branch), eps = i log lambda with
// Re(eps) in (-pi, pi].
Quasienergy quasienergy(const BlochVector& b);

// max over k of ||sigma_x U(k) sigma_x U(k) - I||_F. Requires p = 0.
double chiral_residual(const FloquetSequence& seq, int n_grid = 256);

// Pseudo-unitarity of the gamma-scaled operator: real spectrum everywhere
// iff max_k n0^2 <= 1. Requires p < 1; Im(n0) must vanish to 1e-9 (ComplexN0).
PseudoUnitarity pseudo_unitarity(const FloquetSequence& seq, int n_grid = 2048);

// Builds the biorthonormal eigenvectors of the scaled operator at one
// pseudo-unitary k-point, forms O = sum_mu |psi_mu><phi_mu| over the {+,-}
// basis and eta = O O^dag, and returns ||U^-1 - eta U^dag eta^-1||_F.
// Refuses non-pseudo-unitary points (|lambda| != 1); throws
// DegenerateSpectrum when lambda_+ ~= lambda_-.
double pseudo_unitarity_witness(const BlochVector& b);

// Unitary-walk second-moment oracle: m2(t)/t^2 -> integral dk/2pi of
// (dn0/dk)^2 / (1 - n0^2), evaluated with centered differences on a uniform
// grid; grid points with |1 - n0^2| < 1e-10 are excluded (their count is
// reported through `excluded` when non-null). Requires p = 0.
double m2_group_velocity_oracle(const FloquetSequence& seq, int n_grid = 4096,
                                int* excluded = nullptr);

// ---------------------------------------------------------------------------
// Phase diagrams
// ---------------------------------------------------------------------------

struct PhaseDiagram {
    int n1 = 0, n2 = 0;
    std::vector<double> theta1s, theta2s;
    // Row-major over (i1, i2); nullopt marks a phase boundary (gap closed).
    std::vector<std::optional<WindingPair>> cells;

    const std::optional<WindingPair>& at(int i1, int i2) const {
        return cells[static_cast<std::size_t>(i1) * static_cast<std::size_t>(n2) +
                     static_cast<std::size_t>(i2)];
    }
};

// Per-cell winding_pair over a theta1 x theta2 grid; boundary cells (gap
// closed) are marked rather than failing the sweep. Cells are independent and
// evaluated on the worker pool (threads = 0 picks the default).
PhaseDiagram phase_diagram(Family family, LossParams loss, int n1, int n2,
                           std::array<double, 2> theta1_range = {-kPi, kPi},
                           std::array<double, 2> theta2_range = {-kPi, kPi},
                           int n_grid = 4096, int threads = 0);

} // namespace qwalk
