#pragma once

#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/momentum.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Finite ring with piecewise-constant coin parameters
// ---------------------------------------------------------------------------

// Inclusive site interval [lo, hi] sharing one pair of coin angles. Site
// coordinates are centered: an n_sites ring (n odd) covers
// x in [-(n-1)/2, +(n-1)/2] with periodic wrap-around.
struct Region {
    int lo = 0;
    int hi = 0;
    CoinParams coin;
};

struct LatticeConfig {
    int n_sites = 0; // odd
    Variant variant = Variant::u3p;
    LossParams loss;
    std::vector<Region> regions; // must partition the ring exactly

    int x_min() const { return -(n_sites - 1) / 2; }
    int x_max() const { return (n_sites - 1) / 2; }
    CoinParams coin_at(int x) const;
};

// Dense 2n x 2n one-period matrix. Basis ordering: row 2i is |x_i, H>,
// row 2i+1 is |x_i, V> with x_i = x_min + i. Shifts wrap around the ring.
Eigen::MatrixXcd build_lattice_floquet(const LatticeConfig& config);

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct Spectrum {
    Eigen::VectorXcd lambdas;      // eigenvalues of the one-period matrix
    Eigen::MatrixXcd vectors;      // unit right eigenvectors, column-aligned
    std::vector<Complex> epsilons; // eps = i log(lambda), Re in (-pi, pi]
};

// Dense complex diagonalization with a residual check ||U v - lambda v|| on
// every pair (EigensolverFailure beyond 1e-8).
Spectrum spectrum(const Eigen::MatrixXcd& u);

// ---------------------------------------------------------------------------
// Edge states
// ---------------------------------------------------------------------------

enum class EpsClass { zero, pi };

struct EdgeState {
    int index = 0; // column in the spectrum
    Complex lambda;
    Complex eps;
    EpsClass cls = EpsClass::zero;
    double ipr = 0.0;
    int center = 0;              // site coordinate of the density maximum
    std::vector<double> profile; // site-resolved probability, from x_min
};

// Site density of one eigenvector, normalized to sum 1.
std::vector<double> site_density(const Eigen::MatrixXcd& vectors, int column);
double inverse_participation_ratio(const std::vector<double>& density);

// Edge states = eigenstates pinned to the real quasienergy axis
// (|Re eps| or |Re eps -+ pi| within eps_arg, i.e. |arg lambda| near 0 or pi)
// that are also localized (ipr > ipr_min).
std::vector<EdgeState> classify_edge_states(const LatticeConfig& config,
                                            const Spectrum& spec,
                                            double eps_arg = 1e-3,
                                            double ipr_min = 0.05);

// ---------------------------------------------------------------------------
// Bulk-boundary correspondence
// ---------------------------------------------------------------------------

struct BoundaryReport {
    int site = 0; // x of the first site of the right-hand region
    double delta_nu0 = 0.0;
    double delta_nu_pi = 0.0;
    int expected_zero = 0;
    int expected_pi = 0;
    int found_zero = 0;
    int found_pi = 0;

    bool passes() const {
        return found_zero == expected_zero && found_pi == expected_pi;
    }
};

struct BulkBoundaryReport {
    std::vector<BoundaryReport> boundaries;
    std::vector<EdgeState> edge_states;

    bool passes() const;
};

// For a two-region ring: computes (nu0, nu_pi) of each bulk from its
// homogeneous walk, predicts |delta nu0| / |delta nu_pi| anomalous states per
// boundary, classifies the actual edge states, and assigns each to the
// nearest boundary by ring distance.
BulkBoundaryReport bulk_boundary_check(const LatticeConfig& config,
                                       const Spectrum& spec,
                                       double eps_arg = 1e-3,
                                       double ipr_min = 0.05);

} // namespace qwalk
