#include "qwalk/momentum.hpp"

#include <cmath>

#include "qwalk/parallel.hpp"

namespace qwalk {

namespace {

constexpr double kGapEps = 1e-8;     // ||Re n|| below this: phase boundary
constexpr double kAxisTol = 1e-9;    // |h1| ceiling
constexpr double kIntTol = 1e-6;     // winding distance from integer
constexpr int kMaxGrid = 32768;

const Mat2 kSigmaX = (Mat2() << 0, 1, 1, 0).finished();
const Mat2 kSigmaY = (Mat2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
const Mat2 kSigmaZ = (Mat2() << 1, 0, 0, -1).finished();

Mat2 op_matrix(const PrimitiveOp& op, double k) {
    using Kind = PrimitiveOp::Kind;
    Mat2 m = Mat2::Zero();
    switch (op.kind) {
    case Kind::coin:
        return rotation_matrix(op.theta);
    case Kind::shift:
        m(0, 0) = std::polar(1.0, k);
        m(1, 1) = std::polar(1.0, -k);
        return m;
    case Kind::shift_up:
        m(0, 0) = 1.0;
        m(1, 1) = std::polar(1.0, -k);
        return m;
    case Kind::shift_down:
        m(0, 0) = std::polar(1.0, k);
        m(1, 1) = 1.0;
        return m;
    case Kind::loss:
        return loss_matrix(op.p);
    }
    throw InvalidConfig("unknown primitive kind");
}

// Reconstruction of the 2x2 matrix from its Bloch components.
Mat2 from_bloch(const BlochVector& b) {
    const Complex i(0, 1);
    return b.n0 * Mat2::Identity() -
           i * (b.n1 * kSigmaX + b.n2 * kSigmaY + b.n3 * kSigmaZ);
}

// phi(k) = atan2(h3, h2); summing wrapped increments of phi around the
// Brillouin zone counts the windings of h about the x-axis exactly, immune to
// grid-spacing noise (each increment is wrapped into (-pi, pi]).
double winding_raw(const FloquetSequence& seq, int n_grid) {
    double sum = 0.0;
    double first = 0.0, prev = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double k = -kPi + 2.0 * kPi * i / n_grid;
        const HVector h = h_vector(bloch_decompose(seq, k));
        const double phi = std::atan2(h.h3, h.h2);
        if (i == 0) {
            first = phi;
        } else {
            double d = phi - prev;
            d = std::remainder(d, 2.0 * kPi);
            sum += d;
        }
        prev = phi;
    }
    sum += std::remainder(first - prev, 2.0 * kPi); // close the loop
    return -sum / (2.0 * kPi);
}

} // namespace

Mat2 momentum_matrix(const FloquetSequence& seq, double k, bool gamma_scaled) {
    Mat2 u = Mat2::Identity();
    for (const auto& op : seq.ops) u = op_matrix(op, k) * u;
    if (gamma_scaled) u *= seq.loss.gamma();
    return u;
}

BlochVector bloch_decompose(const FloquetSequence& seq, double k, bool gamma_scaled) {
    if (!seq.homogeneous())
        throw InvalidConfig("bloch_decompose requires a homogeneous sequence");
    const Mat2 u = momentum_matrix(seq, k, gamma_scaled);
    const Complex i(0, 1);
    BlochVector b;
    b.k = k;
    b.n0 = 0.5 * u.trace();
    b.n1 = 0.5 * i * (kSigmaX * u).trace();
    b.n2 = 0.5 * i * (kSigmaY * u).trace();
    b.n3 = 0.5 * i * (kSigmaZ * u).trace();
    return b;
}

HVector h_vector(const BlochVector& b) {
    const double r1 = b.n1.real(), r2 = b.n2.real(), r3 = b.n3.real();
    const double r = std::sqrt(r1 * r1 + r2 * r2 + r3 * r3);
    if (r < kGapEps)
        throw GapClosed("||Re n|| below gap threshold at k = " + std::to_string(b.k));
    HVector h{r1 / r, r2 / r, r3 / r};
    if (std::abs(h.h1) > kAxisTol)
        throw ChiralAxisViolation("|h1| = " + std::to_string(std::abs(h.h1)) +
                                  " at k = " + std::to_string(b.k));
    return h;
}

int winding_number(const FloquetSequence& seq, int n_grid) {
    if (n_grid < 2) throw InvalidConfig("winding grid too small");
    for (int n = n_grid; n <= kMaxGrid; n *= 2) {
        const double raw = winding_raw(seq, n);
        const double rounded = std::round(raw);
        if (std::abs(raw - rounded) <= kIntTol) return static_cast<int>(rounded);
    }
    throw NonIntegerWinding("winding did not settle on an integer up to grid " +
                            std::to_string(kMaxGrid));
}

WindingPair winding_pair(CoinParams coin, LossParams loss, Family family, int n_grid) {
    WindingPair pair;
    pair.nu_prime =
        winding_number(build_floquet(variant_of(family, Frame::prime), coin, loss), n_grid);
    pair.nu_double_prime = winding_number(
        build_floquet(variant_of(family, Frame::double_prime), coin, loss), n_grid);
    return pair;
}

SymmetrizedInvariants nu0_nupi(WindingPair pair) {
    return {0.5 * (pair.nu_prime + pair.nu_double_prime),
            0.5 * (pair.nu_prime - pair.nu_double_prime)};
}

Quasienergy quasienergy(const BlochVector& b) {
    const Complex i(0, 1);
    const Complex nn = b.n1 * b.n1 + b.n2 * b.n2 + b.n3 * b.n3;
    const Complex s = std::sqrt(nn);
    Quasienergy q;
    q.lambda_plus = b.n0 - i * s;
    q.lambda_minus = b.n0 + i * s;
    auto eps_of = [&](Complex lambda) {
        // eps = i log(lambda) = i ln|lambda| - arg(lambda); principal branch
        // puts Re(eps) in [-pi, pi); fold -pi onto +pi.
        Complex e = i * std::log(lambda);
        if (e.real() <= -kPi) e += Complex(2.0 * kPi, 0);
        return e;
    };
    q.eps_plus = eps_of(q.lambda_plus);
    q.eps_minus = eps_of(q.lambda_minus);
    return q;
}

double chiral_residual(const FloquetSequence& seq, int n_grid) {
    if (seq.loss.p != 0.0)
        throw InvalidConfig("chiral_residual is defined for the unitary walk (p = 0)");
    double worst = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double k = -kPi + 2.0 * kPi * i / n_grid;
        const Mat2 u = momentum_matrix(seq, k);
        const double r = (kSigmaX * u * kSigmaX * u - Mat2::Identity()).norm();
        worst = std::max(worst, r);
    }
    return worst;
}

PseudoUnitarity pseudo_unitarity(const FloquetSequence& seq, int n_grid) {
    if (seq.loss.p >= 1.0)
        throw GammaUndefined("pseudo_unitarity needs the scaled operator, so p < 1");
    double max_sq = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double k = -kPi + 2.0 * kPi * i / n_grid;
        const BlochVector b = bloch_decompose(seq, k, /*gamma_scaled=*/true);
        if (std::abs(b.n0.imag()) > 1e-9)
            throw ComplexN0("Im n0 = " + std::to_string(b.n0.imag()) +
                            " at k = " + std::to_string(k));
        max_sq = std::max(max_sq, b.n0.real() * b.n0.real());
    }
    return {max_sq <= 1.0, max_sq};
}

double pseudo_unitarity_witness(const BlochVector& b) {
    const Complex i(0, 1);
    const Complex nn = b.n1 * b.n1 + b.n2 * b.n2 + b.n3 * b.n3;
    const Complex s = std::sqrt(nn);
    const Complex lp = b.n0 - i * s, lm = b.n0 + i * s;
    if (std::abs(lp - lm) < 1e-10)
        throw DegenerateSpectrum("lambda_+ == lambda_- at k = " + std::to_string(b.k));
    if (std::abs(std::abs(lp) - 1.0) > 1e-6 || std::abs(std::abs(lm) - 1.0) > 1e-6)
        throw std::invalid_argument(
            "pseudo_unitarity_witness: |lambda| != 1 (non-pseudo-unitary k-point)");

    // Biorthonormal right eigenvectors of U = n0 - i n.sigma in closed form.
    const Complex np = 2.0 * s * (s + b.n3), nm = 2.0 * s * (s - b.n3);
    const Complex Np = std::sqrt(np), Nm = std::sqrt(nm);
    if (std::abs(np) < 1e-20 || std::abs(nm) < 1e-20)
        throw DegenerateSpectrum("eigenvector normalization vanished at k = " +
                                 std::to_string(b.k));
    Vec2 psi_p, psi_m;
    psi_p << (b.n3 + s) / Np, (b.n1 + i * b.n2) / Np;
    psi_m << (b.n3 - s) / Nm, (b.n1 + i * b.n2) / Nm;

    // O maps the orthonormal {+,-} basis onto the biorthonormal eigenbasis;
    // eta = O O^dag then flattens the non-orthogonality of {psi_+, psi_-}.
    Mat2 O = psi_p * CoinState::plus.adjoint() + psi_m * CoinState::minus.adjoint();
    Mat2 eta = O * O.adjoint();

    const Mat2 u = from_bloch(b);
    const Mat2 lhs = u.inverse();
    const Mat2 rhs = eta * u.adjoint() * eta.inverse();
    return (lhs - rhs).norm();
}

double m2_group_velocity_oracle(const FloquetSequence& seq, int n_grid, int* excluded) {
    if (seq.loss.p != 0.0)
        throw InvalidConfig("group-velocity oracle is the unitary (p = 0) limit");
    std::vector<double> n0(static_cast<std::size_t>(n_grid));
    for (int i = 0; i < n_grid; ++i) {
        const double k = -kPi + 2.0 * kPi * i / n_grid;
        n0[static_cast<std::size_t>(i)] = bloch_decompose(seq, k).n0.real();
    }
    // E_k = arccos(n0) band: (dE/dk)^2 = (dn0/dk)^2 / (1 - n0^2). Uniform
    // periodic grid, centered differences; the masked mean equals the
    // (1/2pi) integral with near-gapless points excluded.
    const double h = 2.0 * kPi / n_grid;
    double sum = 0.0;
    int used = 0, skipped = 0;
    for (int i = 0; i < n_grid; ++i) {
        const double denom = 1.0 - n0[static_cast<std::size_t>(i)] * n0[static_cast<std::size_t>(i)];
        if (std::abs(denom) < 1e-10) {
            ++skipped;
            continue;
        }
        const double prev = n0[static_cast<std::size_t>((i - 1 + n_grid) % n_grid)];
        const double next = n0[static_cast<std::size_t>((i + 1) % n_grid)];
        const double d = (next - prev) / (2.0 * h);
        sum += d * d / denom;
        ++used;
    }
    if (excluded) *excluded = skipped;
    if (used == 0) throw GapClosed("group-velocity integrand empty: band is flat/gapless");
    return sum / used;
}

PhaseDiagram phase_diagram(Family family, LossParams loss, int n1, int n2,
                           std::array<double, 2> theta1_range,
                           std::array<double, 2> theta2_range, int n_grid,
                           int threads) {
    if (n1 < 1 || n2 < 1) throw InvalidConfig("phase diagram grid must be >= 1x1");
    PhaseDiagram pd;
    pd.n1 = n1;
    pd.n2 = n2;
    pd.theta1s.resize(static_cast<std::size_t>(n1));
    pd.theta2s.resize(static_cast<std::size_t>(n2));
    for (int i = 0; i < n1; ++i)
        pd.theta1s[static_cast<std::size_t>(i)] =
            n1 == 1 ? theta1_range[0]
                    : theta1_range[0] + (theta1_range[1] - theta1_range[0]) * i / (n1 - 1);
    for (int j = 0; j < n2; ++j)
        pd.theta2s[static_cast<std::size_t>(j)] =
            n2 == 1 ? theta2_range[0]
                    : theta2_range[0] + (theta2_range[1] - theta2_range[0]) * j / (n2 - 1);

    pd.cells.assign(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2),
                    std::nullopt);
    parallel_for(
        n1 * n2,
        [&](int idx) {
            const int i = idx / n2, j = idx % n2;
            const CoinParams coin{pd.theta1s[static_cast<std::size_t>(i)],
                                  pd.theta2s[static_cast<std::size_t>(j)]};
            try {
                pd.cells[static_cast<std::size_t>(idx)] =
                    winding_pair(coin, loss, family, n_grid);
            } catch (const GapClosed&) {
                // boundary cell; leave nullopt
            }
        },
        threads);
    return pd;
}

} // namespace qwalk
