#include "qwalk/lattice.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

int ring_distance(int a, int b, int n) {
    int d = std::abs(a - b) % n;
    return std::min(d, n - d);
}

} // namespace

CoinParams LatticeConfig::coin_at(int x) const {
    for (const auto& r : regions)
        if (x >= r.lo && x <= r.hi) return r.coin;
    throw InvalidConfig("site " + std::to_string(x) + " not covered by any region");
}

Eigen::MatrixXcd build_lattice_floquet(const LatticeConfig& config) {
    const int n = config.n_sites;
    if (n < 3 || n % 2 == 0)
        throw InvalidConfig("lattice needs an odd site count >= 3");
    if (config.regions.empty()) throw InvalidConfig("lattice needs at least one region");

    // The regions must tile [x_min, x_max] exactly: no gaps, no overlaps.
    std::vector<Region> sorted = config.regions;
    std::sort(sorted.begin(), sorted.end(),
              [](const Region& a, const Region& b) { return a.lo < b.lo; });
    int expect = config.x_min();
    for (const auto& r : sorted) {
        if (r.lo != expect || r.hi < r.lo)
            throw InvalidConfig("regions must partition the ring without gaps or overlaps");
        expect = r.hi + 1;
    }
    if (expect != config.x_max() + 1)
        throw InvalidConfig("regions must cover the ring exactly");

    const FloquetSequence seq =
        build_floquet(config.variant, sorted.front().coin, config.loss);

    const int dim = 2 * n;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    using Kind = PrimitiveOp::Kind;
    for (const auto& op : seq.ops) {
        switch (op.kind) {
        case Kind::coin:
            for (int i = 0; i < n; ++i) {
                const CoinParams cp = config.coin_at(config.x_min() + i);
                const Mat2 r = rotation_matrix(op.c1 * cp.theta1 + op.c2 * cp.theta2);
                u.middleRows(2 * i, 2) = (r * u.middleRows(2 * i, 2)).eval();
            }
            break;
        case Kind::loss: {
            const Mat2 m = loss_matrix(op.p);
            for (int i = 0; i < n; ++i)
                u.middleRows(2 * i, 2) = (m * u.middleRows(2 * i, 2)).eval();
            break;
        }
        case Kind::shift:
        case Kind::shift_up:
        case Kind::shift_down: {
            // Left-multiplying by a shift permutes rows: the new H row of
            // site i is the old H row of site i+1 (H hops to x-1), the new V
            // row of site i is the old V row of site i-1 (V hops to x+1).
            const bool move_h = op.kind != Kind::shift_up;
            const bool move_v = op.kind != Kind::shift_down;
            Eigen::MatrixXcd next(dim, dim);
            for (int i = 0; i < n; ++i) {
                const int from_h = move_h ? (i + 1) % n : i;
                const int from_v = move_v ? (i - 1 + n) % n : i;
                next.row(2 * i) = u.row(2 * from_h);
                next.row(2 * i + 1) = u.row(2 * from_v + 1);
            }
            u = std::move(next);
            break;
        }
        }
    }
    return u;
}

Spectrum spectrum(const Eigen::MatrixXcd& u) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw EigensolverFailure("dense eigensolver did not converge");
    Spectrum s;
    s.lambdas = solver.eigenvalues();
    s.vectors = solver.eigenvectors();
    const double scale = std::max(1.0, u.norm());
    for (int j = 0; j < s.lambdas.size(); ++j) {
        const double resid =
            (u * s.vectors.col(j) - s.lambdas(j) * s.vectors.col(j)).norm();
        if (resid > 1e-8 * scale)
            throw EigensolverFailure("eigenpair residual " + std::to_string(resid) +
                                     " at column " + std::to_string(j));
        Complex eps = Complex(0, 1) * std::log(s.lambdas(j));
        if (eps.real() <= -kPi) eps += Complex(2.0 * kPi, 0);
        s.epsilons.push_back(eps);
    }
    return s;
}

std::vector<double> site_density(const Eigen::MatrixXcd& vectors, int column) {
    const int n = static_cast<int>(vectors.rows()) / 2;
    std::vector<double> dens(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = std::norm(vectors(2 * i, column)) +
                         std::norm(vectors(2 * i + 1, column));
        dens[static_cast<std::size_t>(i)] = d;
        total += d;
    }
    if (total <= 0.0) throw ZeroSurvival("eigenvector has zero norm");
    for (auto& d : dens) d /= total;
    return dens;
}

double inverse_participation_ratio(const std::vector<double>& density) {
    double ipr = 0.0;
    for (double d : density) ipr += d * d;
    return ipr;
}

std::vector<EdgeState> classify_edge_states(const LatticeConfig& config,
                                            const Spectrum& spec, double eps_arg,
                                            double ipr_min) {
    std::vector<EdgeState> out;
    for (int j = 0; j < spec.lambdas.size(); ++j) {
        const double re = spec.epsilons[static_cast<std::size_t>(j)].real();
        const double to_zero = std::abs(re);
        const double to_pi = std::abs(kPi - std::abs(re));
        if (to_zero > eps_arg && to_pi > eps_arg) continue;
        auto dens = site_density(spec.vectors, j);
        const double ipr = inverse_participation_ratio(dens);
        if (ipr <= ipr_min) continue;
        EdgeState e;
        e.index = j;
        e.lambda = spec.lambdas(j);
        e.eps = spec.epsilons[static_cast<std::size_t>(j)];
        e.cls = to_zero <= to_pi ? EpsClass::zero : EpsClass::pi;
        e.ipr = ipr;
        e.center = config.x_min() +
                   static_cast<int>(std::max_element(dens.begin(), dens.end()) -
                                    dens.begin());
        e.profile = std::move(dens);
        out.push_back(std::move(e));
    }
    return out;
}

bool BulkBoundaryReport::passes() const {
    if (boundaries.empty()) return false;
    int assigned = 0;
    for (const auto& b : boundaries) {
        if (!b.passes()) return false;
        assigned += b.found_zero + b.found_pi;
    }
    return assigned == static_cast<int>(edge_states.size());
}

BulkBoundaryReport bulk_boundary_check(const LatticeConfig& config,
                                       const Spectrum& spec, double eps_arg,
                                       double ipr_min) {
    if (config.regions.size() != 2)
        throw InvalidConfig("bulk-boundary check expects exactly two regions");

    std::vector<Region> sorted = config.regions;
    std::sort(sorted.begin(), sorted.end(),
              [](const Region& a, const Region& b) { return a.lo < b.lo; });

    const Family family = family_of(config.variant);
    const SymmetrizedInvariants left =
        nu0_nupi(winding_pair(sorted[0].coin, config.loss, family));
    const SymmetrizedInvariants right =
        nu0_nupi(winding_pair(sorted[1].coin, config.loss, family));

    BulkBoundaryReport report;
    // Interfaces sit at the first site of each region: between sorted[0] and
    // sorted[1] at sorted[1].lo, and across the ring wrap at sorted[0].lo.
    BoundaryReport inner, outer;
    inner.site = sorted[1].lo;
    inner.delta_nu0 = right.nu0 - left.nu0;
    inner.delta_nu_pi = right.nu_pi - left.nu_pi;
    outer.site = sorted[0].lo;
    outer.delta_nu0 = left.nu0 - right.nu0;
    outer.delta_nu_pi = left.nu_pi - right.nu_pi;
    for (auto* b : {&inner, &outer}) {
        b->expected_zero = static_cast<int>(std::lround(std::abs(b->delta_nu0)));
        b->expected_pi = static_cast<int>(std::lround(std::abs(b->delta_nu_pi)));
    }

    report.edge_states = classify_edge_states(config, spec, eps_arg, ipr_min);
    for (const auto& e : report.edge_states) {
        // A boundary at site s is the bond between s-1 and s; measure ring
        // distance to its nearer endpoint.
        auto dist = [&](const BoundaryReport& b) {
            return std::min(ring_distance(e.center, b.site, config.n_sites),
                            ring_distance(e.center, b.site - 1, config.n_sites));
        };
        BoundaryReport& target = dist(inner) <= dist(outer) ? inner : outer;
        (e.cls == EpsClass::zero ? target.found_zero : target.found_pi) += 1;
    }

    report.boundaries = {inner, outer};
    return report;
}

} // namespace qwalk
