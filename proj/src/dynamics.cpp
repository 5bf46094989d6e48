#include "qwalk/dynamics.hpp"

#include <cmath>

namespace qwalk {

namespace {
constexpr double kSurvivalFloor = 1e-14;
} // namespace

const WalkerState& Trajectory::state_at(int t) const {
    if (t == 0) return initial;
    return states.at(static_cast<std::size_t>(t - 1));
}

Trajectory evolve(const FloquetSequence& seq, const WalkerState& initial, int t_max) {
    if (t_max < 0) throw InvalidConfig("evolve needs t_max >= 0");
    Trajectory traj;
    traj.initial = initial;
    traj.states.reserve(static_cast<std::size_t>(t_max));
    traj.losses.reserve(static_cast<std::size_t>(t_max));
    WalkerState cur = initial;
    for (int t = 1; t <= t_max; ++t) {
        auto [next, loss] = step(cur, seq, t);
        traj.states.push_back(next);
        traj.losses.push_back(std::move(loss));
        cur = std::move(next);
    }
    return traj;
}

Trajectory evolve(const FloquetSequence& seq, int t_max) {
    return evolve(seq, WalkerState::localized(0, CoinState::plus), t_max);
}

double average_displacement(const Trajectory& traj) {
    double sum = 0.0;
    for (const auto& loss : traj.losses)
        for (std::size_t i = 0; i < loss.values.size(); ++i)
            sum += (loss.offset + static_cast<int>(i)) * loss.values[i];
    return sum;
}

SecondMoment second_moment(const WalkerState& state, int t) {
    if (t < 1) throw InvalidConfig("second_moment needs t >= 1");
    double norm = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        const double x = state.offset + static_cast<int>(i);
        const double dens = state.amps[i].squaredNorm();
        norm += dens;
        weighted += x * x * dens;
    }
    if (norm < kSurvivalFloor)
        throw ZeroSurvival("surviving norm " + std::to_string(norm) +
                           " below threshold at t = " + std::to_string(t));
    SecondMoment m;
    m.m2 = weighted / norm;
    m.m2_over_t2 = m.m2 / (static_cast<double>(t) * t);
    return m;
}

ChiralDisplacement chiral_displacement(const WalkerState& state) {
    double norm = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        const double x = state.offset + static_cast<int>(i);
        norm += state.amps[i].squaredNorm();
        weighted += x * 2.0 * (std::conj(state.amps[i](0)) * state.amps[i](1)).real();
    }
    if (norm < kSurvivalFloor)
        throw ZeroSurvival("surviving norm " + std::to_string(norm) + " too small");
    ChiralDisplacement c;
    c.C = weighted / norm;
    c.minus_two_C = -2.0 * c.C;
    return c;
}

double CorrectedDensity::at(int t, int x) const {
    const auto& row = rows.at(static_cast<std::size_t>(t));
    const int i = x - offset;
    if (i < 0 || i >= static_cast<int>(row.size())) return 0.0;
    return row[static_cast<std::size_t>(i)];
}

int CorrectedDensity::peak_of(int t) const {
    const auto& row = rows.at(static_cast<std::size_t>(t));
    std::size_t best = 0;
    for (std::size_t i = 1; i < row.size(); ++i)
        if (row[i] > row[best]) best = i;
    return offset + static_cast<int>(best);
}

CorrectedDensity corrected_probability(const Trajectory& traj, LossParams loss) {
    const double gamma = loss.gamma(); // throws for p >= 1
    const WalkerState& last =
        traj.states.empty() ? traj.initial : traj.states.back();
    CorrectedDensity out;
    out.offset = last.lo();
    const int width = last.hi() - last.lo() + 1;
    out.rows.reserve(static_cast<std::size_t>(traj.steps()) + 1);
    double scale = 1.0; // gamma^{2t}
    for (int t = 0; t <= traj.steps(); ++t) {
        const WalkerState& st = traj.state_at(t);
        std::vector<double> row(static_cast<std::size_t>(width), 0.0);
        for (int x = st.lo(); x <= st.hi(); ++x) {
            const int i = x - out.offset;
            if (i < 0 || i >= width) continue;
            row[static_cast<std::size_t>(i)] = scale * st.at(x).squaredNorm();
        }
        out.rows.push_back(std::move(row));
        scale *= gamma * gamma;
    }
    return out;
}

ObservableSeries displacement_series(const Trajectory& traj) {
    ObservableSeries s;
    double sum = 0.0;
    for (int t = 1; t <= traj.steps(); ++t) {
        const auto& loss = traj.losses[static_cast<std::size_t>(t - 1)];
        for (std::size_t i = 0; i < loss.values.size(); ++i)
            sum += (loss.offset + static_cast<int>(i)) * loss.values[i];
        s.t.push_back(t);
        s.value.push_back(sum);
    }
    return s;
}

ObservableSeries m2_series(const Trajectory& traj) {
    ObservableSeries s;
    for (int t = 1; t <= traj.steps(); ++t) {
        s.t.push_back(t);
        s.value.push_back(second_moment(traj.state_at(t), t).m2);
    }
    return s;
}

ObservableSeries chiral_series(const Trajectory& traj) {
    ObservableSeries s;
    for (int t = 1; t <= traj.steps(); ++t) {
        s.t.push_back(t);
        s.value.push_back(chiral_displacement(traj.state_at(t)).minus_two_C);
    }
    return s;
}

ObservableSeries survival_series(const Trajectory& traj) {
    ObservableSeries s;
    for (int t = 0; t <= traj.steps(); ++t) {
        s.t.push_back(t);
        s.value.push_back(traj.state_at(t).norm2());
    }
    return s;
}

} // namespace qwalk
