#pragma once

#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

// Full record of an evolution: states[t-1] is the (unnormalized) walker after
// step t, losses[t-1] the site-resolved probability measured during step t.
struct Trajectory {
    WalkerState initial;
    std::vector<WalkerState> states;
    std::vector<LossDensity> losses;

    int steps() const { return static_cast<int>(states.size()); }
    const WalkerState& state_at(int t) const; // t = 0 returns `initial`
};

Trajectory evolve(const FloquetSequence& seq, const WalkerState& initial, int t_max);

// Evolution from the canonical initial state |x=0> (x) |+>.
Trajectory evolve(const FloquetSequence& seq, int t_max);

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

// <Delta x>(T) = sum_{t<=T} sum_x x * loss_t(x). No denominator: the measured
// probabilities themselves sum to 1 as T grows, so the bare first moment of
// the detection record is the average displacement of the measured walker.
double average_displacement(const Trajectory& traj);

struct SecondMoment {
    double m2 = 0.0;         // survival-normalized sum_x x^2 P(x, t)
    double m2_over_t2 = 0.0; // ballistic scaling m2 / t^2
};

// Second moment of the surviving density after step t (t >= 1). Throws
// ZeroSurvival when the surviving norm is below 1e-14.
SecondMoment second_moment(const WalkerState& state, int t);

struct ChiralDisplacement {
    double C = 0.0;
    double minus_two_C = 0.0; // -2C converges to the winding number nu'
};

// C = <x Gamma> / <1> of the surviving walker, with chiral operator
// Gamma = sigma_x, i.e. site density 2 Re(conj(a_H) a_V) weighted by x.
ChiralDisplacement chiral_displacement(const WalkerState& state);

// ---------------------------------------------------------------------------
// Loss-compensated density
// ---------------------------------------------------------------------------

// P_C(x, t) = gamma^{2t} |psi_t(x)|^2: survival density with the homogeneous
// decay divided out, so only genuinely non-decaying structure (dark edge
// states) survives at late times. Rows share one window.
struct CorrectedDensity {
    int offset = 0;                        // x of column 0
    std::vector<std::vector<double>> rows; // rows[t], t = 0..steps

    double at(int t, int x) const;
    int peak_of(int t) const; // x with the largest density in row t
};

// Requires p < 1 (gamma must exist).
CorrectedDensity corrected_probability(const Trajectory& traj, LossParams loss);

// ---------------------------------------------------------------------------
// Time series
// ---------------------------------------------------------------------------

struct ObservableSeries {
    std::vector<int> t;
    std::vector<double> value;
};

ObservableSeries displacement_series(const Trajectory& traj); // cumulative <Delta x>
ObservableSeries m2_series(const Trajectory& traj);           // m2(t)
ObservableSeries chiral_series(const Trajectory& traj);       // -2C(t)
ObservableSeries survival_series(const Trajectory& traj);     // ||psi_t||^2

} // namespace qwalk
