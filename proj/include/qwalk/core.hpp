#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct CoinParams {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

struct LossParams {
    // Strength of the per-step partial measurement of the |-> coin component.
    // p = 0 is the unitary walk, p = 1 removes |-> completely each step.
    double p = 0.0;

    // gamma = (1-p)^(-1/4), the homogeneous-decay compensation factor.
    // Defined only for p < 1.
    double gamma() const;
};

// Coin basis {|H>, |V>} and the measurement basis |+->= (|H> +- |V>)/sqrt(2).
struct CoinState {
    static const Vec2 H;
    static const Vec2 V;
    static const Vec2 plus;
    static const Vec2 minus;
};

// ---------------------------------------------------------------------------
// Primitive operators
// ---------------------------------------------------------------------------

// Coin rotation R(theta) = exp(-i theta sigma_y) = [[cos,-sin],[sin,cos]]
// in the {H, V} basis.
Mat2 rotation_matrix(double theta);

// Loss operator M = |+><+| + sqrt(1-p)|-><-|, written in the {H, V} basis.
Mat2 loss_matrix(double p);

// One factor of a Floquet word. Coin rotations remember their angle as a
// linear form c1*theta1 + c2*theta2 so that position- or time-dependent coin
// parameters can be re-resolved per site/step; `theta` caches the value for
// the sequence's homogeneous base parameters.
struct PrimitiveOp {
    enum class Kind { coin, shift, shift_up, shift_down, loss };

    Kind kind = Kind::shift;
    double theta = 0.0; // coin only: resolved angle for the base parameters
    double c1 = 0.0;    // coin only: coefficient of theta1
    double c2 = 0.0;    // coin only: coefficient of theta2
    double p = 0.0;     // loss only

    static PrimitiveOp coin_rotation(double theta);
    static PrimitiveOp coin_term(double c1, double c2, const CoinParams& base);
    static PrimitiveOp shift();
    static PrimitiveOp shift_up();
    static PrimitiveOp shift_down();
    static PrimitiveOp loss(double p);
};

// ---------------------------------------------------------------------------
// Floquet sequences
// ---------------------------------------------------------------------------

// The six operator words. Primed/double-primed pairs are the two
// chiral-symmetric time frames of the same walk.
enum class Variant { u3p, u3pp, u4p, u4pp, w4p, w4pp };
enum class Frame { prime, double_prime };
enum class Family { three_step, four_step, w_four_step };

Family family_of(Variant v);
Frame frame_of(Variant v);
Variant variant_of(Family f, Frame fr);
std::string variant_name(Variant v);

// One driving period. `ops` is stored in APPLICATION order: ops.front() acts
// on the state first. (Operator products in the usual right-to-left notation
// read the reverse way; storing application order removes that off-by-one.)
struct FloquetSequence {
    Variant variant = Variant::u3p;
    CoinParams coin;
    LossParams loss;
    std::vector<PrimitiveOp> ops;

    // Inhomogeneous walks: per-site coin parameters (overrides `coin`).
    std::function<CoinParams(int x)> coin_field;
    // Dynamic disorder: per-step offset added to both theta1 and theta2.
    std::function<double(int t)> coin_series;

    bool homogeneous() const { return !coin_field && !coin_series; }

    // Coin parameters in effect at site x during step t (t is 1-based).
    CoinParams params_at(int x, int t) const;

    // Sites gained per side per period (3 for three-step, 4 for four-step).
    int growth_radius() const;
};

// Builds the operator word of a variant, in application order, e.g.
//   U3p  = [R(t1/2), S, R(t2), S, R(t2), S, R(t1/2), Loss]
//   U3pp = [S_down, R(t2), S, R(t1), S, R(t2), S_up, Loss]
// Loss is always the final factor of the period.
FloquetSequence build_floquet(Variant v, CoinParams coin, LossParams loss);

// ---------------------------------------------------------------------------
// Walker states
// ---------------------------------------------------------------------------

// Finite-support walker: a dense window of coin spinors starting at `offset`.
struct WalkerState {
    int offset = 0; // lattice position of amps.front()
    std::vector<Vec2> amps;

    static WalkerState localized(int x, const Vec2& coin);

    int lo() const { return offset; }
    int hi() const { return offset + static_cast<int>(amps.size()) - 1; }
    Vec2 at(int x) const; // zero outside the window
    double norm2() const;
};

// Per-site measured-loss probabilities recorded by one Loss application.
struct LossDensity {
    int offset = 0;
    std::vector<double> values;

    double total() const;
    double at(int x) const; // zero outside the window
};

// Applies a single primitive. Shifts grow the window by one site on the
// receiving side; only Loss produces a non-empty density:
//   loss_density(x) = p * |<x,-|psi>|^2,  state -> M|psi> sitewise.
std::pair<WalkerState, LossDensity> apply_primitive(const WalkerState& state,
                                                    const PrimitiveOp& op);

// Applies one full period (all primitives in order) for step index t >= 1,
// resolving coin_field/coin_series when present. The window is grown once by
// the sequence's growth radius, so the evolution is exact (no truncation).
std::pair<WalkerState, LossDensity> step(const WalkerState& state,
                                         const FloquetSequence& seq, int t);

} // namespace qwalk
