#include "qwalk/core.hpp"

#include <cmath>

namespace qwalk {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double LossParams::gamma() const {
    if (p >= 1.0)
        throw GammaUndefined("gamma = (1-p)^(-1/4) undefined at p = 1");
    return std::pow(1.0 - p, -0.25);
}

const Vec2 CoinState::H{Complex(1, 0), Complex(0, 0)};
const Vec2 CoinState::V{Complex(0, 0), Complex(1, 0)};
const Vec2 CoinState::plus{Complex(kInvSqrt2, 0), Complex(kInvSqrt2, 0)};
const Vec2 CoinState::minus{Complex(kInvSqrt2, 0), Complex(-kInvSqrt2, 0)};

Mat2 rotation_matrix(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

Mat2 loss_matrix(double p) {
    // M = |+><+| + q|-><-| with q = sqrt(1-p); in the {H,V} basis
    // M = [[1+q, 1-q], [1-q, 1+q]] / 2.
    const double q = std::sqrt(1.0 - p);
    Mat2 m;
    m << 0.5 * (1 + q), 0.5 * (1 - q), 0.5 * (1 - q), 0.5 * (1 + q);
    return m;
}

PrimitiveOp PrimitiveOp::coin_rotation(double theta) {
    PrimitiveOp op;
    op.kind = Kind::coin;
    op.theta = theta;
    return op;
}

PrimitiveOp PrimitiveOp::coin_term(double c1, double c2, const CoinParams& base) {
    PrimitiveOp op;
    op.kind = Kind::coin;
    op.c1 = c1;
    op.c2 = c2;
    op.theta = c1 * base.theta1 + c2 * base.theta2;
    return op;
}

PrimitiveOp PrimitiveOp::shift() { return {Kind::shift}; }
PrimitiveOp PrimitiveOp::shift_up() { return {Kind::shift_up}; }
PrimitiveOp PrimitiveOp::shift_down() { return {Kind::shift_down}; }

PrimitiveOp PrimitiveOp::loss(double p) {
    PrimitiveOp op;
    op.kind = Kind::loss;
    op.p = p;
    return op;
}

Family family_of(Variant v) {
    switch (v) {
    case Variant::u3p:
    case Variant::u3pp: return Family::three_step;
    case Variant::u4p:
    case Variant::u4pp: return Family::four_step;
    case Variant::w4p:
    case Variant::w4pp: return Family::w_four_step;
    }
    throw InvalidConfig("unknown variant tag");
}

Frame frame_of(Variant v) {
    switch (v) {
    case Variant::u3p:
    case Variant::u4p:
    case Variant::w4p: return Frame::prime;
    default: return Frame::double_prime;
    }
}

Variant variant_of(Family f, Frame fr) {
    const bool prime = (fr == Frame::prime);
    switch (f) {
    case Family::three_step: return prime ? Variant::u3p : Variant::u3pp;
    case Family::four_step: return prime ? Variant::u4p : Variant::u4pp;
    case Family::w_four_step: return prime ? Variant::w4p : Variant::w4pp;
    }
    throw InvalidConfig("unknown family tag");
}

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::u3p: return "U3p";
    case Variant::u3pp: return "U3pp";
    case Variant::u4p: return "U4p";
    case Variant::u4pp: return "U4pp";
    case Variant::w4p: return "W4p";
    case Variant::w4pp: return "W4pp";
    }
    throw InvalidConfig("unknown variant tag");
}

CoinParams FloquetSequence::params_at(int x, int t) const {
    CoinParams p = coin_field ? coin_field(x) : coin;
    if (coin_series) {
        const double d = coin_series(t);
        p.theta1 += d;
        p.theta2 += d;
    }
    return p;
}

int FloquetSequence::growth_radius() const {
    // A full Shift moves amplitude one site both ways; an up/down pair adds
    // one more site to each side (ShiftUp right, ShiftDown left).
    int shifts = 0, ups = 0;
    for (const auto& op : ops) {
        if (op.kind == PrimitiveOp::Kind::shift) ++shifts;
        if (op.kind == PrimitiveOp::Kind::shift_up) ++ups;
    }
    return shifts + ups;
}

FloquetSequence build_floquet(Variant v, CoinParams coin, LossParams loss) {
    if (loss.p < 0.0 || loss.p > 1.0)
        throw InvalidConfig("loss probability must lie in [0, 1]");

    FloquetSequence seq;
    seq.variant = v;
    seq.coin = coin;
    seq.loss = loss;

    using Op = PrimitiveOp;
    auto coin_op = [&](double c1, double c2) { return Op::coin_term(c1, c2, coin); };

    switch (v) {
    case Variant::u3p:
        seq.ops = {coin_op(0.5, 0), Op::shift(), coin_op(0, 1), Op::shift(),
                   coin_op(0, 1),   Op::shift(), coin_op(0.5, 0)};
        break;
    case Variant::u3pp:
        seq.ops = {Op::shift_down(), coin_op(0, 1), Op::shift(), coin_op(1, 0),
                   Op::shift(),      coin_op(0, 1), Op::shift_up()};
        break;
    case Variant::u4p:
        seq.ops = {coin_op(0.5, 0), Op::shift(), coin_op(0, 0), Op::shift(),
                   coin_op(0, 1),   Op::shift(), coin_op(0, 0), Op::shift(),
                   coin_op(0.5, 0)};
        break;
    case Variant::u4pp:
        // theta1 <-> theta2 relative to u4p
        seq.ops = {coin_op(0, 0.5), Op::shift(), coin_op(0, 0), Op::shift(),
                   coin_op(1, 0),   Op::shift(), coin_op(0, 0), Op::shift(),
                   coin_op(0, 0.5)};
        break;
    case Variant::w4p:
        seq.ops = {coin_op(0.5, 0), Op::shift(), coin_op(0, 1), Op::shift(),
                   Op::shift(),     coin_op(0, 1), Op::shift(), coin_op(0.5, 0)};
        break;
    case Variant::w4pp:
        seq.ops = {Op::shift(), coin_op(0, 1),   Op::shift(), coin_op(0.5, 0),
                   coin_op(0.5, 0), Op::shift(), coin_op(0, 1), Op::shift()};
        break;
    default:
        throw InvalidConfig("unknown variant tag");
    }
    seq.ops.push_back(Op::loss(loss.p));
    return seq;
}

WalkerState WalkerState::localized(int x, const Vec2& coin) {
    WalkerState s;
    s.offset = x;
    s.amps = {coin};
    return s;
}

Vec2 WalkerState::at(int x) const {
    if (x < lo() || x > hi()) return Vec2::Zero();
    return amps[static_cast<std::size_t>(x - offset)];
}

double WalkerState::norm2() const {
    double n = 0.0;
    for (const auto& a : amps) n += a.squaredNorm();
    return n;
}

double LossDensity::total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

double LossDensity::at(int x) const {
    const int i = x - offset;
    if (i < 0 || i >= static_cast<int>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(i)];
}

namespace {

// In-place primitives on a grown window. Shift semantics: the H component
// moves x -> x-1, the V component moves x -> x+1; up/down move only V/H.

void shift_h_left(std::vector<Vec2>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i) a[i](0) = a[i + 1](0);
    a[n - 1](0) = Complex(0, 0);
}

void shift_v_right(std::vector<Vec2>& a) {
    for (std::size_t i = a.size(); i-- > 1;) a[i](1) = a[i - 1](1);
    a[0](1) = Complex(0, 0);
}

void apply_coin_uniform(std::vector<Vec2>& a, const Mat2& r) {
    for (auto& v : a) v = r * v;
}

// Applies the loss map and accumulates p*|<x,-|psi>|^2 into dens.
void apply_loss(std::vector<Vec2>& a, double p, std::vector<double>& dens) {
    const double q = std::sqrt(1.0 - p);
    const double ca = 0.5 * (1 + q), cb = 0.5 * (1 - q);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Complex m = (a[i](0) - a[i](1)) * kInvSqrt2;
        dens[i] += p * std::norm(m);
        const Complex h = ca * a[i](0) + cb * a[i](1);
        const Complex v = cb * a[i](0) + ca * a[i](1);
        a[i](0) = h;
        a[i](1) = v;
    }
}

WalkerState grown(const WalkerState& s, int left, int right) {
    WalkerState g;
    g.offset = s.offset - left;
    g.amps.assign(s.amps.size() + static_cast<std::size_t>(left + right), Vec2::Zero());
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        g.amps[i + static_cast<std::size_t>(left)] = s.amps[i];
    return g;
}

} // namespace

std::pair<WalkerState, LossDensity> apply_primitive(const WalkerState& state,
                                                    const PrimitiveOp& op) {
    using Kind = PrimitiveOp::Kind;
    LossDensity dens;
    switch (op.kind) {
    case Kind::coin: {
        WalkerState out = state;
        apply_coin_uniform(out.amps, rotation_matrix(op.theta));
        return {std::move(out), std::move(dens)};
    }
    case Kind::shift: {
        WalkerState out = grown(state, 1, 1);
        shift_h_left(out.amps);
        shift_v_right(out.amps);
        return {std::move(out), std::move(dens)};
    }
    case Kind::shift_up: {
        WalkerState out = grown(state, 0, 1);
        shift_v_right(out.amps);
        return {std::move(out), std::move(dens)};
    }
    case Kind::shift_down: {
        WalkerState out = grown(state, 1, 0);
        shift_h_left(out.amps);
        return {std::move(out), std::move(dens)};
    }
    case Kind::loss: {
        WalkerState out = state;
        dens.offset = out.offset;
        dens.values.assign(out.amps.size(), 0.0);
        apply_loss(out.amps, op.p, dens.values);
        return {std::move(out), std::move(dens)};
    }
    }
    throw InvalidConfig("unknown primitive kind");
}

std::pair<WalkerState, LossDensity> step(const WalkerState& state,
                                         const FloquetSequence& seq, int t) {
    const int r = seq.growth_radius();
    WalkerState out = grown(state, r, r);

    LossDensity dens;
    dens.offset = out.offset;
    dens.values.assign(out.amps.size(), 0.0);

    const bool inhom = !seq.homogeneous();
    for (const auto& op : seq.ops) {
        switch (op.kind) {
        case PrimitiveOp::Kind::coin:
            if (inhom) {
                for (std::size_t i = 0; i < out.amps.size(); ++i) {
                    const CoinParams cp = seq.params_at(out.offset + static_cast<int>(i), t);
                    const double th = op.c1 * cp.theta1 + op.c2 * cp.theta2;
                    out.amps[i] = rotation_matrix(th) * out.amps[i];
                }
            } else {
                apply_coin_uniform(out.amps, rotation_matrix(op.theta));
            }
            break;
        case PrimitiveOp::Kind::shift:
            shift_h_left(out.amps);
            shift_v_right(out.amps);
            break;
        case PrimitiveOp::Kind::shift_up:
            shift_v_right(out.amps);
            break;
        case PrimitiveOp::Kind::shift_down:
            shift_h_left(out.amps);
            break;
        case PrimitiveOp::Kind::loss:
            apply_loss(out.amps, op.p, dens.values);
            break;
        }
    }
    return {std::move(out), std::move(dens)};
}

} // namespace qwalk
