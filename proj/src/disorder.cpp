#include "qwalk/disorder.hpp"

#include <cmath>

#include "qwalk/parallel.hpp"

namespace qwalk {

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return SplitMix64(master + index * 0x9E3779B97F4A7C15ULL).next();
}

double DisorderSample::offset1_at(int x) const {
    if (kind == DisorderKind::static_coin) {
        if (x < -extent || x > extent) return 0.0;
        return d1[static_cast<std::size_t>(x + extent)];
    }
    if (x < 1 || x > extent) return 0.0; // dynamic: x is the step index
    return d1[static_cast<std::size_t>(x - 1)];
}

double DisorderSample::offset2_at(int x) const {
    if (!independent) return offset1_at(x);
    if (x < -extent || x > extent) return 0.0;
    return d2[static_cast<std::size_t>(x + extent)];
}

std::function<CoinParams(int)> DisorderSample::as_field(
    std::function<CoinParams(int)> clean) const {
    if (kind != DisorderKind::static_coin)
        throw InvalidConfig("as_field is only meaningful for static disorder");
    return [clean = std::move(clean), *this](int x) {
        CoinParams cp = clean(x);
        cp.theta1 += offset1_at(x);
        cp.theta2 += offset2_at(x);
        return cp;
    };
}

std::function<CoinParams(int)> DisorderSample::as_field(CoinParams base) const {
    return as_field([base](int) { return base; });
}

std::function<double(int)> DisorderSample::as_series() const {
    if (kind != DisorderKind::dynamic_coin)
        throw InvalidConfig("as_series is only meaningful for dynamic disorder");
    return [*this](int t) { return offset1_at(t); };
}

DisorderSample sample_disorder(const DisorderSpec& spec, int extent, int ensemble) {
    if (extent < 0) throw InvalidConfig("disorder extent must be >= 0");
    if (spec.amplitude < 0.0) throw InvalidConfig("disorder amplitude must be >= 0");
    if (spec.independent_draws && spec.kind != DisorderKind::static_coin)
        throw InvalidConfig("independent theta1/theta2 draws require static disorder");

    DisorderSample s;
    s.kind = spec.kind;
    s.extent = extent;
    s.independent = spec.independent_draws;

    SplitMix64 rng(substream_seed(spec.master_seed,
                                  static_cast<std::uint64_t>(ensemble)));
    const std::size_t count = spec.kind == DisorderKind::static_coin
                                  ? static_cast<std::size_t>(2 * extent + 1)
                                  : static_cast<std::size_t>(extent);
    s.d1.resize(count);
    if (s.independent) s.d2.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        s.d1[i] = rng.symmetric(spec.amplitude);
        if (s.independent) s.d2[i] = rng.symmetric(spec.amplitude);
    }
    return s;
}

FloquetSequence disordered_sequence(const FloquetSequence& base,
                                    const DisorderSample& sample) {
    FloquetSequence seq = base;
    if (sample.kind == DisorderKind::static_coin) {
        seq.coin_field = base.coin_field ? sample.as_field(base.coin_field)
                                         : sample.as_field(base.coin);
    } else {
        if (base.coin_series)
            throw InvalidConfig("sequence already carries a per-step series");
        seq.coin_series = sample.as_series();
    }
    return seq;
}

EnsembleStats ensemble_displacement(Variant v, CoinParams coin, LossParams loss,
                                    const DisorderSpec& spec, int t_max,
                                    int threads) {
    if (t_max < 1) throw InvalidConfig("ensemble_displacement needs t_max >= 1");
    const FloquetSequence clean = build_floquet(v, coin, loss);
    const int extent = spec.kind == DisorderKind::static_coin
                           ? t_max * clean.growth_radius()
                           : t_max;

    EnsembleStats stats;
    stats.values.assign(static_cast<std::size_t>(spec.n_ensembles), 0.0);
    parallel_for(
        spec.n_ensembles,
        [&](int e) {
            const DisorderSample sample = sample_disorder(spec, extent, e);
            const FloquetSequence seq = disordered_sequence(clean, sample);
            stats.values[static_cast<std::size_t>(e)] =
                average_displacement(evolve(seq, t_max));
        },
        threads);

    double sum = 0.0;
    for (double v2 : stats.values) sum += v2;
    stats.mean = sum / spec.n_ensembles;
    double var = 0.0;
    for (double v2 : stats.values) var += (v2 - stats.mean) * (v2 - stats.mean);
    stats.stddev = std::sqrt(var / spec.n_ensembles);
    return stats;
}

EdgePersistence disordered_edge_persistence(Variant v, CoinParams left,
                                            CoinParams right, LossParams loss,
                                            const DisorderSpec& spec, int t_max,
                                            int threads) {
    if (t_max < 1) throw InvalidConfig("edge persistence needs t_max >= 1");
    if (spec.kind != DisorderKind::static_coin)
        throw InvalidConfig("edge persistence probes static (per-site) disorder");

    FloquetSequence clean = build_floquet(v, left, loss);
    clean.coin_field = [left, right](int x) { return x < 0 ? left : right; };
    const int extent = t_max * clean.growth_radius();

    EdgePersistence out;
    out.densities.resize(static_cast<std::size_t>(spec.n_ensembles));
    out.final_peaks.assign(static_cast<std::size_t>(spec.n_ensembles), 0);
    parallel_for(
        spec.n_ensembles,
        [&](int e) {
            const DisorderSample sample = sample_disorder(spec, extent, e);
            const FloquetSequence seq = disordered_sequence(clean, sample);
            const Trajectory traj = evolve(seq, t_max);
            CorrectedDensity dens = corrected_probability(traj, loss);
            out.final_peaks[static_cast<std::size_t>(e)] = dens.peak_of(t_max);
            out.densities[static_cast<std::size_t>(e)] = std::move(dens);
        },
        threads);
    return out;
}

} // namespace qwalk
