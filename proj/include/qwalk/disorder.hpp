#pragma once

#include <cstdint>
#include <vector>

#include "qwalk/core.hpp"
#include "qwalk/dynamics.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Reproducible random numbers
// ---------------------------------------------------------------------------

// SplitMix64: tiny, stateless-seedable, passes BigCrush; good enough for
// sampling coin-angle offsets and trivially reproducible across platforms.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() { return (next() >> 11) * 0x1.0p-53; } // [0, 1)
    double symmetric(double amp) { return amp * (2.0 * uniform() - 1.0); }
};

// Independent per-ensemble stream: hash the (master, index) pair so ensembles
// can be sampled in any order or in parallel.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

// ---------------------------------------------------------------------------
// Disorder parameters
// ---------------------------------------------------------------------------

enum class DisorderKind {
    static_coin, // per-site offset, constant in time
    dynamic_coin // per-step offset, homogeneous in space
};

struct DisorderSpec {
    DisorderKind kind = DisorderKind::static_coin;
    double amplitude = kPi / 20.0; // offsets drawn uniformly from [-amp, amp)
    int n_ensembles = 10;
    std::uint64_t master_seed = 0;
    // Static only: draw separate offsets for theta1 and theta2 instead of one
    // shared offset per site.
    bool independent_draws = false;
};

// One materialized draw. Static: offsets for sites |x| <= extent (zero
// outside). Dynamic: offsets for steps 1..extent.
struct DisorderSample {
    DisorderKind kind = DisorderKind::static_coin;
    int extent = 0;
    bool independent = false;
    std::vector<double> d1;
    std::vector<double> d2; // independent static draws only

    double offset1_at(int x) const;
    double offset2_at(int x) const;

    // Static: wraps a clean coin field, adding this sample's offsets.
    std::function<CoinParams(int)> as_field(std::function<CoinParams(int)> clean) const;
    std::function<CoinParams(int)> as_field(CoinParams base) const;
    // Dynamic: per-step shared offset (the same value is added to both
    // angles, which is what a homogeneous drive-timing error does).
    std::function<double(int)> as_series() const;
};

DisorderSample sample_disorder(const DisorderSpec& spec, int extent, int ensemble);

// Clone of `base` with the sampled disorder attached.
FloquetSequence disordered_sequence(const FloquetSequence& base,
                                    const DisorderSample& sample);

// ---------------------------------------------------------------------------
// Ensemble observables
// ---------------------------------------------------------------------------

struct EnsembleStats {
    double mean = 0.0;
    double stddev = 0.0; // population
    std::vector<double> values;
};

// <Delta x>(t_max) across the ensemble, one independent draw per member.
// Static extent covers every reachable site (t_max * growth radius).
EnsembleStats ensemble_displacement(Variant v, CoinParams coin, LossParams loss,
                                    const DisorderSpec& spec, int t_max,
                                    int threads = 0);

// Two-phase line (left coin for x < 0, right for x >= 0) evolved from
// |x=0>|+> under per-site disorder; returns the loss-compensated density of
// every ensemble member plus the peak position of its final row.
struct EdgePersistence {
    std::vector<CorrectedDensity> densities;
    std::vector<int> final_peaks;
};

EdgePersistence disordered_edge_persistence(Variant v, CoinParams left,
                                            CoinParams right, LossParams loss,
                                            const DisorderSpec& spec, int t_max,
                                            int threads = 0);

} // namespace qwalk
