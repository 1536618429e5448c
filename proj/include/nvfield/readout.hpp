#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nvfield/error.hpp"
#include "nvfield/signal.hpp"

namespace nvfield {

/// Random engine for every Monte-Carlo routine. Streams are derived from
/// (seed, stream index) so that batches can run independently and still
/// reproduce a serial run.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

struct ReadoutSample {
    std::vector<std::uint64_t> counts;
    double mean_counts = 0.0;
    double stddev_counts = 0.0;
    double mean_signal = 0.0;    ///< estimate of ΔI: counts/n̄ − 1
    double stddev_signal = 0.0;  ///< per-shot σ_sn of the normalised signal
};

namespace detail {

inline void mean_stddev(std::span<const double> xs, double& mean, double& sd) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

}  // namespace detail

/// Draws n_repeats single-shot photon counts for a signal ΔI (already
/// including contrast and envelope).
inline ReadoutSample simulate_readout(double ideal_signal, const SignalModel& m, std::size_t n_repeats,
                                      std::uint64_t seed) {
    m.validate();
    if (n_repeats == 0) throw ArgumentError("simulate_readout: n_repeats must be > 0");
    if (!(std::abs(ideal_signal) <= 1.0)) throw ArgumentError("simulate_readout: |signal| must be <= 1");

    auto rng = make_engine(seed);
    std::poisson_distribution<std::uint64_t> poisson(m.photons_per_readout * (1.0 + ideal_signal));

    ReadoutSample out;
    out.counts.resize(n_repeats);
    std::vector<double> c(n_repeats), s(n_repeats);
    for (std::size_t i = 0; i < n_repeats; ++i) {
        out.counts[i] = poisson(rng);
        c[i] = static_cast<double>(out.counts[i]);
        s[i] = c[i] / m.photons_per_readout - 1.0;
    }
    detail::mean_stddev(c, out.mean_counts, out.stddev_counts);
    detail::mean_stddev(s, out.mean_signal, out.stddev_signal);
    return out;
}

/// Sensitivity at one operating point.
///
/// The fringe is sampled at its steepest point (cos Φ = 0). sigma_sn is the
/// standard deviation of one averaged data point (n_shots readouts), which
/// is what enters δE_min; sigma_sn_shot is the single-readout value.
struct SensitivityReport {
    double sigma_sn = 0.0;
    double sigma_sn_shot = 0.0;
    double delta_s = 0.0;
    double delta_e_min = 0.0;  ///< V/cm
    double e_sen = 0.0;        ///< V/cm/√Hz
    double optimal_tau = 0.0;  ///< s
    double tau = 0.0;          ///< s, value used
    double total_time = 0.0;   ///< s
    std::uint64_t n_shots = 0;
};

struct SensitivityOptions {
    double tau = 0.0;                ///< 0 selects optimal_tau
    double overhead = 3e-6;          ///< initialisation + readout per shot, s
    std::size_t n_points = 1000;     ///< averaged measurements used to estimate σ_sn
};

inline double shot_duration(SequenceKind kind, double tau, double overhead) {
    return evolution_time(kind, tau) + overhead;
}

/// Monte-Carlo estimate of σ_sn and δE_min for a total measurement time.
///
/// Each averaged point sums n_shots = round(T/t_shot) Poisson readouts; the
/// sum is drawn directly as Poisson(n_shots·n̄), which has the same law.
inline SensitivityReport sensitivity_at(const SignalModel& m, double d_perp, SequenceKind kind, double total_time,
                                        std::uint64_t seed, const SensitivityOptions& opts = {},
                                        std::uint64_t stream = 0) {
    m.validate();
    if (!(total_time > 0.0)) throw ArgumentError("sensitivity_at: total_time must be > 0");
    if (opts.n_points < 2) throw ArgumentError("sensitivity_at: need at least 2 averaged points");

    SensitivityReport r;
    r.optimal_tau = optimal_tau(m, d_perp, kind);
    r.tau = opts.tau > 0.0 ? opts.tau : r.optimal_tau;
    r.total_time = total_time;
    const double t_shot = shot_duration(kind, r.tau, opts.overhead);
    r.n_shots = static_cast<std::uint64_t>(std::max(1.0, std::round(total_time / t_shot)));

    const double mean = m.photons_per_readout * static_cast<double>(r.n_shots);
    auto rng = make_engine(seed, stream);
    std::poisson_distribution<std::uint64_t> poisson(mean);
    std::vector<double> xs(opts.n_points);
    for (auto& x : xs) x = static_cast<double>(poisson(rng)) / mean - 1.0;
    double mu = 0.0;
    detail::mean_stddev(xs, mu, r.sigma_sn);

    r.sigma_sn_shot = r.sigma_sn * std::sqrt(static_cast<double>(r.n_shots));
    r.delta_s = signal_slope(m, d_perp, kind, r.tau);
    r.delta_e_min = min_detectable_field(r.sigma_sn, r.delta_s);
    r.e_sen = r.delta_e_min * std::sqrt(total_time);
    return r;
}

/// Shot-noise-limited δE_min, ∝ T^{-1/2}:
/// √(t_shot / (n̄·T)) / δS.
inline double shot_noise_limit(const SignalModel& m, double d_perp, SequenceKind kind, double tau, double total_time,
                               double overhead) {
    const double shots = total_time / shot_duration(kind, tau, overhead);
    return 1.0 / std::sqrt(m.photons_per_readout * shots) / signal_slope(m, d_perp, kind, tau);
}

/// Photons per readout that give a shot-noise-limited E_sen equal to
/// `target_e_sen` (V/cm/√Hz) at the given τ.
inline double photons_for_sensitivity(const SignalModel& m, double d_perp, SequenceKind kind, double tau,
                                      double overhead, double target_e_sen) {
    const double ds = signal_slope(m, d_perp, kind, tau);
    return shot_duration(kind, tau, overhead) / std::pow(target_e_sen * ds, 2);
}

struct SensitivityPoint {
    double total_time = 0.0;
    double delta_e_min_mc = 0.0;
    double delta_e_min_shot_noise = 0.0;
};

inline std::vector<SensitivityPoint> sensitivity_curve(const SignalModel& m, double d_perp, SequenceKind kind,
                                                       std::span<const double> total_times, std::uint64_t seed,
                                                       const SensitivityOptions& opts = {}) {
    if (total_times.size() < 2) throw ArgumentError("sensitivity_curve: need at least two total times");
    double lo = total_times[0], hi = total_times[0];
    for (double t : total_times) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!(lo > 0.0) || hi / lo < 100.0 * (1.0 - 1e-12))
        throw ArgumentError("sensitivity_curve: grid must be positive and span at least two decades");

    std::vector<SensitivityPoint> out;
    out.reserve(total_times.size());
    for (std::size_t i = 0; i < total_times.size(); ++i) {
        const auto r = sensitivity_at(m, d_perp, kind, total_times[i], seed, opts, i);
        out.push_back({total_times[i], r.delta_e_min,
                       shot_noise_limit(m, d_perp, kind, r.tau, total_times[i], opts.overhead)});
    }
    return out;
}

}  // namespace nvfield
