#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "nvfield/error.hpp"
#include "nvfield/units.hpp"

namespace nvfield {

enum class SequenceKind { FID, HahnEcho };

/// Piecewise-constant E⊥(t) in V/cm: values[i] holds on
/// [breakpoints[i], breakpoints[i+1]).
struct Waveform {
    std::vector<double> breakpoints;  // s, strictly increasing, starts at 0
    std::vector<double> values;       // V/cm

    double span() const { return breakpoints.empty() ? 0.0 : breakpoints.back(); }

    double at(double t) const {
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
        auto i = static_cast<std::ptrdiff_t>(it - breakpoints.begin()) - 1;
        i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(values.size()) - 1);
        return values[static_cast<std::size_t>(i)];
    }
};

/// FID or Hahn-echo schedule with the electric-field waveform applied during
/// free evolution. The waveform covers one full sequence ([0, τ] or
/// [0, 2τ]); a phase_offset delays it relative to the first π/2 pulse, with
/// the waveform repeated periodically.
class PulseSequence {
public:
    PulseSequence(SequenceKind kind, double tau, Waveform waveform, double phase_offset = 0.0)
        : kind_(kind), tau_(tau), waveform_(std::move(waveform)), phase_offset_(phase_offset) {
        if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw ArgumentError("PulseSequence: tau must be > 0");
        const auto& bp = waveform_.breakpoints;
        if (bp.size() < 2 || waveform_.values.size() + 1 != bp.size())
            throw ArgumentError("PulseSequence: waveform needs n+1 breakpoints for n values");
        if (bp.front() != 0.0) throw ArgumentError("PulseSequence: waveform must start at t = 0");
        for (std::size_t i = 1; i < bp.size(); ++i)
            if (!(bp[i] > bp[i - 1])) throw ArgumentError("PulseSequence: breakpoints must increase");
        if (std::abs(bp.back() - duration()) > 1e-12 * duration())
            throw ArgumentError("PulseSequence: waveform must span [0, tau] (FID) or [0, 2 tau] (Hahn)");
        if (!std::isfinite(phase_offset_)) throw ArgumentError("PulseSequence: phase_offset must be finite");
    }

    /// Square wave that flips sign at the π pulse (Hahn) or a constant field
    /// (FID), in phase with the sequence.
    static PulseSequence matched_square_wave(SequenceKind kind, double tau, double e_perp, double phase_offset = 0.0) {
        if (kind == SequenceKind::FID) return {kind, tau, Waveform{{0.0, tau}, {e_perp}}, phase_offset};
        return {kind, tau, Waveform{{0.0, tau, 2.0 * tau}, {e_perp, -e_perp}}, phase_offset};
    }

    SequenceKind kind() const noexcept { return kind_; }
    double tau() const noexcept { return tau_; }
    const Waveform& waveform() const noexcept { return waveform_; }
    double phase_offset() const noexcept { return phase_offset_; }

    /// True when the waveform is synchronised with the pulses. Only this
    /// case corresponds to a characterised measurement; any other offset is
    /// treated as experimental.
    bool phase_matched() const {
        const double r = std::remainder(phase_offset_, waveform_.span());
        return std::abs(r) <= 1e-12 * waveform_.span();
    }

    /// Total free-evolution time: τ for FID, 2τ for Hahn echo.
    double duration() const noexcept { return kind_ == SequenceKind::FID ? tau_ : 2.0 * tau_; }

    /// Field seen by the spin at time t after the first π/2 pulse.
    double field_at(double t) const {
        const double period = waveform_.span();
        double u = std::fmod(t - phase_offset_, period);
        if (u < 0.0) u += period;
        return waveform_.at(u);
    }

private:
    SequenceKind kind_;
    double tau_;
    Waveform waveform_;
    double phase_offset_;
};

/// Maps E⊥ (V/cm) to a transition shift Δω (Hz).
using FieldResponse = std::function<double(double)>;

inline FieldResponse linear_response(double d_perp) {
    return [d_perp](double e_perp) { return d_perp * e_perp; };
}

namespace detail {

// Exact ∫_a^b 2π·Δω(E(t)) dt for the piecewise-constant, offset waveform.
inline double piecewise_phase(const PulseSequence& seq, const FieldResponse& response, double a, double b) {
    const auto& bp = seq.waveform().breakpoints;
    const double period = seq.waveform().span();
    std::vector<double> cuts{a, b};
    const double k_lo = std::floor((a - seq.phase_offset()) / period) - 1.0;
    const double k_hi = std::ceil((b - seq.phase_offset()) / period) + 1.0;
    for (double k = k_lo; k <= k_hi; k += 1.0)
        for (double t : bp) {
            const double c = t + seq.phase_offset() + k * period;
            if (c > a && c < b) cuts.push_back(c);
        }
    std::sort(cuts.begin(), cuts.end());
    double phase = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (len <= 0.0) continue;
        phase += response(seq.field_at(0.5 * (cuts[i] + cuts[i + 1]))) * len;
    }
    return kTwoPi * phase;
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, int steps) {
    if (steps < 1) throw ArgumentError("trapezoid: steps must be >= 1");
    const double h = (b - a) / steps;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < steps; ++i) s += f(a + h * i);
    return s * h;
}

}  // namespace detail

/// Φ = ∫₀^τ 2πΔω dt, summed exactly over the waveform's segments.
inline double phase_fid(const PulseSequence& seq, const FieldResponse& response) {
    if (seq.kind() != SequenceKind::FID) throw ArgumentError("phase_fid: sequence is not an FID");
    return detail::piecewise_phase(seq, response, 0.0, seq.tau());
}

/// Φ = ∫₀^τ 2πΔω dt − ∫_τ^{2τ} 2πΔω dt, summed exactly.
inline double phase_hahn(const PulseSequence& seq, const FieldResponse& response) {
    if (seq.kind() != SequenceKind::HahnEcho) throw ArgumentError("phase_hahn: sequence is not a Hahn echo");
    return detail::piecewise_phase(seq, response, 0.0, seq.tau()) -
           detail::piecewise_phase(seq, response, seq.tau(), 2.0 * seq.tau());
}

inline double accumulated_phase(const PulseSequence& seq, const FieldResponse& response) {
    return seq.kind() == SequenceKind::FID ? phase_fid(seq, response) : phase_hahn(seq, response);
}

/// FID phase for an arbitrary Δω(t) in Hz, trapezoidal rule.
inline double phase_fid(double tau, const std::function<double(double)>& delta_omega_of_t, int steps = 10000) {
    if (!(tau > 0.0)) throw ArgumentError("phase_fid: tau must be > 0");
    return kTwoPi * detail::trapezoid(delta_omega_of_t, 0.0, tau, steps);
}

/// Hahn-echo phase for an arbitrary Δω(t) in Hz, trapezoidal rule on each
/// half.
inline double phase_hahn(double tau, const std::function<double(double)>& delta_omega_of_t, int steps = 10000) {
    if (!(tau > 0.0)) throw ArgumentError("phase_hahn: tau must be > 0");
    return kTwoPi * (detail::trapezoid(delta_omega_of_t, 0.0, tau, steps) -
                     detail::trapezoid(delta_omega_of_t, tau, 2.0 * tau, steps));
}

}  // namespace nvfield
