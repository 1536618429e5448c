#pragma once

#include <cmath>

#include "nvfield/error.hpp"
#include "nvfield/optimize.hpp"
#include "nvfield/pulse_sequence.hpp"
#include "nvfield/units.hpp"

namespace nvfield {

/// Optical readout model.
///
/// `contrast` is the raw ODMR contrast A. When central_line_only is set the
/// measurement uses only the m_I = 0 hyperfine line and the usable contrast
/// is A/3. The normalised signal ΔI spans [−A_eff, +A_eff] and one readout
/// collects Poisson(photons_per_readout·(1 + ΔI)) photons.
struct SignalModel {
    double contrast = 0.3;
    double photons_per_readout = 0.03;
    double envelope_exponent = 1.0;
    double coherence_time = 304e-6;  ///< T₂ for Hahn echo, T₂* for FID, s
    bool central_line_only = true;

    double effective_contrast() const noexcept { return central_line_only ? contrast / 3.0 : contrast; }

    void validate() const {
        if (!(contrast > 0.0 && contrast <= 1.0)) throw ArgumentError("SignalModel: contrast must be in (0, 1]");
        if (!(photons_per_readout > 0.0)) throw ArgumentError("SignalModel: photons_per_readout must be > 0");
        if (!(envelope_exponent > 0.0)) throw ArgumentError("SignalModel: envelope_exponent must be > 0");
        if (!(coherence_time > 0.0)) throw ArgumentError("SignalModel: coherence_time must be > 0");
    }

    double envelope(double t_evol) const { return std::exp(-std::pow(t_evol / coherence_time, envelope_exponent)); }
};

/// ΔI = A_eff·exp(−(t_evol/T)^p)·cos Φ.
inline double signal_intensity(double phase, const SignalModel& m, double total_evolution) {
    return m.effective_contrast() * m.envelope(total_evolution) * std::cos(phase);
}

/// Phase gained per unit E⊥ relative to d⊥·τ: 1 for FID, 2 for a matched
/// Hahn echo.
inline constexpr double phase_multiplier(SequenceKind kind) { return kind == SequenceKind::FID ? 1.0 : 2.0; }

inline double evolution_time(SequenceKind kind, double tau) { return kind == SequenceKind::FID ? tau : 2.0 * tau; }

/// Steepest fringe slope |dΔI/dE⊥| per V/cm:
/// A_eff·2π·d⊥·k·τ·exp(−(k_e·τ/T)^p).
inline double signal_slope(const SignalModel& m, double d_perp, SequenceKind kind, double tau) {
    return m.effective_contrast() * kTwoPi * d_perp * phase_multiplier(kind) * tau *
           m.envelope(evolution_time(kind, tau));
}

/// τ maximising signal_slope, golden-section search on [T/100, 5T].
inline double optimal_tau(const SignalModel& m, double d_perp, SequenceKind kind) {
    const double t = m.coherence_time;
    return opt::golden_section_maximize([&](double tau) { return signal_slope(m, d_perp, kind, tau); }, t / 100.0,
                                        5.0 * t, 1e-13);
}

/// δE_min = σ_sn / δS in V/cm.
inline double min_detectable_field(double sigma_sn, double delta_s) {
    if (delta_s == 0.0) throw ArgumentError("min_detectable_field: zero slope (operating point at a fringe extremum)");
    if (!(delta_s > 0.0)) throw ArgumentError("min_detectable_field: slope must be positive");
    return sigma_sn / delta_s;
}

/// Field of a point charge (multiples of e) at `distance` metres, V/cm.
inline double point_charge_field(double charge, double distance) {
    if (!(distance > 0.0)) throw ArgumentError("point_charge_field: distance must be > 0");
    const double e_v_per_m = charge * kElementaryCharge / (4.0 * std::numbers::pi * kVacuumPermittivity * distance * distance);
    return e_v_per_m * 1e-2;
}

}  // namespace nvfield
