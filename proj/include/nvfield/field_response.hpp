#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nvfield/error.hpp"
#include "nvfield/fields.hpp"
#include "nvfield/hamiltonian.hpp"
#include "nvfield/params.hpp"
#include "nvfield/units.hpp"

namespace nvfield {

/// Ratios that control the validity of second-order perturbation theory.
struct RegimeDiagnostics {
    static constexpr double kWarnRatio = 0.05;

    double zeeman_ratio = 0.0;  ///< γ|B| / D
    double stark_ratio = 0.0;   ///< d⊥Π⊥ / D

    bool outside_regime() const noexcept { return zeeman_ratio > kWarnRatio || stark_ratio > kWarnRatio; }

    std::string message() const {
        return "perturbative regime exceeded: gamma*|B|/D = " + std::to_string(zeeman_ratio) +
               ", d_perp*Pi_perp/D = " + std::to_string(stark_ratio) + " (warn above " +
               std::to_string(kWarnRatio) + ")";
    }
};

inline RegimeDiagnostics regime_ratios(const NVParams& p, const MagneticField& b, const EffectiveField& pi) {
    return {p.gamma() * b.magnitude() / p.d_gs, p.d_perp * pi.perp() / p.d_gs};
}

/// Second-order splitting function F(B, Π) in Hz:
///
///   F² = (γB_z)² + (d⊥Π⊥)² − (γB⊥)²d⊥(Π_x cos 2φ_B − Π_y sin 2φ_B)/D
///        + (γB⊥)⁴/(4D²)
///
/// with γ = g_eμ_B/h and tan φ_B = B_y/B_x. Exceeding the regime ratio only
/// flags `diag`; non-finite input or a (rounding-only) negative radicand
/// throws RegimeError.
inline double f_function(const NVParams& p, const MagneticField& b, const EffectiveField& pi,
                         RegimeDiagnostics* diag = nullptr) {
    const double gbz = p.gamma() * b.b_z();
    const double gbp2 = std::pow(p.gamma() * b.b_perp(), 2);
    const double two_phi = 2.0 * b.phi_b();
    const double stark = p.d_perp * pi.perp();
    const double cross = gbp2 * p.d_perp * (pi.pi_x * std::cos(two_phi) - pi.pi_y * std::sin(two_phi)) / p.d_gs;
    const double quartic = gbp2 * gbp2 / (4.0 * p.d_gs * p.d_gs);

    const double radicand = gbz * gbz + stark * stark - cross + quartic;
    if (diag) *diag = regime_ratios(p, b, pi);
    if (!std::isfinite(radicand)) throw RegimeError("f_function: non-finite input");
    const double scale = gbz * gbz + stark * stark + std::abs(cross) + quartic;
    if (radicand < -1e-12 * scale) {
        throw RegimeError("f_function: negative radicand " + std::to_string(radicand) + ": " +
                          regime_ratios(p, b, pi).message());
    }
    return std::sqrt(std::max(radicand, 0.0));
}

enum class ShiftMethod { Perturbative, Exact };

/// Change of the m_s=0 → ±1 transition frequencies caused by switching the
/// applied electric field on at fixed B and strain, Hz.
struct TransitionShift {
    double d_omega_plus = 0.0;
    double d_omega_minus = 0.0;
    ShiftMethod method = ShiftMethod::Perturbative;
};

/// Δω± = d∥E_z ± [F(B, E+σ) − F(B, σ)].
///
/// The axial term uses the applied E_z only; the strain's axial part is
/// common to the on and off states and cancels.
inline TransitionShift delta_omega_perturbative(const NVParams& p, const MagneticField& b, const ElectricField& e,
                                                const StrainField& s, RegimeDiagnostics* diag = nullptr) {
    const double f_on = f_function(p, b, effective_field(e, s), diag);
    const double f_off = f_function(p, b, effective_field(s));
    const double axial = p.d_par * e.e_z();
    return {axial + (f_on - f_off), axial - (f_on - f_off), ShiftMethod::Perturbative};
}

/// Exact counterpart of delta_omega_perturbative: difference of diagonalised
/// transition frequencies with E on and off.
inline TransitionShift delta_omega_exact(const NVParams& p, const MagneticField& b, const ElectricField& e,
                                         const StrainField& s) {
    const auto on = transition_frequencies(p, b, effective_field(e, s));
    const auto off = transition_frequencies(p, b, effective_field(s));
    return {on.plus - off.plus, on.minus - off.minus, ShiftMethod::Exact};
}

inline TransitionShift delta_omega(const NVParams& p, const MagneticField& b, const ElectricField& e,
                                   const StrainField& s, ShiftMethod method, RegimeDiagnostics* diag = nullptr) {
    return method == ShiftMethod::Exact ? delta_omega_exact(p, b, e, s)
                                        : delta_omega_perturbative(p, b, e, s, diag);
}

/// One sample of a field scan: the swept coordinate and the shift there.
struct ScanPoint {
    double x = 0.0;  ///< φ_B in rad for polar scans, B_z in G for axial scans
    TransitionShift shift;
};

/// Δω over n_angles uniformly spaced φ_B in [0, 2π).
inline std::vector<ScanPoint> polar_scan(const NVParams& p, double b_perp, double b_z, const ElectricField& e,
                                         const StrainField& s, std::size_t n_angles,
                                         ShiftMethod method = ShiftMethod::Perturbative,
                                         RegimeDiagnostics* worst = nullptr) {
    if (n_angles < 8) throw ArgumentError("polar_scan: need at least 8 angles");
    std::vector<ScanPoint> out;
    out.reserve(n_angles);
    RegimeDiagnostics acc;
    for (std::size_t i = 0; i < n_angles; ++i) {
        const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(n_angles);
        RegimeDiagnostics d = regime_ratios(p, MagneticField(b_z, b_perp, phi), effective_field(e, s));
        acc.zeeman_ratio = std::max(acc.zeeman_ratio, d.zeeman_ratio);
        acc.stark_ratio = std::max(acc.stark_ratio, d.stark_ratio);
        out.push_back({phi, delta_omega(p, MagneticField(b_z, b_perp, phi), e, s, method)});
    }
    if (worst) *worst = acc;
    return out;
}

/// Exact Δω as a function of axial field at fixed B⊥ and azimuth.
inline std::vector<ScanPoint> axial_decay_scan(const NVParams& p, double b_perp, double phi_b, const ElectricField& e,
                                               const StrainField& s, std::span<const double> b_z_grid) {
    std::vector<ScanPoint> out;
    out.reserve(b_z_grid.size());
    for (double bz : b_z_grid) out.push_back({bz, delta_omega_exact(p, MagneticField(bz, b_perp, phi_b), e, s)});
    return out;
}

}  // namespace nvfield
