#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "nvfield/error.hpp"
#include "nvfield/params.hpp"
#include "nvfield/spin_matrix.hpp"

namespace nvfield {

using SpinVector = std::array<cplx, 3>;  // {|+1>, |0>, |-1>} amplitudes

/// Eigenstates of the strained zero-field Hamiltonian.
///
///   |S_0> = |0>
///   |S_+> = (e^{-iφσ/2}|+1> − e^{iφσ/2}|-1>)/√2        energy D/3 + d⊥σ⊥
///   |S_-> = i(e^{-iφσ/2}|+1> + e^{iφσ/2}|-1>)/√2       energy D/3 − d⊥σ⊥
///
/// The global factor i on |S_-> is kept. Each state has <S> = 0.
struct ZeroFieldStates {
    SpinVector s0;
    SpinVector s_plus;
    SpinVector s_minus;
};

inline ZeroFieldStates zero_field_eigenstates(double phi_sigma) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    const cplx em = std::exp(-i * (phi_sigma / 2.0));
    const cplx ep = std::exp(i * (phi_sigma / 2.0));
    return {
        SpinVector{0.0, 1.0, 0.0},
        SpinVector{r * em, 0.0, -r * ep},
        SpinVector{i * r * em, 0.0, i * r * ep},
    };
}

/// Mixing of |+1> and |-1> in the upper eigenstate of the ±1 block
/// [[γB_z, σ_f], [σ_f, −γB_z]]: κ = 2|c₊c₋| = σ_f / √(σ_f² + (γB_z)²).
/// κ = 1 at B_z = 0 and → 0 once the Zeeman term dominates.
inline double mixing_kappa(const NVParams& p, double b_z, double sigma_perp_freq) {
    if (!(sigma_perp_freq > 0.0)) throw ArgumentError("mixing_kappa: sigma_perp_freq must be > 0");
    return sigma_perp_freq / std::hypot(sigma_perp_freq, p.gamma() * b_z);
}

/// T₂*(B_z) = κ̃(B_z)(T₂*⊥ − T₂*∥) + T₂*∥, seconds.
///
/// T₂*∥ is the coherence time at the reference field b_z_max, where κ is
/// small but not zero, so κ is rescaled to
/// κ̃ = (κ(B_z) − κ(b_z_max)) / (1 − κ(b_z_max)). Both end points are then
/// reproduced exactly.
inline double t2star_model(const DecoherenceParams& d, const NVParams& p, double sigma_perp_freq, double b_z) {
    if (!std::isfinite(b_z) || std::abs(b_z) > d.b_z_max)
        throw RegimeError("t2star_model: |b_z| exceeds the configured b_z_max");
    const double k_ref = mixing_kappa(p, d.b_z_max, sigma_perp_freq);
    const double kappa = (mixing_kappa(p, b_z, sigma_perp_freq) - k_ref) / (1.0 - k_ref);
    return kappa * (d.t2_star_perp - d.t2_star_par) + d.t2_star_par;
}

}  // namespace nvfield
