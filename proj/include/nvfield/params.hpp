#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "nvfield/error.hpp"

namespace nvfield {

/// Physical constants of a single NV centre.
///
/// Everything is expressed with the Planck constant divided out: energies are
/// ordinary frequencies in Hz, Stark coefficients in Hz·cm/V, and the Zeeman
/// factor in Hz/G.
struct NVParams {
    double d_gs = 2.87e9;           ///< zero-field splitting, Hz
    double d_par = 0.35;            ///< axial Stark coefficient, Hz·cm/V
    double d_perp = 17.0;           ///< non-axial Stark coefficient, Hz·cm/V
    double g_e = 2.0028;            ///< electron g-factor
    double mu_b_over_h = 1.39962e6; ///< Bohr magneton over h, Hz/G
    double a_hf = 2.2e6;            ///< axial 14N hyperfine splitting, Hz

    /// Electron gyromagnetic ratio g_e·μ_B/h in Hz/G.
    double gamma() const noexcept { return g_e * mu_b_over_h; }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(std::isfinite(v) && v > 0.0))
                throw ArgumentError(std::string("NVParams.") + name + " must be finite and > 0");
        };
        positive(d_gs, "d_gs");
        positive(d_par, "d_par");
        positive(d_perp, "d_perp");
        positive(g_e, "g_e");
        positive(mu_b_over_h, "mu_b_over_h");
        positive(a_hf, "a_hf");
        if (!(d_par < d_perp)) throw ArgumentError("NVParams: d_par must be smaller than d_perp");
    }
};

/// Phenomenological coherence times.
///
/// t2_star_perp is the dephasing time at zero axial field (strain-mixed
/// eigenstates), t2_star_par the asymptotic value once the axial Zeeman
/// splitting dominates. t2 is the Hahn-echo coherence time.
struct DecoherenceParams {
    double t2_star_perp = 10e-6;  // s
    double t2_star_par = 3e-6;    // s
    double t2 = 304e-6;           // s
    double b_z_max = 20.0;        // G
    double envelope_exponent = 1.0;

    void validate() const {
        for (auto [v, name] : {std::pair{t2_star_perp, "t2_star_perp"}, std::pair{t2_star_par, "t2_star_par"},
                               std::pair{t2, "t2"}, std::pair{b_z_max, "b_z_max"},
                               std::pair{envelope_exponent, "envelope_exponent"}}) {
            if (!(std::isfinite(v) && v > 0.0))
                throw ArgumentError(std::string("DecoherenceParams.") + name + " must be finite and > 0");
        }
        if (!(t2_star_par < t2_star_perp))
            throw ArgumentError("DecoherenceParams: t2_star_par must be smaller than t2_star_perp");
    }
};

}  // namespace nvfield
