#pragma once

#include <span>
#include <vector>

#include "nvfield/error.hpp"
#include "nvfield/fields.hpp"
#include "nvfield/hyperfine.hpp"

namespace nvfield {

struct SpectrumPoint {
    double frequency = 0.0;     ///< Hz
    double fluorescence = 1.0;  ///< normalised to the off-resonant baseline
};

/// CW-ODMR spectrum: unit baseline minus a Lorentzian dip (FWHM `linewidth`)
/// at each of the six hyperfine-resolved transitions. Each m_I sector holds a
/// third of the population, so every transition has depth contrast/3 and
/// the two m_I = ±1 lines that coincide at B_z = 0 add up.
inline std::vector<SpectrumPoint> cw_odmr_spectrum(const NVParams& p, const MagneticField& b, const ElectricField& e,
                                                   const StrainField& s, double linewidth, double contrast,
                                                   std::span<const double> freq_grid) {
    if (!(linewidth > 0.0)) throw ArgumentError("cw_odmr_spectrum: linewidth must be > 0");
    if (contrast < 0.0 || contrast > 1.0) throw ArgumentError("cw_odmr_spectrum: contrast must be in [0, 1]");
    const auto lines = hyperfine_lines(hyperfine_hamiltonian(p, b, effective_field(e, s)));
    const double hw2 = 0.25 * linewidth * linewidth;

    std::vector<SpectrumPoint> out;
    out.reserve(freq_grid.size());
    for (double f : freq_grid) {
        double dip = 0.0;
        for (const auto& l : lines) dip += hw2 / ((f - l.frequency) * (f - l.frequency) + hw2);
        out.push_back({f, 1.0 - contrast / 3.0 * dip});
    }
    return out;
}

}  // namespace nvfield
