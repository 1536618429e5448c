#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "nvfield/error.hpp"
#include "nvfield/params.hpp"

// Canonical internal units: Hz (h divided out), Gauss, V/cm, seconds, radians.
// Strain is stored as an equivalent electric field in V/cm; its frequency
// view is d_perp·σ⊥ (non-axial) or d_par·σ_z (axial).

namespace nvfield {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kElementaryCharge = 1.602176634e-19;   // C
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

enum class Unit {
    Gauss,
    Tesla,
    Millitesla,
    VoltPerCm,
    VoltPerMeter,
    StrainPerpHz,   ///< non-axial strain expressed as d_perp·σ⊥
    StrainAxialHz,  ///< axial strain expressed as d_par·σ_z
};

inline std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::Gauss: return "G";
        case Unit::Tesla: return "T";
        case Unit::Millitesla: return "mT";
        case Unit::VoltPerCm: return "V/cm";
        case Unit::VoltPerMeter: return "V/m";
        case Unit::StrainPerpHz: return "Hz (strain, perp)";
        case Unit::StrainAxialHz: return "Hz (strain, axial)";
    }
    return "?";
}

namespace detail {

enum class Dimension { MagneticField, ElectricField };

inline Dimension dimension_of(Unit u) {
    switch (u) {
        case Unit::Gauss:
        case Unit::Tesla:
        case Unit::Millitesla: return Dimension::MagneticField;
        default: return Dimension::ElectricField;
    }
}

// Factor taking one unit of `u` to the dimension's base unit (G or V/cm).
inline double to_base(Unit u, const NVParams& p) {
    switch (u) {
        case Unit::Gauss: return 1.0;
        case Unit::Tesla: return 1e4;
        case Unit::Millitesla: return 10.0;
        case Unit::VoltPerCm: return 1.0;
        case Unit::VoltPerMeter: return 1e-2;
        case Unit::StrainPerpHz: return 1.0 / p.d_perp;
        case Unit::StrainAxialHz: return 1.0 / p.d_par;
    }
    return 0.0;
}

inline bool is_strain_frequency(Unit u) { return u == Unit::StrainPerpHz || u == Unit::StrainAxialHz; }

}  // namespace detail

/// Converts `value` between two units of the same dimension.
///
/// Supported: G/T/mT among themselves, V/cm <-> V/m, and strain field in V/cm
/// <-> strain frequency (through d_perp or d_par of `p`). Strain frequencies
/// only pair with V/cm; anything else throws ArgumentError.
inline double convert_units(double value, Unit from, Unit to, const NVParams& p = {}) {
    if (from == to) return value;
    if (detail::dimension_of(from) != detail::dimension_of(to))
        throw ArgumentError("convert_units: cannot convert " + std::string(unit_name(from)) + " to " +
                            std::string(unit_name(to)));
    const bool strain_pair = detail::is_strain_frequency(from) || detail::is_strain_frequency(to);
    if (strain_pair && !(from == Unit::VoltPerCm || to == Unit::VoltPerCm))
        throw ArgumentError("convert_units: strain frequencies convert only to/from V/cm");
    return value * detail::to_base(from, p) / detail::to_base(to, p);
}

/// Wraps an angle into [0, 2π).
inline double wrap_two_pi(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace nvfield
