#pragma once

#include <cmath>

#include "nvfield/error.hpp"
#include "nvfield/params.hpp"
#include "nvfield/units.hpp"

// Field vectors are kept in the NV frame: z along the N-V axis, the
// non-axial part stored as magnitude plus azimuth.

namespace nvfield {

namespace detail {

inline void check_polar(double axial, double magnitude, double phi, const char* what) {
    if (!std::isfinite(axial) || !std::isfinite(magnitude) || !std::isfinite(phi))
        throw ArgumentError(std::string(what) + ": components must be finite");
    if (magnitude < 0.0) throw ArgumentError(std::string(what) + ": non-axial magnitude must be >= 0");
}

}  // namespace detail

/// Magnetic field in Gauss.
class MagneticField {
public:
    MagneticField() = default;
    MagneticField(double b_z, double b_perp, double phi_b) : b_z_(b_z), b_perp_(b_perp), phi_b_(wrap_two_pi(phi_b)) {
        detail::check_polar(b_z, b_perp, phi_b, "MagneticField");
    }

    static MagneticField cartesian(double b_x, double b_y, double b_z) {
        return {b_z, std::hypot(b_x, b_y), std::atan2(b_y, b_x)};
    }

    double b_z() const noexcept { return b_z_; }
    double b_perp() const noexcept { return b_perp_; }
    double phi_b() const noexcept { return phi_b_; }
    double b_x() const noexcept { return b_perp_ * std::cos(phi_b_); }
    double b_y() const noexcept { return b_perp_ * std::sin(phi_b_); }
    double magnitude() const noexcept { return std::hypot(b_z_, b_perp_); }

private:
    double b_z_ = 0.0;
    double b_perp_ = 0.0;
    double phi_b_ = 0.0;
};

/// Applied electric field in V/cm.
class ElectricField {
public:
    ElectricField() = default;
    ElectricField(double e_z, double e_perp, double phi_e) : e_z_(e_z), e_perp_(e_perp), phi_e_(wrap_two_pi(phi_e)) {
        detail::check_polar(e_z, e_perp, phi_e, "ElectricField");
    }

    double e_z() const noexcept { return e_z_; }
    double e_perp() const noexcept { return e_perp_; }
    double phi_e() const noexcept { return phi_e_; }
    double e_x() const noexcept { return e_perp_ * std::cos(phi_e_); }
    double e_y() const noexcept { return e_perp_ * std::sin(phi_e_); }

private:
    double e_z_ = 0.0;
    double e_perp_ = 0.0;
    double phi_e_ = 0.0;
};

/// Crystal strain as an equivalent static electric field, V/cm.
class StrainField {
public:
    StrainField() = default;
    StrainField(double sigma_z, double sigma_perp, double phi_sigma)
        : sigma_z_(sigma_z), sigma_perp_(sigma_perp), phi_sigma_(wrap_two_pi(phi_sigma)) {
        detail::check_polar(sigma_z, sigma_perp, phi_sigma, "StrainField");
    }

    /// Builds strain from its frequency view: d_perp·σ⊥ and d_par·σ_z in Hz.
    static StrainField from_frequency(double sigma_z_hz, double sigma_perp_hz, double phi_sigma, const NVParams& p) {
        return {sigma_z_hz / p.d_par, sigma_perp_hz / p.d_perp, phi_sigma};
    }

    double sigma_z() const noexcept { return sigma_z_; }
    double sigma_perp() const noexcept { return sigma_perp_; }
    double phi_sigma() const noexcept { return phi_sigma_; }
    double sigma_x() const noexcept { return sigma_perp_ * std::cos(phi_sigma_); }
    double sigma_y() const noexcept { return sigma_perp_ * std::sin(phi_sigma_); }

    double perp_frequency(const NVParams& p) const noexcept { return p.d_perp * sigma_perp_; }
    double axial_frequency(const NVParams& p) const noexcept { return p.d_par * sigma_z_; }

private:
    double sigma_z_ = 0.0;
    double sigma_perp_ = 0.0;
    double phi_sigma_ = 0.0;
};

/// Total effective electric field Π = E + σ, Cartesian, V/cm.
struct EffectiveField {
    double pi_x = 0.0;
    double pi_y = 0.0;
    double pi_z = 0.0;

    double perp() const noexcept { return std::hypot(pi_x, pi_y); }
    double phi() const noexcept { return wrap_two_pi(std::atan2(pi_y, pi_x)); }
};

inline EffectiveField effective_field(const ElectricField& e, const StrainField& s) {
    return {e.e_x() + s.sigma_x(), e.e_y() + s.sigma_y(), e.e_z() + s.sigma_z()};
}

inline EffectiveField effective_field(const StrainField& s) { return effective_field(ElectricField{}, s); }

}  // namespace nvfield
