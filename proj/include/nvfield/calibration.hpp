#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nvfield/error.hpp"
#include "nvfield/field_response.hpp"
#include "nvfield/fields.hpp"
#include "nvfield/hyperfine.hpp"
#include "nvfield/optimize.hpp"
#include "nvfield/params.hpp"
#include "nvfield/units.hpp"

namespace nvfield {

// ---------------------------------------------------------------------------
// Axial-field alignment
// ---------------------------------------------------------------------------

/// Coil sweep used to null B_z. `splitting` holds the unsigned separation of
/// the outer hyperfine partners (Hz) at each control value; `true_b_z` is
/// only filled for synthetic scans.
struct AlignmentScan {
    std::vector<double> control;
    std::vector<double> splitting;
    std::vector<double> true_b_z;
};

struct AlignmentResult {
    double control_at_zero = 0.0;
    double uncertainty_mt = 0.0;  ///< residual B_z uncertainty, mT
    double slope = 0.0;           ///< |d splitting / d control| at the crossing, Hz per control unit
    std::vector<double> signed_splitting;
};

/// Synthesises an alignment scan from the exact 9×9 model with
/// B_z = gauss_per_control·(control − zero_control).
inline AlignmentScan synthesize_alignment_scan(const NVParams& p, std::span<const double> controls,
                                               double gauss_per_control, double zero_control, double b_perp,
                                               double phi_b, const StrainField& strain) {
    AlignmentScan scan;
    for (double c : controls) {
        const double bz = gauss_per_control * (c - zero_control);
        const auto lines = hyperfine_lines(hyperfine_hamiltonian(p, MagneticField(bz, b_perp, phi_b), effective_field(strain)));
        scan.control.push_back(c);
        scan.splitting.push_back(std::abs(outer_line_splitting(lines)));
        scan.true_b_z.push_back(bz);
    }
    return scan;
}

/// Locates the control value where the outer hyperfine partners overlap.
///
/// The measured splitting is unsigned, so the sign is restored from the
/// branch order: points below the minimum get one sign, points above the
/// other, and the minimum itself takes the sign that keeps its neighbours
/// collinear. The zero crossing of the signed splitting is then found by
/// linear interpolation. The B_z uncertainty is the linewidth divided by the
/// local slope, converted with gauss_per_control when known and with the
/// bare 2γ slope otherwise.
inline AlignmentResult align_axial_field(const AlignmentScan& scan, const NVParams& p, double linewidth_hz,
                                         double gauss_per_control = std::numeric_limits<double>::quiet_NaN()) {
    const std::size_t n = scan.control.size();
    if (n < 3 || scan.splitting.size() != n) throw ArgumentError("align_axial_field: need >= 3 (control, splitting) pairs");
    if (!(linewidth_hz > 0.0)) throw ArgumentError("align_axial_field: linewidth must be > 0");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scan.control[a] < scan.control[b]; });
    std::vector<double> c(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = scan.control[order[i]];
        s[i] = scan.splitting[order[i]];
        if (!(s[i] >= 0.0)) throw ArgumentError("align_axial_field: splittings must be >= 0");
        if (i > 0 && !(c[i] > c[i - 1])) throw ArgumentError("align_axial_field: duplicate control values");
    }

    const auto m = static_cast<std::size_t>(std::min_element(s.begin(), s.end()) - s.begin());
    if (m == 0 || m == n - 1)
        throw ArgumentError("align_axial_field: splittings do not bracket a minimum (minimum at scan edge)");

    std::vector<double> sg(n);
    for (std::size_t i = 0; i < n; ++i) sg[i] = i < m ? -s[i] : s[i];
    // Prediction for point m from the straight line through its neighbours.
    const double w = (c[m] - c[m - 1]) / (c[m + 1] - c[m - 1]);
    const double predicted = sg[m - 1] + w * (sg[m + 1] - sg[m - 1]);
    if (std::abs(-s[m] - predicted) < std::abs(s[m] - predicted)) sg[m] = -s[m];

    AlignmentResult r;
    r.signed_splitting.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.signed_splitting[order[i]] = sg[i];

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (sg[i] == 0.0 || (sg[i] < 0.0) != (sg[i + 1] < 0.0)) {
            const std::size_t j = sg[i] == 0.0 ? i : i + 1;
            if (sg[i] == 0.0) {
                r.control_at_zero = c[i];
                r.slope = std::abs((sg[std::min(i + 1, n - 1)] - sg[i > 0 ? i - 1 : 0]) /
                                   (c[std::min(i + 1, n - 1)] - c[i > 0 ? i - 1 : 0]));
            } else {
                r.slope = std::abs((sg[j] - sg[i]) / (c[j] - c[i]));
                r.control_at_zero = c[i] - sg[i] * (c[j] - c[i]) / (sg[j] - sg[i]);
            }
            break;
        }
    }

    const double sigma_g = std::isfinite(gauss_per_control) && r.slope > 0.0
                               ? linewidth_hz / r.slope * std::abs(gauss_per_control)
                               : linewidth_hz / (2.0 * p.gamma());
    r.uncertainty_mt = sigma_g * 0.1;
    return r;
}

// ---------------------------------------------------------------------------
// Non-axial strain from the central-line splitting
// ---------------------------------------------------------------------------

/// Central (m_I = 0) line splitting of the exact 9×9 model at B_z = 0.
/// `relative_phase` is φ_σ + 2φ_B, the only angle the spectrum depends on.
inline double central_splitting_model(const NVParams& p, double sigma_perp_freq, double b_perp, double relative_phase) {
    const auto strain = StrainField::from_frequency(0.0, sigma_perp_freq, relative_phase, p);
    const auto lines = hyperfine_lines(hyperfine_hamiltonian(p, MagneticField(0.0, b_perp, 0.0), effective_field(strain)));
    return central_line_splitting(lines);
}

/// Inverts the central-line splitting for the strain frequency d⊥σ⊥ (Hz).
///
/// The default relative phase π/2 puts the strain and second-order B⊥
/// couplings in quadrature, for which the splitting rises monotonically from
/// its σ⊥ = 0 floor 2(γB⊥)²/(2D). For other phases the branch with
/// σ_f ≥ δ·cos(phase) is returned. Splittings below the floor are rejected.
inline double infer_sigma_perp(double central_splitting, double b_perp, const NVParams& p,
                               double relative_phase = std::numbers::pi / 2.0) {
    if (!(central_splitting >= 0.0)) throw ArgumentError("infer_sigma_perp: splitting must be >= 0");
    const double delta = std::pow(p.gamma() * b_perp, 2) / (2.0 * p.d_gs);
    const double lo = std::max(0.0, delta * std::cos(relative_phase));
    auto g = [&](double sf) { return central_splitting_model(p, sf, b_perp, relative_phase) - central_splitting; };

    const double floor_value = g(lo);
    const double tol = 1e-9 * std::max(central_splitting, 1.0);
    if (floor_value > tol)
        throw ArgumentError("infer_sigma_perp: splitting " + std::to_string(central_splitting) +
                            " Hz is below the B_perp-induced floor " + std::to_string(floor_value + central_splitting) +
                            " Hz");
    if (floor_value >= -tol) return lo;

    double hi = std::max(2.0 * lo, std::max(central_splitting, 1e3));
    while (g(hi) < 0.0) hi *= 2.0;
    return opt::bisect(g, lo, hi, 1e-7 * std::max(central_splitting, 1.0));
}

// ---------------------------------------------------------------------------
// Polar-pattern inversion
// ---------------------------------------------------------------------------

/// Representative of an azimuth in [0, π/2).
inline double canonicalize_angle(double phi) {
    constexpr double quarter = std::numbers::pi / 2.0;
    double r = std::fmod(phi, quarter);
    if (r < 0.0) r += quarter;
    if (r >= quarter) r = 0.0;
    return r;
}

struct PolarDatum {
    double phi_b = 0.0;        ///< rad
    double delta_omega = 0.0;  ///< Hz
    double sigma = 0.0;        ///< Hz; 0 means unweighted
};

struct FitParameters {
    double b_perp = 0.0;         ///< G
    double d_par_e_z = 0.0;      ///< Hz
    double d_perp_e_perp = 0.0;  ///< Hz
    double phi_e = 0.0;          ///< rad
    double phi_sigma = 0.0;      ///< rad
};

struct FitResult {
    FitParameters value;        ///< angles canonicalised to [0, π/2)
    FitParameters uncertainty;  ///< 1σ from the curvature of the residual
    double phi_e_full = 0.0;    ///< fitted azimuths in [0, 2π)
    double phi_sigma_full = 0.0;
    double residual_rms = 0.0;  ///< Hz
    bool converged = false;
    int evaluations = 0;
    std::size_t n_points = 0;
};

struct PolarFitOptions {
    double sigma_perp_hz = 0.189e6;  ///< d⊥σ⊥ from the central-line splitting
    double b_z = 0.0;                ///< G, residual axial field
    int max_evaluations = 20000;     ///< per start
};

/// Forward model for the fit: perturbative Δω₊ at azimuth phi_b.
inline double polar_model(const NVParams& p, const FitParameters& t, double sigma_perp_hz, double b_z, double phi_b) {
    const MagneticField b(b_z, std::abs(t.b_perp), phi_b);
    const double e_perp = t.d_perp_e_perp / p.d_perp;
    const double s_perp = sigma_perp_hz / p.d_perp;
    const EffectiveField sigma{s_perp * std::cos(t.phi_sigma), s_perp * std::sin(t.phi_sigma), 0.0};
    const EffectiveField total{sigma.pi_x + e_perp * std::cos(t.phi_e), sigma.pi_y + e_perp * std::sin(t.phi_e), 0.0};
    return t.d_par_e_z + f_function(p, b, total) - f_function(p, b, sigma);
}

namespace detail {

inline constexpr std::array<double, 5> kFitScale{10.0, 1e4, 1e4, 1.0, 1.0};

inline FitParameters unpack(const opt::Point<5>& x) {
    return {x[0] * kFitScale[0], x[1] * kFitScale[1], x[2] * kFitScale[2], x[3], x[4]};
}

inline double weighted_ssr(std::span<const PolarDatum> data, const NVParams& p, const PolarFitOptions& o,
                           const FitParameters& t) {
    double ssr = 0.0;
    for (const auto& d : data) {
        const double w = d.sigma > 0.0 ? 1.0 / (d.sigma * d.sigma) : 1.0;
        const double r = polar_model(p, t, o.sigma_perp_hz, o.b_z, d.phi_b) - d.delta_omega;
        ssr += w * r * r;
    }
    return ssr;
}

inline double circular_coverage(std::span<const PolarDatum> data) {
    std::vector<double> a;
    for (const auto& d : data) a.push_back(wrap_two_pi(d.phi_b));
    std::sort(a.begin(), a.end());
    double gap = a.front() + kTwoPi - a.back();
    for (std::size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
    return kTwoPi - gap;
}

}  // namespace detail

/// Least-squares inversion of a measured Δω₊(φ_B) pattern for
/// θ = {B⊥, d∥E_z, d⊥E⊥, φ_E, φ_σ}, with the strain magnitude fixed.
///
/// Multi-start Nelder–Mead: every combination of φ_E and φ_σ in
/// {0, π/2, π, 3π/2} and B⊥ in {12, 30} G is refined, and the lowest
/// residual wins (earliest start on ties). Uncertainties come from a
/// central-difference Hessian of the weighted residual (relative step
/// 1e-4), scaled by the reduced χ² unless every point carries a σ.
inline FitResult fit_polar_pattern(std::span<const PolarDatum> data, const NVParams& p,
                                   const PolarFitOptions& opts = {}) {
    if (data.size() < 8) throw ArgumentError("fit_polar_pattern: need at least 8 angles");
    if (detail::circular_coverage(data) < std::numbers::pi - 1e-9)
        throw ArgumentError("fit_polar_pattern: angles must span at least pi");

    double lo = data[0].delta_omega, hi = data[0].delta_omega;
    for (const auto& d : data) {
        lo = std::min(lo, d.delta_omega);
        hi = std::max(hi, d.delta_omega);
    }
    if (hi - lo <= 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)}))
        throw ArgumentError("fit_polar_pattern: data are flat; the pattern carries no field information");

    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    auto objective = [&](const opt::Point<5>& x) { return detail::weighted_ssr(data, p, opts, detail::unpack(x)); };

    opt::SimplexOptions so;
    so.x_tol = 1e-10;
    so.f_tol = 1e-13;
    so.max_evaluations = opts.max_evaluations;

    opt::SimplexResult<5> best;
    best.f = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    const double quarter = std::numbers::pi / 2.0;
    for (double bp : {12.0, 30.0})
        for (int ie = 0; ie < 4; ++ie)
            for (int is = 0; is < 4; ++is) {
                const opt::Point<5> start{bp / detail::kFitScale[0], mid / detail::kFitScale[1],
                                          half / detail::kFitScale[2], ie * quarter, is * quarter};
                const opt::Point<5> step{0.5, 0.2, 0.2, 0.3, 0.3};
                auto r = opt::nelder_mead<5>(objective, start, step, so);
                evaluations += r.evaluations;
                if (r.f < best.f) best = r;
            }

    FitParameters t = detail::unpack(best.x);
    if (t.d_perp_e_perp < 0.0) {
        t.d_perp_e_perp = -t.d_perp_e_perp;
        t.phi_e += std::numbers::pi;
    }
    t.b_perp = std::abs(t.b_perp);
    t.phi_e = wrap_two_pi(t.phi_e);
    t.phi_sigma = wrap_two_pi(t.phi_sigma);

    // Curvature of the weighted SSR in physical units.
    std::array<double, 5> theta{t.b_perp, t.d_par_e_z, t.d_perp_e_perp, t.phi_e, t.phi_sigma};
    std::array<double, 5> h{};
    for (int i = 0; i < 5; ++i) h[i] = 1e-4 * std::max(std::abs(theta[i]), 1e-2 * detail::kFitScale[i]);
    auto ssr_at = [&](const std::array<double, 5>& v) {
        return detail::weighted_ssr(data, p, opts, FitParameters{v[0], v[1], v[2], v[3], v[4]});
    };
    const double f0 = ssr_at(theta);
    Eigen::Matrix<double, 5, 5> hess;
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            auto at = [&](double si, double sj) {
                auto v = theta;
                v[i] += si * h[i];
                v[j] += sj * h[j];
                return ssr_at(v);
            };
            double val;
            if (i == j) {
                val = (at(1, 0) - 2.0 * f0 + at(-1, 0)) / (h[i] * h[i]);
            } else {
                val = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
            }
            hess(i, j) = hess(j, i) = val;
        }
    }

    const bool absolute = std::all_of(data.begin(), data.end(), [](const PolarDatum& d) { return d.sigma > 0.0; });
    const double dof = static_cast<double>(data.size()) - 5.0;
    const double scale = absolute ? 1.0 : (dof > 0.0 ? f0 / dof : 0.0);
    const Eigen::Matrix<double, 5, 5> cov = 2.0 * scale * hess.completeOrthogonalDecomposition().pseudoInverse();

    FitResult res;
    res.value = t;
    res.phi_e_full = t.phi_e;
    res.phi_sigma_full = t.phi_sigma;
    res.value.phi_e = canonicalize_angle(t.phi_e);
    res.value.phi_sigma = canonicalize_angle(t.phi_sigma);
    auto sd = [&](int i) { return std::sqrt(std::max(cov(i, i), 0.0)); };
    res.uncertainty = {sd(0), sd(1), sd(2), sd(3), sd(4)};
    double plain = 0.0;
    for (const auto& d : data) {
        const double r = polar_model(p, t, opts.sigma_perp_hz, opts.b_z, d.phi_b) - d.delta_omega;
        plain += r * r;
    }
    res.residual_rms = std::sqrt(plain / static_cast<double>(data.size()));
    res.converged = best.converged;
    res.evaluations = evaluations;
    res.n_points = data.size();
    return res;
}

}  // namespace nvfield
