#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvfield/calibration.hpp"
#include "nvfield/config.hpp"
#include "nvfield/decoherence.hpp"
#include "nvfield/field_response.hpp"
#include "nvfield/io.hpp"
#include "nvfield/odmr.hpp"
#include "nvfield/pulse_sequence.hpp"
#include "nvfield/readout.hpp"
#include "nvfield/signal.hpp"
#include "nvfield/units.hpp"

// Subcommand bodies for the command-line tool. Each returns the files it
// wants written plus anything for stdout; the caller does the writing, so
// the commands stay testable without touching the file system.
namespace nvfield::cli {

struct OutputFile {
    std::string name;
    std::string contents;
};

struct CommandOutput {
    std::vector<OutputFile> files;
    std::string stdout_text;
    std::vector<std::string> warnings;
};

inline void write_outputs(const CommandOutput& out, const std::filesystem::path& dir) {
    for (const auto& f : out.files) io::write_atomic(dir / f.name, f.contents);
}

inline void emit_table(CommandOutput& out, const RunConfig& cfg, const std::string& stem, const io::Table& t) {
    if (cfg.format == OutputFormat::Csv)
        out.files.push_back({stem + ".csv", io::to_csv(t)});
    else
        out.files.push_back({stem + ".json", io::dump(io::to_json(t, stem))});
}

/// i-th of n points on [-span, span]; exact zero and exact end points, and
/// mirror-image points are exact negatives of each other.
inline double symmetric_grid_point(double span, std::size_t i, std::size_t n) {
    const auto last = static_cast<double>(n - 1);
    const auto k = static_cast<double>(i);
    return 2.0 * k >= last ? span * (2.0 * k - last) / last : -span * (last - 2.0 * k) / last;
}

/// Field configuration as typed on the command line: angles in degrees,
/// strain magnitude as a frequency. The defaults are the fitted values of the
/// reference polar pattern.
struct FieldArgs {
    double b_z = 0.0;          // G
    double b_perp = 23.6;      // G
    double phi_b_deg = 0.0;
    double e_z = -4190.0 / 0.35;   // V/cm
    double e_perp = 81600.0 / 17.0;  // V/cm
    double phi_e_deg = 32.0;
    double sigma_z = 0.0;      // V/cm
    double sigma_perp_hz = 0.189e6;
    double phi_sigma_deg = 22.0;

    MagneticField magnetic() const { return {b_z, b_perp, deg_to_rad(phi_b_deg)}; }
    ElectricField electric() const { return {e_z, e_perp, deg_to_rad(phi_e_deg)}; }
    StrainField strain(const NVParams& p) const {
        if (sigma_perp_hz < 0.0) throw ArgumentError("sigma_perp_hz must be >= 0");
        return {sigma_z, sigma_perp_hz / p.d_perp, deg_to_rad(phi_sigma_deg)};
    }
};

// --- polar -----------------------------------------------------------------

struct PolarArgs {
    FieldArgs field;
    std::size_t n_angles = 360;
};

inline CommandOutput cmd_polar(const RunConfig& cfg, const PolarArgs& a) {
    const auto& p = cfg.nv;
    const auto e = a.field.electric();
    const auto s = a.field.strain(p);
    RegimeDiagnostics worst;
    const auto pert = polar_scan(p, a.field.b_perp, a.field.b_z, e, s, a.n_angles, ShiftMethod::Perturbative, &worst);
    const auto exact = polar_scan(p, a.field.b_perp, a.field.b_z, e, s, a.n_angles, ShiftMethod::Exact);

    io::Table t{{{"phi_b", "deg"},
                 {"delta_omega_plus_pert", "Hz"},
                 {"delta_omega_minus_pert", "Hz"},
                 {"delta_omega_plus_exact", "Hz"},
                 {"delta_omega_minus_exact", "Hz"}},
                {}};
    for (std::size_t i = 0; i < pert.size(); ++i)
        t.add_row({rad_to_deg(pert[i].x), pert[i].shift.d_omega_plus, pert[i].shift.d_omega_minus,
                   exact[i].shift.d_omega_plus, exact[i].shift.d_omega_minus});
    CommandOutput out;
    if (worst.outside_regime()) out.warnings.push_back(worst.message());
    emit_table(out, cfg, "polar", t);
    return out;
}

// --- axial-decay -------------------------------------------------------------

struct AxialDecayArgs {
    FieldArgs field;
    double b_z_span = 100.0;  // G, grid covers [-span, span]
    std::size_t n_points = 201;
};

inline CommandOutput cmd_axial_decay(const RunConfig& cfg, const AxialDecayArgs& a) {
    if (a.n_points < 2) throw ArgumentError("axial-decay: need at least 2 grid points");
    if (!(a.b_z_span > 0.0)) throw ArgumentError("axial-decay: b_z span must be > 0");
    const auto& p = cfg.nv;
    const auto e = a.field.electric();
    const auto s = a.field.strain(p);
    const double phi_b = deg_to_rad(a.field.phi_b_deg);

    std::vector<double> grid(a.n_points);
    for (std::size_t i = 0; i < a.n_points; ++i)
        grid[i] = symmetric_grid_point(a.b_z_span, i, a.n_points);
    const auto exact = axial_decay_scan(p, a.field.b_perp, phi_b, e, s, grid);

    double peak = 0.0;
    for (const auto& pt : exact) peak = std::max(peak, std::abs(pt.shift.d_omega_plus));

    CommandOutput out;
    RegimeDiagnostics worst;
    io::Table t{{{"b_z", "G"}, {"delta_omega_plus_exact", "Hz"}, {"delta_omega_plus_pert", "Hz"}, {"normalized_exact", "1"}},
                {}};
    for (const auto& pt : exact) {
        RegimeDiagnostics d;
        const auto pert = delta_omega_perturbative(p, MagneticField(pt.x, a.field.b_perp, phi_b), e, s, &d);
        worst.zeeman_ratio = std::max(worst.zeeman_ratio, d.zeeman_ratio);
        worst.stark_ratio = std::max(worst.stark_ratio, d.stark_ratio);
        t.add_row({pt.x, pt.shift.d_omega_plus, pert.d_omega_plus, peak > 0.0 ? pt.shift.d_omega_plus / peak : 0.0});
    }
    if (worst.outside_regime()) out.warnings.push_back(worst.message());
    emit_table(out, cfg, "axial_decay", t);
    return out;
}

// --- sense -------------------------------------------------------------------

struct SenseArgs {
    std::string kind = "hahn";  // hahn | fid
    double tau = 0.0;           // s; 0 picks 80 µs (Hahn) or 8 µs (FID)
    double phase_offset = 0.0;  // s
    double e_max = 1500.0;      // V/cm, fringe sweep upper end
    std::size_t n_fringe = 301;
    double t_min = 1.0;  // s
    double t_max = 1000.0;
    std::size_t n_times = 13;
    std::size_t n_points = 1000;
};

inline SequenceKind parse_kind(const std::string& k) {
    if (k == "hahn") return SequenceKind::HahnEcho;
    if (k == "fid") return SequenceKind::FID;
    throw ArgumentError("kind must be 'hahn' or 'fid', got '" + k + "'");
}

inline SignalModel signal_model(const RunConfig& cfg, SequenceKind kind) {
    SignalModel m;
    m.contrast = cfg.budget.contrast;
    m.photons_per_readout = cfg.budget.photons_per_readout;
    m.central_line_only = cfg.budget.central_line_only;
    m.envelope_exponent = cfg.decoherence.envelope_exponent;
    m.coherence_time = kind == SequenceKind::HahnEcho ? cfg.decoherence.t2 : cfg.decoherence.t2_star_perp;
    return m;
}

inline CommandOutput cmd_sense(const RunConfig& cfg, const SenseArgs& a) {
    const auto kind = parse_kind(a.kind);
    const auto m = signal_model(cfg, kind);
    m.validate();
    const double tau = a.tau > 0.0 ? a.tau : (kind == SequenceKind::HahnEcho ? 80e-6 : 8e-6);
    if (a.n_fringe < 2 || !(a.e_max > 0.0)) throw ArgumentError("sense: fringe sweep needs e_max > 0 and >= 2 points");
    if (a.n_times < 2 || !(a.t_min > 0.0) || !(a.t_max > a.t_min))
        throw ArgumentError("sense: total-time grid needs 0 < t_min < t_max and >= 2 points");

    CommandOutput out;
    const auto response = linear_response(cfg.nv.d_perp);
    {
        const auto probe = PulseSequence::matched_square_wave(kind, tau, 1.0, a.phase_offset);
        if (!probe.phase_matched())
            out.warnings.push_back("experimental: waveform is not phase matched to the pulse sequence");
    }
    io::Table fringe{{{"e_perp", "V/cm"}, {"phase", "rad"}, {"signal", "1"}}, {}};
    for (std::size_t i = 0; i < a.n_fringe; ++i) {
        const double e = a.e_max * static_cast<double>(i) / static_cast<double>(a.n_fringe - 1);
        const auto seq = PulseSequence::matched_square_wave(kind, tau, e, a.phase_offset);
        const double phi = accumulated_phase(seq, response);
        fringe.add_row({e, phi, signal_intensity(phi, m, seq.duration())});
    }
    emit_table(out, cfg, "sense_fringe", fringe);

    SensitivityOptions so;
    so.tau = tau;
    so.overhead = cfg.budget.overhead;
    so.n_points = a.n_points;
    std::vector<double> times(a.n_times);
    for (std::size_t i = 0; i < a.n_times; ++i)
        times[i] = a.t_min * std::pow(a.t_max / a.t_min, static_cast<double>(i) / static_cast<double>(a.n_times - 1));
    const auto curve = sensitivity_curve(m, cfg.nv.d_perp, kind, times, cfg.seed, so);
    io::Table ct{{{"total_time", "s"}, {"delta_e_min_mc", "V/cm"}, {"delta_e_min_shot_noise", "V/cm"}}, {}};
    for (const auto& pt : curve) ct.add_row({pt.total_time, pt.delta_e_min_mc, pt.delta_e_min_shot_noise});
    emit_table(out, cfg, "sense_curve", ct);

    const auto r = sensitivity_at(m, cfg.nv.d_perp, kind, 1.0, cfg.seed, so, a.n_times);
    nlohmann::ordered_json j{
        {"kind", a.kind},
        {"tau_s", r.tau},
        {"optimal_tau_s", r.optimal_tau},
        {"total_time_s", r.total_time},
        {"n_shots", r.n_shots},
        {"sigma_sn", r.sigma_sn},
        {"sigma_sn_shot", r.sigma_sn_shot},
        {"delta_s_per_v_per_cm", r.delta_s},
        {"delta_e_min_v_per_cm", r.delta_e_min},
        {"e_sen_v_per_cm_sqrt_hz", r.e_sen},
        {"e_sen_shot_noise_v_per_cm_sqrt_hz", shot_noise_limit(m, cfg.nv.d_perp, kind, tau, 1.0, so.overhead)},
        {"fringe_period_v_per_cm", 1.0 / (phase_multiplier(kind) * cfg.nv.d_perp * tau)},
        {"seed", cfg.seed}};
    out.files.push_back({"sense_report.json", io::dump(j)});
    return out;
}

// --- t2star ------------------------------------------------------------------

struct T2StarArgs {
    double sigma_perp_hz = 0.189e6;
    std::size_t n_points = 201;
};

inline CommandOutput cmd_t2star(const RunConfig& cfg, const T2StarArgs& a) {
    if (a.n_points < 2) throw ArgumentError("t2star: need at least 2 grid points");
    const double span = cfg.decoherence.b_z_max;
    io::Table t{{{"b_z", "G"}, {"kappa", "1"}, {"t2_star", "s"}}, {}};
    for (std::size_t i = 0; i < a.n_points; ++i) {
        const double bz = symmetric_grid_point(span, i, a.n_points);
        t.add_row({bz, mixing_kappa(cfg.nv, bz, a.sigma_perp_hz),
                   t2star_model(cfg.decoherence, cfg.nv, a.sigma_perp_hz, bz)});
    }
    CommandOutput out;
    emit_table(out, cfg, "t2star", t);
    return out;
}

// --- align -------------------------------------------------------------------

struct AlignArgs {
    std::string scan_path;
    double linewidth_hz = 2e5;
    double gauss_per_control = std::numeric_limits<double>::quiet_NaN();
};

inline CommandOutput cmd_align(const RunConfig& cfg, const AlignArgs& a) {
    const auto rows = io::read_csv(a.scan_path, 2, 2);
    AlignmentScan scan;
    for (const auto& r : rows) {
        scan.control.push_back(r[0]);
        scan.splitting.push_back(r[1]);
    }
    const auto res = align_axial_field(scan, cfg.nv, a.linewidth_hz, a.gauss_per_control);
    nlohmann::ordered_json j{{"control_at_zero", res.control_at_zero},
                             {"uncertainty_mt", res.uncertainty_mt},
                             {"slope_hz_per_control", res.slope},
                             {"linewidth_hz", a.linewidth_hz},
                             {"n_points", scan.control.size()},
                             {"signed_splitting_hz", res.signed_splitting}};
    CommandOutput out;
    out.files.push_back({"align.json", io::dump(j)});
    return out;
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
    std::string data_path;
    double sigma_perp_hz = 0.189e6;
    double b_z = 0.0;
};

inline nlohmann::ordered_json fit_result_json(const FitResult& r) {
    auto entry = [](double v, double u, const char* unit) {
        return nlohmann::ordered_json{{"value", v}, {"uncertainty", u}, {"unit", unit}};
    };
    return {{"parameters",
             {{"b_perp", entry(r.value.b_perp, r.uncertainty.b_perp, "G")},
              {"d_par_e_z", entry(r.value.d_par_e_z, r.uncertainty.d_par_e_z, "Hz")},
              {"d_perp_e_perp", entry(r.value.d_perp_e_perp, r.uncertainty.d_perp_e_perp, "Hz")},
              {"phi_e", entry(rad_to_deg(r.value.phi_e), rad_to_deg(r.uncertainty.phi_e), "deg")},
              {"phi_sigma", entry(rad_to_deg(r.value.phi_sigma), rad_to_deg(r.uncertainty.phi_sigma), "deg")}}},
            {"phi_e_full_deg", rad_to_deg(r.phi_e_full)},
            {"phi_sigma_full_deg", rad_to_deg(r.phi_sigma_full)},
            {"residual_rms_hz", r.residual_rms},
            {"converged", r.converged},
            {"evaluations", r.evaluations},
            {"n_points", r.n_points},
            {"symmetry_note",
             "phi_e and phi_sigma are reported modulo 90 deg; the *_full_deg values are the fitted azimuths"}};
}

inline CommandOutput cmd_fit(const RunConfig& cfg, const FitArgs& a) {
    const auto rows = io::read_csv(a.data_path, 2, 3);
    std::vector<PolarDatum> data;
    for (const auto& r : rows) data.push_back({deg_to_rad(r[0]), r[1], r.size() > 2 ? r[2] : 0.0});
    PolarFitOptions o;
    o.sigma_perp_hz = a.sigma_perp_hz;
    o.b_z = a.b_z;
    const auto res = fit_polar_pattern(data, cfg.nv, o);
    CommandOutput out;
    if (!res.converged) out.warnings.push_back("fit did not converge; best-so-far parameters reported");
    out.files.push_back({"fit.json", io::dump(fit_result_json(res))});
    return out;
}

// --- charge ------------------------------------------------------------------

inline CommandOutput cmd_charge(const RunConfig& cfg, double charge, double distance) {
    const double e = point_charge_field(charge, distance);
    CommandOutput out;
    if (cfg.format == OutputFormat::Json)
        out.stdout_text = io::dump(nlohmann::ordered_json{
            {"charge_e", charge}, {"distance_m", distance}, {"field_v_per_cm", e}});
    else
        out.stdout_text = io::format_number(e) + "\n";
    return out;
}

// --- odmr --------------------------------------------------------------------

struct OdmrArgs {
    FieldArgs field{.b_z = 2.0, .b_perp = 0.0, .e_z = 0.0, .e_perp = 0.0};
    double linewidth_hz = 0.5e6;
    double contrast = 0.3;
    double span_hz = 20e6;  // grid covers D ± span
    std::size_t n_points = 2001;
};

inline CommandOutput cmd_odmr(const RunConfig& cfg, const OdmrArgs& a) {
    if (a.n_points < 2 || !(a.span_hz > 0.0)) throw ArgumentError("odmr: need span > 0 and >= 2 grid points");
    const auto& p = cfg.nv;
    std::vector<double> grid(a.n_points);
    for (std::size_t i = 0; i < a.n_points; ++i)
        grid[i] = p.d_gs - a.span_hz + 2.0 * a.span_hz * static_cast<double>(i) / static_cast<double>(a.n_points - 1);
    const auto b = a.field.magnetic();
    const auto e = a.field.electric();
    const auto s = a.field.strain(p);
    const auto spec = cw_odmr_spectrum(p, b, e, s, a.linewidth_hz, a.contrast, grid);

    io::Table t{{{"frequency", "Hz"}, {"fluorescence", "1"}}, {}};
    for (const auto& pt : spec) t.add_row({pt.frequency, pt.fluorescence});
    io::Table lt{{{"frequency", "Hz"}, {"m_i", "1"}, {"branch", "1"}, {"spin_z", "1"}}, {}};
    for (const auto& l : hyperfine_lines(hyperfine_hamiltonian(p, b, effective_field(e, s))))
        lt.add_row({l.frequency, static_cast<double>(l.m_i), static_cast<double>(l.branch), l.spin_z});
    CommandOutput out;
    emit_table(out, cfg, "odmr", t);
    emit_table(out, cfg, "odmr_lines", lt);
    return out;
}

}  // namespace nvfield::cli
