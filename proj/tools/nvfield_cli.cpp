// nvfield: command-line front end. See README for the subcommands.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "nvfield/commands.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 2, kRegime = 3, kIo = 4 };

void add_field_flags(CLI::App* sub, nvfield::cli::FieldArgs& f) {
    sub->add_option("--b-z", f.b_z, "axial magnetic field, G")->capture_default_str();
    sub->add_option("--b-perp", f.b_perp, "non-axial magnetic field magnitude, G")->capture_default_str();
    sub->add_option("--phi-b", f.phi_b_deg, "magnetic azimuth, deg")->capture_default_str();
    sub->add_option("--e-z", f.e_z, "axial electric field, V/cm")->capture_default_str();
    sub->add_option("--e-perp", f.e_perp, "non-axial electric field magnitude, V/cm")->capture_default_str();
    sub->add_option("--phi-e", f.phi_e_deg, "electric azimuth, deg")->capture_default_str();
    sub->add_option("--sigma-z", f.sigma_z, "axial strain, V/cm equivalent")->capture_default_str();
    sub->add_option("--sigma-perp-hz", f.sigma_perp_hz, "non-axial strain d_perp*sigma_perp, Hz")->capture_default_str();
    sub->add_option("--phi-sigma", f.phi_sigma_deg, "strain azimuth, deg")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace nvfield;
    using namespace nvfield::cli;

    CLI::App app{"NV-centre electrometry simulator and analysis tool"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    app.add_option("--config", config_path, "flat JSON config file");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "series format")->check(CLI::IsMember({"csv", "json"}));

    PolarArgs polar;
    auto* polar_cmd = app.add_subcommand("polar", "Δω over the magnetic azimuth (perturbative and exact)");
    add_field_flags(polar_cmd, polar.field);
    polar_cmd->add_option("--n-angles", polar.n_angles, "number of azimuths")->capture_default_str();

    AxialDecayArgs axial;
    auto* axial_cmd = app.add_subcommand("axial-decay", "Δω over the axial magnetic field");
    add_field_flags(axial_cmd, axial.field);
    axial_cmd->add_option("--b-z-span", axial.b_z_span, "grid half-width, G")->capture_default_str();
    axial_cmd->add_option("--n-points", axial.n_points, "grid size")->capture_default_str();

    SenseArgs sense;
    auto* sense_cmd = app.add_subcommand("sense", "signal fringe and sensitivity curve");
    sense_cmd->add_option("--kind", sense.kind, "hahn or fid")->check(CLI::IsMember({"hahn", "fid"}))->capture_default_str();
    sense_cmd->add_option("--tau", sense.tau, "free evolution time, s (0: 80 us Hahn, 8 us FID)")->capture_default_str();
    sense_cmd->add_option("--phase-offset", sense.phase_offset, "waveform delay, s (non-zero is experimental)")
        ->capture_default_str();
    sense_cmd->add_option("--e-max", sense.e_max, "fringe sweep end, V/cm")->capture_default_str();
    sense_cmd->add_option("--n-fringe", sense.n_fringe, "fringe points")->capture_default_str();
    sense_cmd->add_option("--t-min", sense.t_min, "shortest total time, s")->capture_default_str();
    sense_cmd->add_option("--t-max", sense.t_max, "longest total time, s")->capture_default_str();
    sense_cmd->add_option("--n-times", sense.n_times, "log-spaced total times")->capture_default_str();
    sense_cmd->add_option("--n-points", sense.n_points, "averaged points per total time")->capture_default_str();

    T2StarArgs t2;
    auto* t2_cmd = app.add_subcommand("t2star", "T2* and mixing over the axial field");
    t2_cmd->add_option("--sigma-perp-hz", t2.sigma_perp_hz, "non-axial strain, Hz")->capture_default_str();
    t2_cmd->add_option("--n-points", t2.n_points, "grid size")->capture_default_str();

    AlignArgs align;
    auto* align_cmd = app.add_subcommand("align", "locate B_z = 0 from an outer-line splitting scan");
    align_cmd->add_option("scan", align.scan_path, "CSV: control, splitting_hz")->required();
    align_cmd->add_option("--linewidth-hz", align.linewidth_hz, "resonance linewidth, Hz")->capture_default_str();
    align_cmd->add_option("--gauss-per-control", align.gauss_per_control, "coil calibration, G per control unit");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "invert a polar pattern for the field parameters");
    fit_cmd->add_option("data", fit.data_path, "CSV: phi_b_deg, delta_omega_hz[, sigma_hz]")->required();
    fit_cmd->add_option("--sigma-perp-hz", fit.sigma_perp_hz, "non-axial strain, Hz")->capture_default_str();
    fit_cmd->add_option("--b-z", fit.b_z, "residual axial field, G")->capture_default_str();

    double charge = 1.0, distance = 150e-9;
    auto* charge_cmd = app.add_subcommand("charge", "Coulomb field of a point charge, V/cm");
    charge_cmd->add_option("q", charge, "charge, multiples of e")->required();
    charge_cmd->add_option("r", distance, "distance, m")->required();

    OdmrArgs odmr;
    auto* odmr_cmd = app.add_subcommand("odmr", "CW ODMR spectrum with hyperfine structure");
    add_field_flags(odmr_cmd, odmr.field);
    odmr_cmd->add_option("--linewidth-hz", odmr.linewidth_hz, "Lorentzian FWHM, Hz")->capture_default_str();
    odmr_cmd->add_option("--contrast", odmr.contrast, "ODMR contrast")->capture_default_str();
    odmr_cmd->add_option("--span-hz", odmr.span_hz, "grid half-width around D, Hz")->capture_default_str();
    odmr_cmd->add_option("--n-points", odmr.n_points, "grid size")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.out = *out_dir;
        if (format) cfg.format = parse_format(*format);
        cfg.validate();

        CommandOutput out;
        if (*polar_cmd) out = cmd_polar(cfg, polar);
        else if (*axial_cmd) out = cmd_axial_decay(cfg, axial);
        else if (*sense_cmd) out = cmd_sense(cfg, sense);
        else if (*t2_cmd) out = cmd_t2star(cfg, t2);
        else if (*align_cmd) out = cmd_align(cfg, align);
        else if (*fit_cmd) out = cmd_fit(cfg, fit);
        else if (*charge_cmd) out = cmd_charge(cfg, charge, distance);
        else if (*odmr_cmd) out = cmd_odmr(cfg, odmr);

        for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
        write_outputs(out, cfg.out);
        for (const auto& f : out.files) std::cerr << "wrote " << (std::filesystem::path(cfg.out) / f.name).string() << "\n";
        std::cout << out.stdout_text;
        return kOk;
    } catch (const RegimeError& e) {
        std::cerr << "physics-regime error: " << e.what() << "\n";
        return kRegime;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    }
}
