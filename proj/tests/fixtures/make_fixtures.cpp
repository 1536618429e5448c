// Regenerates the shipped CLI input fixtures from the forward models.
// Usage: make_fixtures OUTDIR

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "nvfield/nvfield.hpp"

int main(int argc, char** argv) {
    using namespace nvfield;
    if (argc != 2) {
        std::fprintf(stderr, "usage: make_fixtures OUTDIR\n");
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    const NVParams p;

    const FitParameters truth{23.6, -4.19e3, 81.6e3, deg_to_rad(32.0), deg_to_rad(22.0)};
    std::string polar = "phi_b_deg,delta_omega_hz\n";
    for (int i = 0; i < 36; ++i) {
        const double deg = 10.0 * i;
        polar += io::format_number(deg) + "," +
                 io::format_number(polar_model(p, truth, 0.189e6, 0.0, deg_to_rad(deg))) + "\n";
    }
    io::write_atomic(dir / "polar_fit.csv", polar);

    std::vector<double> controls;
    for (int i = 0; i <= 20; ++i) controls.push_back((17.0 + 2.0 * i) / 100.0);
    const auto strain = StrainField::from_frequency(0.0, 0.189e6, deg_to_rad(22.0), p);
    const auto scan = synthesize_alignment_scan(p, controls, 2.0, 0.37, 23.6, 0.0, strain);
    std::string align = "control,splitting_hz\n";
    for (std::size_t i = 0; i < scan.control.size(); ++i)
        align += io::format_number(scan.control[i]) + "," + io::format_number(scan.splitting[i]) + "\n";
    io::write_atomic(dir / "alignment_scan.csv", align);
}
