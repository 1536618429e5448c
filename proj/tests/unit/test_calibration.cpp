#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nvfield/nvfield.hpp"
#include "oracles.hpp"

using namespace nvfield;

namespace {
constexpr double kPi = std::numbers::pi;
const NVParams kP{};
const FitParameters kTruth{23.6, -4.19e3, 81.6e3, deg_to_rad(32.0), deg_to_rad(22.0)};

std::vector<PolarDatum> synth(const FitParameters& t, int n, double sigma_hz = 0.189e6) {
    std::vector<PolarDatum> d;
    for (int i = 0; i < n; ++i) {
        const double phi = 2 * kPi * i / n;
        d.push_back({phi, polar_model(kP, t, sigma_hz, 0.0, phi)});
    }
    return d;
}
}  // namespace

// --- hyperfine -----------------------------------------------------------------

TEST(Hyperfine, HermitianTracelessAndConservesMi) {
    const auto sys = hyperfine_hamiltonian(kP, MagneticField(1.3, 20, 0.4), {3e3, -2e3, 1e3});
    EXPECT_EQ(sys.hamiltonian.dim(), 9);
    EXPECT_TRUE(sys.hamiltonian.is_hermitian(1e-12));
    EXPECT_LE(std::abs(sys.hamiltonian.trace()), 1e-9 * sys.hamiltonian.norm());
    const auto [sx, sy, sz] = spin_operators();
    const auto iz = kron(SpinMatrix::identity(3), sz);
    const SpinMatrix comm = sys.hamiltonian * iz - iz * sys.hamiltonian;
    EXPECT_LE(comm.norm(), 1e-12 * sys.hamiltonian.norm());
}

TEST(Hyperfine, FullTensorNotProvided) {
    EXPECT_THROW(hyperfine_hamiltonian(kP, {}, {}, true), ArgumentError);
}

TEST(Hyperfine, ZeroFieldTriplet) {
    const auto lines = hyperfine_lines(hyperfine_hamiltonian(kP, {}, {}));
    ASSERT_EQ(lines.size(), 6u);
    const double expect[6] = {kP.d_gs - 2.2e6, kP.d_gs - 2.2e6, kP.d_gs, kP.d_gs, kP.d_gs + 2.2e6, kP.d_gs + 2.2e6};
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(lines[i].frequency, expect[i], 1e-5);
}

TEST(Hyperfine, OuterPairsOverlapWithStrainAtZeroBz) {
    const auto s = StrainField::from_frequency(0, 0.189e6, 0.3, kP);
    const auto lines = hyperfine_lines(hyperfine_hamiltonian(kP, {}, effective_field(s)));
    EXPECT_NEAR(outer_line_splitting(lines), 0.0, 1e-5);
    // Only the central pair is split, by 2·d⊥σ⊥.
    EXPECT_NEAR(central_line_splitting(lines), 2 * 0.189e6, 1e-3);
    // Outer partners: hyperfine and strain add in quadrature.
    for (int mi : {-1, 1})
        EXPECT_NEAR(find_line(lines, mi, +1).frequency - find_line(lines, mi, -1).frequency,
                    2 * std::hypot(kP.a_hf, 0.189e6), 1e-3);
}

TEST(Hyperfine, AxialFieldSplitsSameMiPartners) {
    const auto lines = hyperfine_lines(hyperfine_hamiltonian(kP, MagneticField(2.0, 0, 0), {}));
    const double zeeman = 2 * kP.gamma() * 2.0;
    EXPECT_NEAR(zeeman, 11.21e6, 1e4);
    for (int mi : {-1, 0, 1}) {
        const double d = line_by_character(lines, mi, +1).frequency - line_by_character(lines, mi, -1).frequency;
        EXPECT_NEAR(d, zeeman + 2 * kP.a_hf * mi, 1e-3);
    }
}

TEST(Hyperfine, MatchesDenseReferenceSolver) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ub(-10, 10), ue(-5e3, 5e3);
    for (int i = 0; i < 30; ++i) {
        const auto b = MagneticField::cartesian(ub(rng), ub(rng), 0.5 + std::abs(ub(rng)));
        const EffectiveField pi{ue(rng), ue(rng), ue(rng)};
        const auto lines = hyperfine_lines(hyperfine_hamiltonian(kP, b, pi));
        const auto ref = oracle::hyperfine_transitions({b.b_x(), b.b_y(), b.b_z(), pi.pi_x, pi.pi_y, pi.pi_z});
        for (int k = 0; k < 6; ++k) EXPECT_NEAR(lines[k].frequency, ref(k), 1e-3);
    }
}

TEST(Hyperfine, SignedOuterSplittingIsOddInBz) {
    const auto s = StrainField::from_frequency(0, 0.189e6, 0.3, kP);
    for (double bz : {0.05, 0.3, 1.0, 5.0}) {
        const auto up = hyperfine_lines(hyperfine_hamiltonian(kP, MagneticField(bz, 23.6, 0.2), effective_field(s)));
        const auto dn = hyperfine_lines(hyperfine_hamiltonian(kP, MagneticField(-bz, 23.6, 0.2), effective_field(s)));
        EXPECT_NEAR(outer_line_splitting(up), -outer_line_splitting(dn), 1e-4);
        EXPECT_GT(outer_line_splitting(up), 0.0);
    }
}

// --- alignment -----------------------------------------------------------------

TEST(Alignment, RecoversSyntheticZero) {
    std::vector<double> c;
    for (int i = 0; i <= 20; ++i) c.push_back(0.17 + 0.02 * i);
    const auto s = StrainField::from_frequency(0, 0.189e6, 0.3, kP);
    for (double bp : {0.0, 5.0, 23.6}) {
        const auto scan = synthesize_alignment_scan(kP, c, 2.0, 0.37, bp, 0.0, s);
        const auto r = align_axial_field(scan, kP, 2e5, 2.0);
        EXPECT_LE(std::abs(r.control_at_zero - 0.37) * 2.0 * 0.1, 0.003) << "B_perp " << bp;
        EXPECT_GT(r.uncertainty_mt, 0.0);
    }
}

TEST(Alignment, ZeroOffGridIsStillRecovered) {
    std::vector<double> c;
    for (int i = 0; i <= 14; ++i) c.push_back(-1.0 + i / 7.0);
    const auto scan = synthesize_alignment_scan(kP, c, 1.5, 0.123, 23.6, 0.7, {});
    const auto r = align_axial_field(scan, kP, 2e5, 1.5);
    EXPECT_LE(std::abs(r.control_at_zero - 0.123) * 1.5 * 0.1, 0.003);
}

TEST(Alignment, SymmetricScanGivesMidpoint) {
    AlignmentScan scan;
    for (int i = -5; i <= 5; ++i) {
        scan.control.push_back(2.0 + i);
        scan.splitting.push_back(std::abs(3.0 * i));
    }
    const auto r = align_axial_field(scan, kP, 1e5);
    EXPECT_EQ(r.control_at_zero, 2.0);
}

TEST(Alignment, ExactOnNoiseFreeLinearScan) {
    AlignmentScan scan;
    for (int i = 0; i < 9; ++i) {
        const double c = 0.1 * i;
        scan.control.push_back(c);
        scan.splitting.push_back(std::abs(5e6 * (c - 0.4321)));
    }
    const auto r = align_axial_field(scan, kP, 1e5);
    EXPECT_NEAR(r.control_at_zero, 0.4321, 1e-14);
    EXPECT_NEAR(r.slope, 5e6, 1e-6);
    EXPECT_NEAR(r.uncertainty_mt, 0.1 * 1e5 / (2 * kP.gamma()), 1e-15);
}

TEST(Alignment, UnorderedInputHandled) {
    // |10c − 2.5| sampled out of order; the zero falls between samples.
    AlignmentScan scan{{0.4, 0.0, 0.2, 0.3, 0.1}, {1.5, 2.5, 0.5, 0.5, 1.5}, {}};
    const auto r = align_axial_field(scan, kP, 1e5);
    EXPECT_NEAR(r.control_at_zero, 0.25, 1e-12);
}

TEST(Alignment, Rejections) {
    AlignmentScan edge{{0, 1, 2}, {1, 2, 3}, {}};
    EXPECT_THROW(align_axial_field(edge, kP, 1e5), ArgumentError);
    AlignmentScan few{{0, 1}, {1, 1}, {}};
    EXPECT_THROW(align_axial_field(few, kP, 1e5), ArgumentError);
    AlignmentScan neg{{0, 1, 2}, {1, -1, 1}, {}};
    EXPECT_THROW(align_axial_field(neg, kP, 1e5), ArgumentError);
    AlignmentScan ok{{0, 1, 2}, {1, 0, 1}, {}};
    EXPECT_THROW(align_axial_field(ok, kP, 0.0), ArgumentError);
    AlignmentScan dup{{0, 1, 1, 2}, {1, 0, 0, 1}, {}};
    EXPECT_THROW(align_axial_field(dup, kP, 1e5), ArgumentError);
}

// --- σ⊥ inference ------------------------------------------------------------------

TEST(SigmaPerp, RoundTrip) {
    const double split = central_splitting_model(kP, 0.189e6, 23.6, kPi / 2);
    EXPECT_NEAR(infer_sigma_perp(split, 23.6, kP), 0.189e6, 0.01 * 0.189e6);
    EXPECT_NEAR(infer_sigma_perp(split, 23.6, kP), 0.189e6, 1.0);
}

TEST(SigmaPerp, ZeroStrainReturnsZero) {
    const double floor_split = central_splitting_model(kP, 0.0, 23.6, kPi / 2);
    const double delta = std::pow(kP.gamma() * 23.6, 2) / (2 * kP.d_gs);
    EXPECT_NEAR(floor_split, 2 * delta, 0.01 * delta);
    EXPECT_NEAR(infer_sigma_perp(floor_split, 23.6, kP), 0.0, 1e-3);
    EXPECT_THROW(infer_sigma_perp(0.5 * floor_split, 23.6, kP), ArgumentError);
    EXPECT_THROW(infer_sigma_perp(-1.0, 23.6, kP), ArgumentError);
}

TEST(SigmaPerp, DoublingInStrainDominatedRegime) {
    const double s1 = central_splitting_model(kP, 1e6, 2.0, kPi / 2);
    const double s2 = central_splitting_model(kP, 2e6, 2.0, kPi / 2);
    EXPECT_NEAR(s2 / s1, 2.0, 0.04);
}

TEST(SigmaPerp, OtherRelativePhase) {
    const double delta = std::pow(kP.gamma() * 23.6, 2) / (2 * kP.d_gs);
    const double split = central_splitting_model(kP, 0.7e6, 23.6, 1.0);
    EXPECT_NEAR(infer_sigma_perp(split, 23.6, kP, 1.0), 0.7e6, 0.01 * 0.7e6);
    // Below δ·cos(phase) the splitting is not monotonic in σ⊥; the upper root
    // is returned and reproduces the measured splitting.
    const double low = central_splitting_model(kP, 0.189e6, 23.6, 1.0);
    const double root = infer_sigma_perp(low, 23.6, kP, 1.0);
    EXPECT_GE(root, delta * std::cos(1.0));
    EXPECT_NEAR(central_splitting_model(kP, root, 23.6, 1.0), low, 1e-7 * low);
}

// --- polar fit ---------------------------------------------------------------------

TEST(Canonicalize, FourFoldClass) {
    EXPECT_NEAR(canonicalize_angle(deg_to_rad(32.0)), deg_to_rad(32.0), 1e-15);
    EXPECT_NEAR(canonicalize_angle(deg_to_rad(122.0)), deg_to_rad(32.0), 1e-14);
    EXPECT_NEAR(canonicalize_angle(deg_to_rad(-58.0)), deg_to_rad(32.0), 1e-14);
    EXPECT_NEAR(canonicalize_angle(deg_to_rad(302.0)), deg_to_rad(32.0), 1e-13);
    EXPECT_EQ(canonicalize_angle(kPi / 2), 0.0);
    const double r = canonicalize_angle(-1e-17);
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, kPi / 2);
}

TEST(PolarModel, SymmetriesOfTheForwardModel) {
    // Π → −Π (φ_E, φ_σ + π) is a quarter-turn of the pattern in φ_B, and the
    // pattern repeats every half turn; on a grid of 4k points the value set is
    // invariant under the shift of both azimuths by π.
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ua(0, 2 * kPi), ub(5, 30), ue(1e4, 1e5);
    for (int trial = 0; trial < 20; ++trial) {
        FitParameters t{ub(rng), -3e3, ue(rng), ua(rng), ua(rng)};
        FitParameters u = t;
        u.phi_e += kPi;
        u.phi_sigma += kPi;
        for (int i = 0; i < 72; ++i) {
            const double phi = 2 * kPi * i / 72;
            const double a = polar_model(kP, t, 0.189e6, 0, phi);
            EXPECT_NEAR(a, polar_model(kP, u, 0.189e6, 0, phi + kPi / 2), 1e-7);
            EXPECT_NEAR(a, polar_model(kP, t, 0.189e6, 0, phi + kPi), 1e-7);
        }
    }
}

TEST(PolarFit, NoiselessRecovery) {
    const auto r = fit_polar_pattern(synth(kTruth, 36), kP);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value.b_perp, 23.6, 1e-6 * 23.6);
    EXPECT_NEAR(r.value.d_par_e_z, -4190, 1e-6 * 4190);
    EXPECT_NEAR(r.value.d_perp_e_perp, 81600, 1e-6 * 81600);
    EXPECT_NEAR(r.value.phi_e, deg_to_rad(32.0), 1e-6 * deg_to_rad(32.0));
    EXPECT_NEAR(r.value.phi_sigma, deg_to_rad(22.0), 1e-6 * deg_to_rad(22.0));
    EXPECT_LT(r.residual_rms, 1e-3);
    EXPECT_GE(r.value.phi_e, 0.0);
    EXPECT_LT(r.value.phi_e, kPi / 2);
}

TEST(PolarFit, SelfConsistencyAtRandomParameters) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> ua(0, 2 * kPi), ub(10, 30), ue(3e4, 1.2e5), uz(-8e3, 8e3);
    for (int trial = 0; trial < 4; ++trial) {
        const FitParameters t{ub(rng), uz(rng), ue(rng), ua(rng), ua(rng)};
        const auto r = fit_polar_pattern(synth(t, 36), kP);
        EXPECT_NEAR(r.value.b_perp, t.b_perp, 1e-6 * t.b_perp);
        EXPECT_NEAR(r.value.d_par_e_z, t.d_par_e_z, 1e-6 * std::abs(t.d_par_e_z));
        EXPECT_NEAR(r.value.d_perp_e_perp, t.d_perp_e_perp, 1e-6 * t.d_perp_e_perp);
        EXPECT_NEAR(r.value.phi_e, canonicalize_angle(t.phi_e), 1e-6);
        EXPECT_NEAR(r.value.phi_sigma, canonicalize_angle(t.phi_sigma), 1e-6);
    }
}

TEST(PolarFit, NoisyRecoveryAndUncertainties) {
    auto rng = make_engine(5);
    std::normal_distribution<double> n(0, 2e3);
    auto d = synth(kTruth, 36);
    double noise2 = 0;
    for (auto& x : d) {
        const double v = n(rng);
        noise2 += v * v;
        x.delta_omega += v;
    }
    const double noise_rms = std::sqrt(noise2 / 36);
    const auto r = fit_polar_pattern(d, kP);
    EXPECT_NEAR(rad_to_deg(r.value.phi_e), 32.0, 3.0);
    EXPECT_NEAR(r.value.d_perp_e_perp, 81600, 0.05 * 81600);
    EXPECT_GT(r.uncertainty.d_perp_e_perp, 0.0);
    EXPECT_LT(r.uncertainty.d_perp_e_perp, 5e3);
    // Five fitted parameters absorb part of the realised noise.
    EXPECT_LE(r.residual_rms, noise_rms);
    EXPECT_GE(r.residual_rms, 0.7 * noise_rms);
}

TEST(PolarFit, WeightedWithSigmaColumn) {
    auto d = synth(kTruth, 36);
    auto rng = make_engine(6);
    std::normal_distribution<double> n(0, 1.0);
    for (auto& x : d) {
        x.sigma = 1e3;
        x.delta_omega += 1e3 * n(rng);
    }
    const auto r = fit_polar_pattern(d, kP);
    EXPECT_NEAR(r.value.d_perp_e_perp, 81600, 4 * r.uncertainty.d_perp_e_perp + 1.0);
    EXPECT_GT(r.uncertainty.b_perp, 0.0);
}

TEST(PolarFit, NullFieldConsistentWithZero) {
    FitParameters t = kTruth;
    t.d_perp_e_perp = 0;
    t.d_par_e_z = 2e3;
    auto d = synth(t, 36);
    auto rng = make_engine(9);
    std::normal_distribution<double> n(0, 100.0);
    for (auto& x : d) x.delta_omega += n(rng);
    const auto r = fit_polar_pattern(d, kP);
    EXPECT_LE(r.value.d_perp_e_perp, 3 * r.uncertainty.d_perp_e_perp + 50.0);
}

TEST(PolarFit, Preconditions) {
    auto d = synth(kTruth, 36);
    EXPECT_THROW(fit_polar_pattern(std::span(d).first(7), kP), ArgumentError);
    std::vector<PolarDatum> narrow;
    for (int i = 0; i < 12; ++i) narrow.push_back({deg_to_rad(10.0 * i), 1e3 * i});
    EXPECT_THROW(fit_polar_pattern(narrow, kP), ArgumentError);
    std::vector<PolarDatum> flat;
    for (int i = 0; i < 36; ++i) flat.push_back({deg_to_rad(10.0 * i), 5.0});
    EXPECT_THROW(fit_polar_pattern(flat, kP), ArgumentError);
}

TEST(PolarFit, IterationCapSetsFlag) {
    PolarFitOptions o;
    o.max_evaluations = 50;
    const auto r = fit_polar_pattern(synth(kTruth, 36), kP, o);
    EXPECT_FALSE(r.converged);
    EXPECT_TRUE(std::isfinite(r.residual_rms));
}
