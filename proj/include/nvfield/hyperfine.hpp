#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "nvfield/eigensolve.hpp"
#include "nvfield/error.hpp"
#include "nvfield/fields.hpp"
#include "nvfield/hamiltonian.hpp"
#include "nvfield/spin_matrix.hpp"

namespace nvfield {

/// Electron S=1 ⊗ 14N I=1 Hamiltonian, Hz, index 3·e + n.
struct HyperfineSystem {
    SpinMatrix hamiltonian{9};
    double a_hf = 0.0;
    bool full_tensor = false;
};

/// H_e ⊗ 1 + A·S_z ⊗ I_z. Only the axial hyperfine term is modelled; the
/// full tensor and the quadrupole term are rejected.
inline HyperfineSystem hyperfine_hamiltonian(const NVParams& p, const MagneticField& b, const EffectiveField& pi,
                                             bool full_tensor = false) {
    if (full_tensor) throw ArgumentError("hyperfine_hamiltonian: only the axial hyperfine term is supported");
    const SpinMatrix he = build_hamiltonian(p, b, pi);
    const auto ops = spin_operators();
    const SpinMatrix id = SpinMatrix::identity(3);
    HyperfineSystem sys;
    sys.hamiltonian = kron(he, id) + p.a_hf * kron(ops.z, ops.z);
    sys.a_hf = p.a_hf;
    return sys;
}

/// One m_s=0 → m_s≈±1 transition inside a fixed m_I sector.
struct HyperfineLine {
    double frequency = 0.0;  ///< Hz
    int m_i = 0;             ///< nuclear projection, +1, 0 or -1
    int branch = 0;          ///< +1 upper, -1 lower level of the ±1 pair
    double spin_z = 0.0;     ///< <S_z> of the excited level
};

/// Nuclear m_I of basis index n (0, 1, 2 -> +1, 0, -1).
inline constexpr int m_i_of_index(int n) { return 1 - n; }

/// Electron 3×3 block of a 9×9 axial-only Hamiltonian for a fixed m_I.
inline SpinMatrix electron_block(const HyperfineSystem& sys, int m_i) {
    const int n = 1 - m_i;
    SpinMatrix blk(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) blk(i, j) = sys.hamiltonian(3 * i + n, 3 * j + n);
    return blk;
}

/// The six allowed ESR lines, ascending in frequency.
///
/// In axial-only mode H commutes with I_z, so each m_I block is
/// diagonalised separately; that keeps m_I labels exact even where lines
/// from different sectors are degenerate.
inline std::vector<HyperfineLine> hyperfine_lines(const HyperfineSystem& sys) {
    if (sys.full_tensor) throw ArgumentError("hyperfine_lines: requires axial-only hyperfine mode");
    const auto sz = spin_operators().z;
    std::vector<HyperfineLine> lines;
    lines.reserve(6);
    for (int m_i : {+1, 0, -1}) {
        const EigenSystem es = eigensolve(electron_block(sys, m_i));
        const int k0 = zero_branch_index(es);
        std::array<int, 2> ex{};
        int c = 0;
        for (int k = 0; k < 3; ++k)
            if (k != k0) ex[c++] = k;
        for (int j = 0; j < 2; ++j) {
            const Eigen::VectorXcd v = es.vector(ex[j]);
            const double spin_z = (v.adjoint() * sz.matrix() * v)(0, 0).real();
            lines.push_back({es.eigenvalues[ex[j]] - es.eigenvalues[k0], m_i, j == 1 ? +1 : -1, spin_z});
        }
    }
    std::stable_sort(lines.begin(), lines.end(),
                     [](const HyperfineLine& a, const HyperfineLine& b) { return a.frequency < b.frequency; });
    return lines;
}

inline const HyperfineLine& find_line(const std::vector<HyperfineLine>& lines, int m_i, int branch) {
    for (const auto& l : lines)
        if (l.m_i == m_i && l.branch == branch) return l;
    throw ArgumentError("find_line: no such line");
}

/// Line of sector m_i whose excited level is most |m_s = ms>-like.
inline const HyperfineLine& line_by_character(const std::vector<HyperfineLine>& lines, int m_i, int ms) {
    const HyperfineLine* best = nullptr;
    for (const auto& l : lines)
        if (l.m_i == m_i && (!best || ms * l.spin_z > ms * best->spin_z)) best = &l;
    if (!best) throw ArgumentError("line_by_character: no line in sector");
    return *best;
}

/// Signed separation of the outer lines that share the same hyperfine shift,
/// f(m_s=+1, m_I=+1) − f(m_s=−1, m_I=−1). It is odd in B_z, zero at B_z = 0
/// for any B⊥ and strain, and ≈ 2γB_z for small B⊥.
inline double outer_line_splitting(const std::vector<HyperfineLine>& lines) {
    return line_by_character(lines, +1, +1).frequency - line_by_character(lines, -1, -1).frequency;
}

/// Separation of the two central (m_I = 0) lines.
inline double central_line_splitting(const std::vector<HyperfineLine>& lines) {
    return find_line(lines, 0, +1).frequency - find_line(lines, 0, -1).frequency;
}

}  // namespace nvfield
