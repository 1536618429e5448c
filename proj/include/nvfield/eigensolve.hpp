#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "nvfield/error.hpp"
#include "nvfield/spin_matrix.hpp"

namespace nvfield {

/// Spectral decomposition H = V·diag(λ)·V†, eigenvalues ascending.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;  // column k belongs to eigenvalues[k]

    int dim() const noexcept { return static_cast<int>(eigenvalues.size()); }
    Eigen::VectorXcd vector(int k) const { return eigenvectors.col(k); }
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXcd& a) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Cyclic complex Jacobi diagonalisation of a Hermitian matrix.
///
/// Each rotation first removes the phase of a(p,q) and then applies a real
/// Givens rotation, so eigenvalues carry an absolute error of order
/// eps·‖H‖ even when levels are nearly degenerate. The sweep order is fixed,
/// which makes the result bit-reproducible for identical input.
///
/// Throws ArgumentError if H deviates from Hermitian by more than
/// 1e-12·‖H‖.
inline EigenSystem eigensolve(const SpinMatrix& h) {
    if (!h.is_hermitian(1e-12)) throw ArgumentError("eigensolve: matrix is not Hermitian");

    const int n = h.dim();
    Eigen::MatrixXcd a = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
    const double scale = a.norm();

    for (int sweep = 0; sweep < 64; ++sweep) {
        if (detail::off_diagonal_norm(a) <= 1e-17 * scale) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const cplx phase = apq / mag;  // e^{iφ}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Smaller root of tan 2θ = 2|a_pq| / (a_pp - a_qq), |θ| <= π/4.
                const double zeta = (app - aqq) / (2.0 * mag);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(zeta, 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J acts on columns p, q:  J = diag(1, e^{-iφ}) · [[c, -s], [s, c]]
                const cplx jpp = c, jpq = -s;
                const cplx jqp = s * std::conj(phase), jqq = c * std::conj(phase);

                for (int k = 0; k < n; ++k) {  // A <- A J
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (int k = 0; k < n; ++k) {  // A <- J† A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (int k = 0; k < n; ++k) {  // V <- V J
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int l, int r) { return a(l, l).real() < a(r, r).real(); });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        Eigen::VectorXcd col = v.col(order[k]);
        // Fix the global phase: largest component real and positive.
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(col[i]) > std::abs(col[imax]) * (1.0 + 1e-12)) imax = i;
        const cplx ph = col[imax] / std::abs(col[imax]);
        out.eigenvectors.col(k) = col * std::conj(ph);
    }
    return out;
}

}  // namespace nvfield
