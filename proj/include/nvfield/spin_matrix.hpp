#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "nvfield/error.hpp"

// Basis ordering for every electron-spin matrix in the library:
//   index 0 -> |m_s=+1>, index 1 -> |m_s=0>, index 2 -> |m_s=-1>.
// Electron ⊗ 14N nuclear products use index 3*e + n with the same ordering
// for the nuclear m_I.

namespace nvfield {

using cplx = std::complex<double>;

/// Square complex matrix of dimension 3 (electron) or 9 (electron ⊗ 14N).
/// Entries of Hamiltonians are in Hz.
class SpinMatrix {
public:
    using Storage = Eigen::MatrixXcd;

    explicit SpinMatrix(int dim = 3) : m_(Storage::Zero(check_dim(dim), dim)) {}
    explicit SpinMatrix(Storage m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw ArgumentError("SpinMatrix: matrix must be square");
        check_dim(static_cast<int>(m_.rows()));
    }

    static SpinMatrix identity(int dim) { return SpinMatrix(Storage::Identity(dim, dim)); }

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Storage& matrix() const noexcept { return m_; }

    cplx operator()(int i, int j) const { return m_(i, j); }
    cplx& operator()(int i, int j) { return m_(i, j); }

    SpinMatrix adjoint() const { return SpinMatrix(m_.adjoint().eval()); }
    cplx trace() const { return m_.trace(); }
    double norm() const { return m_.norm(); }  // Frobenius

    /// True when ‖H − H†‖ ≤ rel_tol·‖H‖ (or the matrix is zero).
    bool is_hermitian(double rel_tol = 1e-12) const {
        const double scale = m_.norm();
        return (m_ - m_.adjoint()).norm() <= rel_tol * (scale > 0.0 ? scale : 1.0);
    }

    SpinMatrix& operator+=(const SpinMatrix& o) { m_ += o.m_; return *this; }
    SpinMatrix& operator-=(const SpinMatrix& o) { m_ -= o.m_; return *this; }
    SpinMatrix& operator*=(cplx s) { m_ *= s; return *this; }

    friend SpinMatrix operator+(SpinMatrix a, const SpinMatrix& b) { return a += b; }
    friend SpinMatrix operator-(SpinMatrix a, const SpinMatrix& b) { return a -= b; }
    friend SpinMatrix operator*(SpinMatrix a, cplx s) { return a *= s; }
    friend SpinMatrix operator*(cplx s, SpinMatrix a) { return a *= s; }
    friend SpinMatrix operator*(double s, SpinMatrix a) { return a *= cplx(s, 0.0); }
    friend SpinMatrix operator*(const SpinMatrix& a, const SpinMatrix& b) {
        return SpinMatrix((a.m_ * b.m_).eval());
    }

private:
    static int check_dim(int dim) {
        if (dim != 3 && dim != 9) throw ArgumentError("SpinMatrix: dimension must be 3 or 9");
        return dim;
    }

    Storage m_;
};

/// Kronecker product of two 3×3 operators (electron ⊗ nuclear).
inline SpinMatrix kron(const SpinMatrix& a, const SpinMatrix& b) {
    if (a.dim() != 3 || b.dim() != 3) throw ArgumentError("kron: both factors must be 3x3");
    Eigen::MatrixXcd out(9, 9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.block(3 * i, 3 * j, 3, 3) = a(i, j) * b.matrix();
    return SpinMatrix(std::move(out));
}

struct SpinOperators {
    SpinMatrix x, y, z;
};

/// Standard S=1 matrices in the {|+1>, |0>, |-1>} basis.
inline SpinOperators spin_operators() {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    SpinMatrix sx, sy, sz;
    sx(0, 1) = sx(1, 0) = sx(1, 2) = sx(2, 1) = r;
    sy(0, 1) = -i * r;
    sy(1, 0) = i * r;
    sy(1, 2) = -i * r;
    sy(2, 1) = i * r;
    sz(0, 0) = 1.0;
    sz(2, 2) = -1.0;
    return {sx, sy, sz};
}

}  // namespace nvfield
