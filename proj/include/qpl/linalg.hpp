#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "qpl/common.hpp"

namespace qpl {

using cplx = std::complex<double>;

/// Real 2x2 matrix. Products of cocycle matrices are renormalized against
/// determinant drift, so |det - 1| stays below 1e-10 in all pipelines.
struct Sl2Matrix {
    double a11 = 1, a12 = 0, a21 = 0, a22 = 1;

    static Sl2Matrix identity() { return {}; }

    Sl2Matrix operator*(const Sl2Matrix& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Sl2Matrix operator+(const Sl2Matrix& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Sl2Matrix operator-(const Sl2Matrix& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Sl2Matrix operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }

    /// Inverse via adjugate; requires det bounded away from zero.
    Sl2Matrix inverse() const {
        double dt = det();
        if (std::abs(dt) < 1e-300) throw std::runtime_error("Sl2Matrix::inverse: singular matrix");
        double inv = 1.0 / dt;
        return {a22 * inv, -a12 * inv, -a21 * inv, a11 * inv};
    }

    double frobenius() const { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }

    /// Spectral norm from the closed-form 2x2 singular values.
    double norm() const {
        double f2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        double dt = det();
        double disc = f2 * f2 - 4.0 * dt * dt;
        if (disc < 0) disc = 0;
        return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
    }

    /// Rescale so det becomes exactly +1 (requires det > 0).
    Sl2Matrix unit_det() const {
        double dt = det();
        if (dt <= 0) throw std::runtime_error("Sl2Matrix::unit_det: nonpositive determinant " + std::to_string(dt));
        double s = 1.0 / std::sqrt(dt);
        return {a11 * s, a12 * s, a21 * s, a22 * s};
    }

    void apply(double& v1, double& v2) const {
        double w1 = a11 * v1 + a12 * v2;
        double w2 = a21 * v1 + a22 * v2;
        v1 = w1;
        v2 = w2;
    }
};

inline Sl2Matrix operator*(double s, const Sl2Matrix& m) { return m * s; }

/// Rotation by the angle 2*pi*theta (theta in turns).
inline Sl2Matrix rotation(double theta) {
    double c = std::cos(two_pi * theta), s = std::sin(two_pi * theta);
    return {c, -s, s, c};
}

/// Complex 2x2 matrix.
struct Mat2c {
    cplx a11{1, 0}, a12{0, 0}, a21{0, 0}, a22{1, 0};

    static Mat2c identity() { return {}; }
    static Mat2c from_real(const Sl2Matrix& m) { return {m.a11, m.a12, m.a21, m.a22}; }
    static Mat2c diag(cplx u, cplx v) { return {u, 0, 0, v}; }

    Mat2c operator*(const Mat2c& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2c operator+(const Mat2c& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2c operator-(const Mat2c& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2c operator*(cplx s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    cplx det() const { return a11 * a22 - a12 * a21; }
    cplx trace() const { return a11 + a22; }

    Mat2c inverse() const {
        cplx dt = det();
        if (std::abs(dt) < 1e-300) throw std::runtime_error("Mat2c::inverse: singular matrix");
        cplx inv = 1.0 / dt;
        return {a22 * inv, -a12 * inv, -a21 * inv, a11 * inv};
    }

    double frobenius() const {
        return std::sqrt(std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22));
    }

    /// Spectral norm (largest singular value) of a complex 2x2 matrix.
    double norm() const {
        double f2 = std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22);
        double dt = std::norm(det());
        double disc = f2 * f2 - 4.0 * dt;
        if (disc < 0) disc = 0;
        return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
    }

    Sl2Matrix real_part() const { return {a11.real(), a12.real(), a21.real(), a22.real()}; }
    double max_imag() const {
        return std::max(std::max(std::abs(a11.imag()), std::abs(a12.imag())),
                        std::max(std::abs(a21.imag()), std::abs(a22.imag())));
    }
};

inline Mat2c operator*(cplx s, const Mat2c& m) { return m * s; }

// ---------------------------------------------------------------------------
// sl(2,R) exponential and logarithm in closed form (Rodrigues type). For a
// traceless Y, Y^2 = -det(Y) * I, so the exponential splits into elliptic
// (det Y > 0), hyperbolic (det Y < 0) and parabolic branches.
// ---------------------------------------------------------------------------

inline Sl2Matrix expm_sl2(const Sl2Matrix& y) {
    double q = y.det();
    Sl2Matrix id = Sl2Matrix::identity();
    if (q > 1e-24) {
        double w = std::sqrt(q);
        double sc = (w < 1e-4) ? 1.0 - w * w / 6.0 : std::sin(w) / w;
        return id * std::cos(w) + y * sc;
    }
    if (q < -1e-24) {
        double w = std::sqrt(-q);
        double sc = (w < 1e-4) ? 1.0 + w * w / 6.0 : std::sinh(w) / w;
        return id * std::cosh(w) + y * sc;
    }
    // parabolic: Y^2 ~ 0
    return id + y + y * y * 0.5;
}

/// Principal logarithm of a unimodular matrix close to a rotation or to the
/// identity. Throws for trace <= -2 + eps (no real sl(2) logarithm there).
inline Sl2Matrix logm_sl2(const Sl2Matrix& g) {
    double t = 0.5 * g.trace();
    Sl2Matrix id = Sl2Matrix::identity();
    if (t <= -1.0 + 1e-12)
        throw std::runtime_error("logm_sl2: trace " + std::to_string(2 * t) + " out of the principal branch");
    if (t < 1.0 - 1e-12) {
        double w = std::acos(t);
        return (g - id * t) * (w / std::sin(w));
    }
    double th = std::min(t, 1.0);
    double w = std::acosh(std::max(th, 1.0));
    double sc = (w < 1e-6) ? 1.0 : w / std::sinh(w);
    return (g - id * t) * sc;
}

// ---------------------------------------------------------------------------
// sl(2,R) <-> su(1,1) change of coordinates, A -> M A M^{-1} with
// M = (1/2i) [[1, -i], [1, i]].  An sl(2,R) element written as
// [[x, y+z], [y-z, -x]] maps to [[iz, x-iy], [x+iy, -iz]].
// ---------------------------------------------------------------------------

inline Mat2c su11_M() {
    cplx h = cplx(0, -0.5);  // 1/(2i)
    return {h * cplx(1, 0), h * cplx(0, -1), h * cplx(1, 0), h * cplx(0, 1)};
}

inline Mat2c su11_M_inv() {
    // [[i, i], [-1, 1]]
    return {cplx(0, 1), cplx(0, 1), cplx(-1, 0), cplx(1, 0)};
}

inline Mat2c to_su11(const Mat2c& a) { return su11_M() * a * su11_M_inv(); }
inline Mat2c to_su11(const Sl2Matrix& a) { return to_su11(Mat2c::from_real(a)); }
inline Mat2c from_su11(const Mat2c& a) { return su11_M_inv() * a * su11_M(); }

// ---------------------------------------------------------------------------
// Polar data of a real 2x2 matrix with positive determinant: A = R_phi * P
// with P symmetric positive definite. P moves directions by less than a
// quarter turn, so phi plus the wrapped P-increment is a continuous lift of
// the projective action. Used by the rotation-number tracker.
// ---------------------------------------------------------------------------

struct PolarParts {
    double phi_turns;  // rotation angle of the orthogonal factor, in (-1/2, 1/2]
    Sl2Matrix p;       // symmetric positive definite factor
};

inline PolarParts polar_parts(const Sl2Matrix& a_in) {
    Sl2Matrix a = a_in;
    double dt = a.det();
    if (dt <= 0) throw std::runtime_error("polar_parts: determinant must be positive");
    a = a.unit_det();
    // For det A = 1: sqrt(A^T A) = (A^T A + I)/sqrt(tr(A^T A) + 2).
    Sl2Matrix ata{a.a11 * a.a11 + a.a21 * a.a21, a.a11 * a.a12 + a.a21 * a.a22,
                  a.a12 * a.a11 + a.a22 * a.a21, a.a12 * a.a12 + a.a22 * a.a22};
    double s = std::sqrt(ata.trace() + 2.0);
    Sl2Matrix p = (ata + Sl2Matrix::identity()) * (1.0 / s);
    Sl2Matrix r = a * p.inverse();
    double phi = std::atan2(r.a21, r.a11) / two_pi;
    return {phi, p};
}

/// Rotation number of a constant elliptic matrix, in (0,1): the angle rho
/// with C conjugate to R_rho by an orientation-preserving map. Requires
/// |trace| < 2.
inline double constant_rotation(const Sl2Matrix& c) {
    double t = 0.5 * c.trace();
    if (std::abs(t) >= 1.0)
        throw std::runtime_error("constant_rotation: matrix is not elliptic (|trace|/2 = " + std::to_string(std::abs(t)) + ")");
    double rho = std::acos(t) / two_pi;  // in (0, 1/2)
    if (c.a21 - c.a12 < 0) rho = 1.0 - rho;
    return rho;
}

inline bool is_elliptic(const Sl2Matrix& c) { return std::abs(c.trace()) < 2.0; }

}  // namespace qpl
