#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpl {

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver: Householder reduction to tridiagonal form with
// accumulated transforms, then implicit-shift QL on the tridiagonal part.
// Eigenvalues come out ascending, eigenvectors as columns of z (row-major
// z[i*n+j] = component i of eigenvector j).
// ---------------------------------------------------------------------------

namespace eigsym {

/// Householder reduction (tred2). a is n x n row-major symmetric, overwritten
/// with the accumulated orthogonal transform; d gets the diagonal, e the
/// subdiagonal (e[0] unused).
inline void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
    d.assign(static_cast<size_t>(n), 0.0);
    e.assign(static_cast<size_t>(n), 0.0);
    auto at = [&a, n](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int i = n - 1; i >= 1; --i) {
        int l = i - 1;
        double h = 0, scale = 0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[static_cast<size_t>(i)] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0) ? -std::sqrt(h) : std::sqrt(h);
                e[static_cast<size_t>(i)] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0;
                for (int j = 0; j <= l; ++j) {
                    at(j, i) = at(i, j) / h;
                    g = 0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[static_cast<size_t>(j)] = g / h;
                    f += e[static_cast<size_t>(j)] * at(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[static_cast<size_t>(j)] = g = e[static_cast<size_t>(j)] - hh * f;
                    for (int k = 0; k <= j; ++k) at(j, k) -= f * e[static_cast<size_t>(k)] + g * at(i, k);
                }
            }
        } else {
            e[static_cast<size_t>(i)] = at(i, l);
        }
        d[static_cast<size_t>(i)] = h;
    }
    d[0] = 0;
    e[0] = 0;
    for (int i = 0; i < n; ++i) {
        int l = i - 1;
        if (d[static_cast<size_t>(i)] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0;
                for (int k = 0; k <= l; ++k) g += at(i, k) * at(k, j);
                for (int k = 0; k <= l; ++k) at(k, j) -= g * at(k, i);
            }
        }
        d[static_cast<size_t>(i)] = at(i, i);
        at(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) at(j, i) = at(i, j) = 0.0;
    }
}

/// Implicit-shift QL with eigenvector accumulation (tql2). d: diagonal,
/// e: subdiagonal in e[1..n-1]; z: row-major transform to update in place.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
    auto zt = [&z, n](int i, int j) -> double& { return z[static_cast<size_t>(i) * n + j]; };
    for (int i = 1; i < n; ++i) e[static_cast<size_t>(i - 1)] = e[static_cast<size_t>(i)];
    e[static_cast<size_t>(n - 1)] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[static_cast<size_t>(m)]) + std::abs(d[static_cast<size_t>(m + 1)]);
                if (std::abs(e[static_cast<size_t>(m)]) <= 1e-16 * dd + 1e-300) break;
            }
            if (m != l) {
                if (++iter == 50)
                    throw std::runtime_error("eigensolve: QL failed to converge after 50 sweeps at row " + std::to_string(l));
                double g = (d[static_cast<size_t>(l + 1)] - d[static_cast<size_t>(l)]) / (2.0 * e[static_cast<size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
                    e[static_cast<size_t>(l)] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[static_cast<size_t>(i)];
                    double b = c * e[static_cast<size_t>(i)];
                    r = std::hypot(f, g);
                    e[static_cast<size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<size_t>(i + 1)] -= p;
                        e[static_cast<size_t>(m)] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<size_t>(i + 1)] - p;
                    r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<size_t>(i + 1)] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = zt(k, i + 1);
                        zt(k, i + 1) = s * zt(k, i) + c * f;
                        zt(k, i) = c * zt(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[static_cast<size_t>(l)] -= p;
                e[static_cast<size_t>(l)] = g;
                e[static_cast<size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
    // ascending sort, carrying eigenvector columns
    for (int i = 0; i < n - 1; ++i) {
        int kmin = i;
        for (int j = i + 1; j < n; ++j)
            if (d[static_cast<size_t>(j)] < d[static_cast<size_t>(kmin)]) kmin = j;
        if (kmin != i) {
            std::swap(d[static_cast<size_t>(i)], d[static_cast<size_t>(kmin)]);
            for (int k = 0; k < n; ++k) std::swap(zt(k, i), zt(k, kmin));
        }
    }
}

}  // namespace eigsym

/// Full eigendecomposition of a dense symmetric matrix (row-major).
/// Returns eigenvalues ascending; vectors holds eigenvector j in column j.
inline void eigensolve_symmetric(std::vector<double> a, int n, std::vector<double>& values, std::vector<double>& vectors) {
    std::vector<double> d, e;
    eigsym::tridiagonalize(a, n, d, e);
    eigsym::ql_implicit(d, e, a, n);
    values = std::move(d);
    vectors = std::move(a);
}

/// Eigendecomposition of a symmetric tridiagonal matrix (diag, offdiag of
/// length n-1). Skips the Householder stage.
inline void eigensolve_tridiagonal(std::vector<double> diag, std::vector<double> off, std::vector<double>& values,
                                   std::vector<double>& vectors) {
    int n = static_cast<int>(diag.size());
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    for (int i = 1; i < n; ++i) e[static_cast<size_t>(i)] = off[static_cast<size_t>(i - 1)];
    std::vector<double> z(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<size_t>(i) * n + i] = 1.0;
    eigsym::ql_implicit(diag, e, z, n);
    values = std::move(diag);
    vectors = std::move(z);
}

/// Sturm count: number of eigenvalues of the tridiagonal matrix strictly
/// below x, via the LDL^T sign recurrence. O(n), no vectors.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    int n = static_cast<int>(diag.size());
    int count = 0;
    double q = diag[0] - x;
    if (q < 0) ++count;
    for (int i = 1; i < n; ++i) {
        double oc = off[static_cast<size_t>(i - 1)];
        if (q == 0.0) q = 1e-300;
        q = (diag[static_cast<size_t>(i)] - x) - oc * oc / q;
        if (q < 0) ++count;
    }
    return count;
}

}  // namespace qpl
