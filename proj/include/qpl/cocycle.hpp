#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "qpl/arithmetic.hpp"
#include "qpl/common.hpp"
#include "qpl/linalg.hpp"

namespace qpl {

class PotentialFourier;  // operators.hpp

/// Quasi-periodic cocycle (alpha, A) over the torus rotation x -> x + alpha.
struct Cocycle {
    Frequency alpha;
    std::function<Sl2Matrix(const TorusPoint&)> map;
    std::optional<double> analytic_strip;

    int dim() const { return alpha.dim(); }

    TorusPoint point(const std::vector<double>& x) const {
        TorusPoint p = TorusPoint::zero(dim());
        for (int i = 0; i < dim(); ++i) p[i] = frac(x[static_cast<size_t>(i)]);
        return p;
    }

    static Cocycle constant(const Frequency& alpha, const Sl2Matrix& a) {
        return {alpha, [a](const TorusPoint&) { return a; }, std::nullopt};
    }

    /// Schrodinger cocycle S_E^V(x) = [[E - V(x), -1], [1, 0]].
    static Cocycle schrodinger(const Frequency& alpha, const PotentialFourier& v, double energy, std::optional<double> strip = std::nullopt);
};

/// Matrix product with log-scaling against overflow: represents e^{log_scale} * m.
struct ScaledSl2 {
    Sl2Matrix m;
    double log_scale = 0;

    double log_norm() const { return log_scale + std::log(m.norm()); }
    /// Plain matrix value; overflows for log_scale beyond ~709.
    Sl2Matrix value() const { return m * std::exp(log_scale); }
};

/// n-step iterate A_n(x); n < 0 uses the inverse-product branch. Determinant
/// drift is renormalized every 32 factors.
inline ScaledSl2 iterate(const Cocycle& c, const TorusPoint& x0, long long n) {
    if (std::llabs(n) > 10'000'000LL) throw std::invalid_argument("iterate: |n| exceeds the 1e7 guard");
    ScaledSl2 acc{Sl2Matrix::identity(), 0.0};
    auto al = c.alpha.values();
    TorusPoint x = x0;
    if (n >= 0) {
        for (long long j = 0; j < n; ++j) {
            acc.m = c.map(x) * acc.m;
            if ((j & 31) == 31) {
                double s = acc.m.frobenius();
                acc.m = acc.m * (1.0 / s);
                acc.log_scale += std::log(s);
                acc.m = acc.m * std::pow(acc.m.det(), -0.5);
            }
            x = advance(x, al);
        }
    } else {
        // A_{-n}(x) = A(x-alpha)^{-1} ... A(x+n alpha)^{-1}, leftmost factor at x + n alpha
        std::vector<double> neg(al.size());
        for (size_t i = 0; i < al.size(); ++i) neg[i] = -al[i];
        TorusPoint y = x0;
        for (long long j = 0; j < -n; ++j) {
            y = advance(y, neg);
            acc.m = acc.m * c.map(y).inverse();
            if ((j & 31) == 31) {
                double s = acc.m.frobenius();
                acc.m = acc.m * (1.0 / s);
                acc.log_scale += std::log(s);
                acc.m = acc.m * std::pow(acc.m.det(), -0.5);
            }
        }
    }
    // final det cleanup (det stays positive for SL(2,R) products)
    double dt = acc.m.det();
    if (dt > 0) acc.m = acc.m * std::pow(dt, -0.5);
    return acc;
}

// ---------------------------------------------------------------------------
// Lyapunov exponent: averaged log-growth of the matrix products, with
// renormalization every 32 steps so L*n ~ 700 does not overflow.
// ---------------------------------------------------------------------------

struct LyapunovResult {
    double L = 0;
    double stderr_ = 0;
};

inline LyapunovResult lyapunov(const Cocycle& c, long long n, int x_samples, uint64_t seed, int threads = 0) {
    if (n < 1000) throw std::invalid_argument("lyapunov: n >= 1e3 required");
    if (x_samples < 1) throw std::invalid_argument("lyapunov: x_samples >= 1 required");
    auto al = c.alpha.values();
    std::vector<double> vals(static_cast<size_t>(x_samples));
    parallel_for(static_cast<size_t>(x_samples), [&](size_t s) {
        Rng rng(seed, s);
        TorusPoint x = TorusPoint::zero(c.dim());
        for (int i = 0; i < c.dim(); ++i) x[i] = rng.next_double();
        Sl2Matrix m = Sl2Matrix::identity();
        double logs = 0;
        for (long long j = 0; j < n; ++j) {
            m = c.map(x) * m;
            if ((j & 31) == 31) {
                double sc = m.frobenius();
                m = m * (1.0 / sc);
                logs += std::log(sc);
            }
            x = advance(x, al);
        }
        vals[s] = (logs + std::log(m.norm())) / static_cast<double>(n);
    }, threads);
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= x_samples;
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    double se = x_samples > 1 ? std::sqrt(var / (x_samples * (x_samples - 1.0))) : 0.0;
    return {std::max(mean, 0.0), se};
}

// ---------------------------------------------------------------------------
// Fibered rotation number via a continuous lift of the projective action.
// Each step contributes the polar rotation angle plus the (sub quarter-turn)
// symmetric-factor increment, which is a continuous per-step lift choice.
// ---------------------------------------------------------------------------

struct ProjectiveTrace {
    std::vector<double> lift_angles;  // downsampled unreduced lift values y_j
    std::vector<double> increments;   // downsampled per-step increments psi_j
    size_t stride = 1;
};

struct RotationResult {
    double rho = 0;       // in [0,1)
    double rho_raw = 0;   // unreduced Birkhoff average of the lift increments
    double err_est = 0;   // from comparing the n and n/2 partial averages (+ O(1/n))
    ProjectiveTrace trace;
};

namespace detail {

/// Winding (in half-turns) of x -> direction of A(x) e1 along coordinate axis.
/// Throws when the sampling cannot certify < 1/4-turn steps.
inline int winding_halfturns(const std::function<Sl2Matrix(const TorusPoint&)>& map, int d, int axis, int grid,
                             const TorusPoint& base) {
    double prev = 0;
    double total = 0;
    for (int i = 0; i <= grid; ++i) {
        TorusPoint x = base;
        x[axis] = frac(base[axis] + static_cast<double>(i) / grid);
        Sl2Matrix a = map(x);
        double ang = std::atan2(a.a21, a.a11) / two_pi;  // direction of A e1, in turns
        if (i == 0) { prev = ang; continue; }
        double step = wrap_half(ang - prev);
        if (std::abs(step) >= 0.245)
            throw std::runtime_error("degree: grid under-resolved (direction jumps ~1/4 turn); need at least " +
                                     std::to_string(grid * 4) + " samples per axis");
        total += step;
        prev = ang;
    }
    double ht = 2.0 * total;  // half-turns
    double r = std::round(ht);
    if (std::abs(ht - r) > 0.05)
        throw std::runtime_error("degree: winding " + std::to_string(ht) + " half-turns is not near an integer; refine the grid");
    (void)d;
    return static_cast<int>(r);
}

}  // namespace detail

/// Degree of a torus-periodic matrix map, in the R_{<n,x>/2} normal form:
/// component i is the winding of x_i -> direction of B(x) e1 in half-turns.
inline std::vector<int> degree(const std::function<Sl2Matrix(const TorusPoint&)>& map, int d, int grid = 512) {
    std::vector<int> deg(static_cast<size_t>(d));
    TorusPoint base = TorusPoint::zero(d);
    for (int i = 0; i < d; ++i) base[i] = 0.17 + 0.13 * i;  // generic base point, avoids symmetry axes
    for (int axis = 0; axis < d; ++axis) deg[static_cast<size_t>(axis)] = detail::winding_halfturns(map, d, axis, grid, base);
    return deg;
}

inline RotationResult rotation_number(const Cocycle& c, long long n, const TorusPoint& x0) {
    if (n < 2) throw std::invalid_argument("rotation_number: n >= 2 required");
    // Homotopy check: the map must have degree 0 (homotopic to the identity).
    auto deg = degree(c.map, c.dim());
    for (int v : deg)
        if (v != 0)
            throw std::runtime_error("rotation_number: map has nonzero degree; factor out the degree before averaging");

    auto al = c.alpha.values();
    TorusPoint x = x0;
    double w1 = 1.0, w2 = 0.0;  // unit direction vector
    double total = 0;
    double half_total = 0;
    size_t stride = static_cast<size_t>(std::max<long long>(1, n / 1024));
    ProjectiveTrace trace;
    trace.stride = stride;
    for (long long j = 0; j < n; ++j) {
        Sl2Matrix a = c.map(x);
        PolarParts pp = polar_parts(a);
        double pv1 = w1, pv2 = w2;
        pp.p.apply(pv1, pv2);
        double inc_p = wrap_half((std::atan2(pv2, pv1) - std::atan2(w2, w1)) / two_pi);
        double psi = pp.phi_turns + inc_p;
        total += psi;
        if (j < n / 2) half_total += psi;
        a.apply(w1, w2);
        double nn = std::hypot(w1, w2);
        w1 /= nn;
        w2 /= nn;
        if (static_cast<size_t>(j) % stride == 0) {
            trace.lift_angles.push_back(total);
            trace.increments.push_back(psi);
        }
        x = advance(x, al);
    }
    RotationResult res;
    res.rho_raw = total / static_cast<double>(n);
    res.rho = frac(res.rho_raw);
    double rho_half = frac(half_total / static_cast<double>(n / 2));
    res.err_est = std::abs(wrap_half(res.rho - rho_half)) + 1.0 / static_cast<double>(n);
    res.trace = std::move(trace);
    return res;
}

/// Rotation number reported in the Schrodinger convention [0, 1/2].
inline double fold_rho(double rho) {
    double r = frac(rho);
    return r <= 0.5 ? r : 1.0 - r;
}

// ---------------------------------------------------------------------------
// Uniform hyperbolicity test: positive minimal finite-size exponent plus
// convergence of the most-expanded singular direction. Marginal rates give an
// explicit `inconclusive` instead of a bool.
// ---------------------------------------------------------------------------

enum class UhStatus { hyperbolic, not_hyperbolic, inconclusive };

struct UhResult {
    UhStatus status = UhStatus::inconclusive;
    double rate = 0;
    double stderr_ = 0;
};

inline UhResult uh_test(const Cocycle& c, long long n, int x_samples, uint64_t seed = 7, int threads = 0) {
    if (n < 1000) throw std::invalid_argument("uh_test: n >= 1e3 required");
    auto al = c.alpha.values();
    std::vector<double> rates(static_cast<size_t>(x_samples));
    std::vector<double> dir_drift(static_cast<size_t>(x_samples));
    parallel_for(static_cast<size_t>(x_samples), [&](size_t s) {
        Rng rng(seed, s);
        TorusPoint x0 = TorusPoint::zero(c.dim());
        for (int i = 0; i < c.dim(); ++i) x0[i] = rng.next_double();
        ScaledSl2 half = iterate(c, x0, n / 2);
        TorusPoint xm = x0;
        for (long long j = 0; j < n / 2; ++j) xm = advance(xm, al);
        ScaledSl2 rest = iterate(c, xm, n - n / 2);
        ScaledSl2 full{rest.m * half.m, rest.log_scale + half.log_scale};
        rates[s] = full.log_norm() / static_cast<double>(n);
        // most-expanded input direction of the product vs the half product (cone convergence)
        auto top_dir = [](const Sl2Matrix& m) {
            // right singular vector of the largest singular value: eigenvector of M^T M
            double a = m.a11 * m.a11 + m.a21 * m.a21, b = m.a11 * m.a12 + m.a21 * m.a22,
                   d0 = m.a12 * m.a12 + m.a22 * m.a22;
            double lam = 0.5 * (a + d0 + std::sqrt((a - d0) * (a - d0) + 4 * b * b));
            double v1 = b, v2 = lam - a;
            if (std::abs(v1) + std::abs(v2) < 1e-300) { v1 = 1; v2 = 0; }
            return std::atan2(v2, v1);
        };
        double ang_full = top_dir(full.m), ang_half = top_dir(half.m);
        double dd = std::abs(wrap_half((ang_full - ang_half) / 3.14159265358979323846));
        dir_drift[s] = dd;  // in half-turn units (directions are mod pi)
    }, threads);
    double min_rate = rates[0], mean = 0;
    for (double r : rates) { min_rate = std::min(min_rate, r); mean += r; }
    mean /= x_samples;
    double var = 0;
    for (double r : rates) var += (r - mean) * (r - mean);
    double se = x_samples > 1 ? std::sqrt(var / (x_samples * (x_samples - 1.0))) : 1.0 / n;
    double max_drift = 0;
    for (double d0 : dir_drift) max_drift = std::max(max_drift, d0);

    UhResult res;
    res.rate = min_rate;
    res.stderr_ = se;
    double floor_rate = std::max(10.0 * se, 10.0 * std::log(static_cast<double>(n)) / n);
    if (min_rate > floor_rate && max_drift < 0.02) res.status = UhStatus::hyperbolic;
    else if (min_rate < floor_rate) res.status = UhStatus::not_hyperbolic;
    else res.status = UhStatus::inconclusive;
    return res;
}

/// Conjugated cocycle x -> B(x+alpha)^{-1} A(x) B(x). B must be invertible on
/// the evaluation grid; singular samples raise with the location.
inline Cocycle conjugate(const Cocycle& c, const std::function<Sl2Matrix(const TorusPoint&)>& b) {
    auto al = c.alpha.values();
    auto inner_map = c.map;
    int d = c.dim();
    auto mapped = [al, inner_map, b, d](const TorusPoint& x) {
        TorusPoint xa = advance(x, al);
        Sl2Matrix bx = b(x);
        if (std::abs(bx.det()) < 1e-12)
            throw std::runtime_error("conjugate: B singular at sample (x1 = " + std::to_string(x[0]) + ")");
        return b(xa).inverse() * inner_map(x) * bx;
    };
    return {c.alpha, mapped, c.analytic_strip};
}

}  // namespace qpl
