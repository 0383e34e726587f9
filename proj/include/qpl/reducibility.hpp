#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qpl/cocycle.hpp"
#include "qpl/common.hpp"
#include "qpl/fourier.hpp"
#include "qpl/linalg.hpp"

namespace qpl {

// ---------------------------------------------------------------------------
// Truncated matrix-valued Fourier series B(x) = sum_k Bhat(k) e^{2 pi i <k,x>}
// with conjugate-symmetric coefficients (real-valued map), the output of a
// reduction. `strip` is the certified analyticity width: the stored
// coefficients satisfy |Bhat(k)| <= C e^{-2 pi strip |k|}.
// ---------------------------------------------------------------------------

struct FourierConjugation {
    IndexBox box;
    std::vector<Mat2c> coef;
    std::vector<int> degree;
    double strip = 0;

    int dim() const { return box.dim(); }

    Sl2Matrix eval(const std::vector<double>& x) const {
        Mat2c v = eval_field(coef, box, x);
        return v.real_part();
    }
    std::function<Sl2Matrix(const TorusPoint&)> evaluator() const {
        auto self = *this;
        return [self](const TorusPoint& p) {
            std::vector<double> x(static_cast<size_t>(self.dim()));
            for (int i = 0; i < self.dim(); ++i) x[static_cast<size_t>(i)] = p[i];
            return self.eval(x);
        };
    }

    /// Least-squares decay rate of ln sup_{|k|=s} |Bhat(k)| over outer shells,
    /// reported as a strip width (rate / 2 pi).
    double fitted_strip(int from_shell = -1) const {
        int k_max = 0;
        for (int r : box.radius) k_max = std::max(k_max, r);
        if (from_shell < 0) from_shell = k_max / 2;
        std::vector<double> shell_max(static_cast<size_t>(k_max) + 1, 0.0);
        for (size_t i = 0; i < coef.size(); ++i) {
            int s = sup_norm(box.unflatten(i));
            shell_max[static_cast<size_t>(s)] = std::max(shell_max[static_cast<size_t>(s)], coef[i].norm());
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int s = from_shell; s <= k_max; ++s) {
            double v = shell_max[static_cast<size_t>(s)];
            if (v < 1e-14) continue;
            double lx = s, ly = std::log(v);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++cnt;
        }
        if (cnt < 3) return 0;
        double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        return std::max(0.0, -slope / two_pi);
    }
};

// ---------------------------------------------------------------------------
// Solver configuration. The admissibility constants of the underlying
// theorems are nonconstructive; the engine runs the empirical trial and
// certifies by residual plus the quadratic-slope check.
// ---------------------------------------------------------------------------

struct KamConfig {
    int fourier_cutoff = 0;    // initial cutoff; 0 = choose by dimension
    int cutoff_max = 0;        // cap; 0 = grid/4
    int grid = 0;              // samples per axis; 0 = choose by dimension
    double divisor_floor = 1e-8;
    double tol_residual = 1e-12;
    int max_iters = 20;
    double strip_h0 = 0.5;     // initial strip
    double strip_htilde = 0.25;  // target strip; cutoffs grow like h0/h_j

    void resolve(int d) {
        if (grid == 0) grid = d == 1 ? 256 : (d == 2 ? 64 : 24);
        if (cutoff_max == 0) cutoff_max = grid / 4;
        if (fourier_cutoff == 0) fourier_cutoff = std::max(4, cutoff_max / 3);
        if (!(strip_h0 > strip_htilde && strip_htilde > 0))
            throw std::invalid_argument("kam config: need h0 > htilde > 0");
        if (!(divisor_floor > 0)) throw std::invalid_argument("kam config: divisor_floor > 0 required");
    }
};

struct ResonantMode {
    std::vector<int> k;
    double divisor = 0;
    int component = 0;  // 0: diagonal, 1: (1,2), 2: (2,1)
};

enum class ResonanceAction { none, mode_skipped, aborted };

struct ResonanceReport {
    std::vector<ResonantMode> resonant_modes;
    ResonanceAction action = ResonanceAction::none;
};

// ---------------------------------------------------------------------------
// su(1,1) frame of a real elliptic constant: Q in SU(1,1) with
// Q^{-1} (M C M^{-1}) Q = diag(lambda, conj lambda). rho_frame = arg(lambda)/2pi.
// ---------------------------------------------------------------------------

struct Su11Frame {
    Mat2c q = Mat2c::identity();
    double rho_frame = 0;
};

inline Su11Frame su11_frame(const Sl2Matrix& c) {
    if (!is_elliptic(c)) throw std::runtime_error("su11_frame: constant is not elliptic");
    Mat2c cs = to_su11(c);
    cplx u = cs.a11, v = cs.a12;
    Su11Frame fr;
    if (std::abs(v) < 1e-15) {
        fr.rho_frame = std::arg(u) / two_pi;
        return fr;
    }
    double s = std::sqrt(std::max(0.0, 1.0 - u.real() * u.real()));
    if (u.imag() < 0) s = -s;
    cplx lam(u.real(), s);
    cplx x1 = v, x2 = lam - u;
    double c2 = std::norm(x1) - std::norm(x2);
    if (c2 <= 0) throw std::runtime_error("su11_frame: degenerate eigenvector normalization");
    double inv = 1.0 / std::sqrt(c2);
    fr.q = Mat2c{x1 * inv, std::conj(x2) * inv, x2 * inv, std::conj(x1) * inv};
    fr.rho_frame = std::arg(lam) / two_pi;
    return fr;
}

// ---------------------------------------------------------------------------
// Cohomological equation. Returns Y (real sl(2,R)-valued coefficients on the
// same box as f) with
//     Y(x+alpha) A0 - A0 Y(x) + A0 f_solved(x) = 0
// where f_solved drops the k = 0 diagonal part and every mode whose small
// divisor falls below the floor. In the diagonalized su(1,1) frame the
// divisors are e^{2 pi i <k,alpha>} - 1 on the diagonal and
// e^{2 pi i (<k,alpha> -+ 2 rho)} - 1 off it.
// ---------------------------------------------------------------------------

struct CohomologicalSolution {
    std::vector<Mat2c> y;        // sl(2,R)-valued coefficients (conjugate symmetric)
    std::vector<Mat2c> f_solved; // the part of f actually matched
    ResonanceReport report;
};

inline CohomologicalSolution cohomological_solve(const Sl2Matrix& a0, const std::vector<Mat2c>& fhat,
                                                 const IndexBox& box, const std::vector<double>& alpha,
                                                 double divisor_floor) {
    if (!is_elliptic(a0))
        throw std::invalid_argument("cohomological_solve: constant must be elliptic (|trace| < 2)");
    Su11Frame fr = su11_frame(a0);
    double rho = fr.rho_frame;
    // k = 0 off-diagonal divisor vanishes iff 2 rho is in the frequency module; abort early.
    {
        double d0 = std::abs(std::polar(1.0, -two_pi * 2.0 * rho) - 1.0);
        if (d0 < divisor_floor) {
            CohomologicalSolution out;
            out.report.action = ResonanceAction::aborted;
            out.report.resonant_modes.push_back({std::vector<int>(alpha.size(), 0), d0, 1});
            return out;
        }
    }
    Mat2c m = su11_M(), mi = su11_M_inv();
    Mat2c t = fr.q.inverse() * m;       // frame map: g = T f T^{-1}
    Mat2c ti = mi * fr.q;
    CohomologicalSolution out;
    out.y.assign(fhat.size(), Mat2c{} * cplx(0, 0));
    out.f_solved.assign(fhat.size(), Mat2c{} * cplx(0, 0));
    for (size_t i = 0; i < fhat.size(); ++i) {
        auto k = box.unflatten(i);
        double ka = dot(k, alpha);
        bool zero_mode = sup_norm(k) == 0;
        Mat2c g = t * fhat[i] * ti;
        cplx d_diag = std::polar(1.0, two_pi * ka) - 1.0;
        cplx d_12 = std::polar(1.0, two_pi * (ka - 2.0 * rho)) - 1.0;
        cplx d_21 = std::polar(1.0, two_pi * (ka + 2.0 * rho)) - 1.0;
        Mat2c w{0, 0, 0, 0};
        Mat2c gs{0, 0, 0, 0};
        if (!zero_mode) {
            if (std::abs(d_diag) >= divisor_floor) {
                w.a11 = -g.a11 / d_diag;
                w.a22 = -g.a22 / d_diag;
                gs.a11 = g.a11;
                gs.a22 = g.a22;
            } else if (std::abs(g.a11) + std::abs(g.a22) > 0) {
                out.report.resonant_modes.push_back({k, std::abs(d_diag), 0});
            }
        }
        if (std::abs(d_12) >= divisor_floor) {
            w.a12 = -g.a12 / d_12;
            gs.a12 = g.a12;
        } else if (std::abs(g.a12) > 0) {
            out.report.resonant_modes.push_back({k, std::abs(d_12), 1});
        }
        if (std::abs(d_21) >= divisor_floor) {
            w.a21 = -g.a21 / d_21;
            gs.a21 = g.a21;
        } else if (std::abs(g.a21) > 0) {
            out.report.resonant_modes.push_back({k, std::abs(d_21), 2});
        }
        out.y[i] = ti * w * t;
        out.f_solved[i] = ti * gs * t;
    }
    if (!out.report.resonant_modes.empty()) out.report.action = ResonanceAction::mode_skipped;
    return out;
}

// ---------------------------------------------------------------------------
// Newton iteration reducing a near-constant cocycle: solve the linearized
// equation, conjugate by exp(-Y), recompute the error from the exact cocycle
// on the grid. Convergence is certified by the residual and by the
// quadratic-slope check on the residual history.
// ---------------------------------------------------------------------------

enum class KamStatus { converged, resonance_abort, no_convergence, not_elliptic };

struct KamResult {
    KamStatus status = KamStatus::no_convergence;
    FourierConjugation b;
    Sl2Matrix a;              // constant part
    double rho_a = 0;         // rotation number of the constant (orientation-corrected)
    double residual = 0;      // sup-norm conjugation residual on the solver grid
    int iterations = 0;
    std::vector<double> residual_history;
    double quadratic_slope = 0;  // min ln r_{j+1} / ln r_j over the converging window
    ResonanceReport report;

    bool ok() const { return status == KamStatus::converged; }
};

namespace detail {

inline double quadratic_slope_from(const std::vector<double>& hist) {
    double best = 10.0;
    bool found = false;
    for (size_t j = 0; j + 1 < hist.size(); ++j) {
        double r0 = hist[j], r1 = hist[j + 1];
        if (r0 < 1e-3 && r0 > 0 && r1 > 1e-14 && r1 < r0) {
            best = std::min(best, std::log(r1) / std::log(r0));
            found = true;
        }
    }
    return found ? best : 0.0;
}

}  // namespace detail

inline KamResult kam_reduce(const Cocycle& cocycle, KamConfig cfg) {
    int d = cocycle.dim();
    cfg.resolve(d);
    int g = cfg.grid;
    auto al = cocycle.alpha.values();
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<size_t>(g);

    // sample the cocycle and initialize both conjugation grids (at x and x+alpha)
    std::vector<Sl2Matrix> sg(total), bg(total, Sl2Matrix::identity()), bsh(total, Sl2Matrix::identity());
    IndexBox grid_box{std::vector<int>(static_cast<size_t>(d), 0)};  // only for index decoding below
    std::vector<int> shape(static_cast<size_t>(d), g);
    auto grid_point = [&](size_t idx) {
        TorusPoint p = TorusPoint::zero(d);
        for (int i = d - 1; i >= 0; --i) {
            p[i] = static_cast<double>(idx % static_cast<size_t>(g)) / g;
            idx /= static_cast<size_t>(g);
        }
        return p;
    };
    for (size_t i = 0; i < total; ++i) sg[i] = cocycle.map(grid_point(i));

    KamResult res;
    std::vector<Mat2c> fgrid(total);
    for (int iter = 0; iter <= cfg.max_iters; ++iter) {
        // current cocycle and its constant part
        Sl2Matrix mean{0, 0, 0, 0};
        std::vector<Sl2Matrix> ag(total);
        for (size_t i = 0; i < total; ++i) {
            ag[i] = bsh[i].inverse() * sg[i] * bg[i];
            mean = mean + ag[i];
        }
        mean = mean * (1.0 / static_cast<double>(total));
        if (mean.det() <= 0 || std::abs(mean.unit_det().trace()) >= 2.0 - 1e-12) {
            res.status = KamStatus::not_elliptic;
            res.iterations = iter;
            return res;
        }
        Sl2Matrix c = mean.unit_det();
        double r = 0;
        for (size_t i = 0; i < total; ++i) r = std::max(r, (ag[i] - c).frobenius());
        res.residual = r;
        res.a = c;
        res.iterations = iter;
        if (iter > 0) res.residual_history.push_back(r);
        if (r <= cfg.tol_residual) {
            res.status = KamStatus::converged;
            break;
        }
        if (iter == cfg.max_iters) break;
        // stall detection: skipped divisors that keep the error from contracting
        if (res.residual_history.size() >= 3) {
            size_t h = res.residual_history.size();
            double r2 = res.residual_history[h - 1], r1 = res.residual_history[h - 2], r0 = res.residual_history[h - 3];
            if (r2 > 0.5 * r1 && r1 > 0.5 * r0) {
                res.status = res.report.resonant_modes.empty() ? KamStatus::no_convergence : KamStatus::resonance_abort;
                return res;
            }
        }

        // strip schedule drives the cutoff growth
        double frac_sched = std::min(1.0, static_cast<double>(iter) / 6.0);
        double h_j = cfg.strip_h0 * std::pow(cfg.strip_htilde / cfg.strip_h0, frac_sched);
        int cutoff = std::min(cfg.cutoff_max, static_cast<int>(std::ceil(cfg.fourier_cutoff * cfg.strip_h0 / h_j)));
        IndexBox box{std::vector<int>(static_cast<size_t>(d), cutoff)};

        Sl2Matrix cinv = c.inverse();
        bool log_ok = true;
        for (size_t i = 0; i < total; ++i) {
            Sl2Matrix gmat = cinv * ag[i];
            if (gmat.trace() <= -2.0 + 1e-9) { log_ok = false; break; }
            Sl2Matrix f = logm_sl2(gmat.unit_det());
            double tr = 0.5 * f.trace();  // enforce traceless against roundoff
            fgrid[i] = Mat2c::from_real({f.a11 - tr, f.a12, f.a21, f.a22 - tr});
        }
        if (!log_ok) {
            res.status = KamStatus::no_convergence;
            return res;
        }
        auto fhat = analyze_grid(fgrid, d, g, box);
        auto sol = cohomological_solve(c, fhat, box, al, cfg.divisor_floor);
        if (sol.report.action == ResonanceAction::aborted) {
            res.status = KamStatus::resonance_abort;
            res.report = sol.report;
            return res;
        }
        for (auto& mode : sol.report.resonant_modes) res.report.resonant_modes.push_back(mode);
        if (!res.report.resonant_modes.empty()) res.report.action = ResonanceAction::mode_skipped;

        // conjugate by exp(-Y) on both grids
        std::vector<double> zero_off(static_cast<size_t>(d), 0.0);
        auto ygrid = synthesize_grid(sol.y, box, g, zero_off);
        auto ygrid_sh = synthesize_grid(sol.y, box, g, al);
        for (size_t i = 0; i < total; ++i) {
            Sl2Matrix y = ygrid[i].real_part();
            Sl2Matrix ysh = ygrid_sh[i].real_part();
            double t0 = 0.5 * y.trace(), t1 = 0.5 * ysh.trace();
            y.a11 -= t0; y.a22 -= t0;
            ysh.a11 -= t1; ysh.a22 -= t1;
            bg[i] = (bg[i] * expm_sl2(y * -1.0)).unit_det();
            bsh[i] = (bsh[i] * expm_sl2(ysh * -1.0)).unit_det();
        }
    }
    if (res.status != KamStatus::converged) {
        res.status = res.report.resonant_modes.empty() ? KamStatus::no_convergence : KamStatus::resonance_abort;
        return res;
    }

    res.rho_a = constant_rotation(res.a);
    res.quadratic_slope = detail::quadratic_slope_from(res.residual_history);

    // package B as a Fourier series with the decay certificate
    int kb = cfg.cutoff_max;
    IndexBox bbox{std::vector<int>(static_cast<size_t>(d), kb)};
    std::vector<Mat2c> bgrid(total);
    for (size_t i = 0; i < total; ++i) bgrid[i] = Mat2c::from_real(bg[i]);
    res.b.box = bbox;
    res.b.coef = analyze_grid(bgrid, d, g, bbox);
    for (auto& cf : res.b.coef) {  // drop noise-floor coefficients
        if (cf.norm() < 1e-16) cf = Mat2c{} * cplx(0, 0);
    }
    res.b.degree = degree(res.b.evaluator(), d, std::max(64, 4 * kb));
    double fit = res.b.fitted_strip();
    res.b.strip = fit > 0 ? std::min(cfg.strip_htilde, 0.95 * fit) : 0.8 * cfg.strip_htilde;
    return res;
}

// ---------------------------------------------------------------------------
// Independent verification of a conjugation on a grid finer than the solver's:
// residual of B(x+alpha)^{-1} S(x) B(x) = A plus the rotation-number shift
// bookkeeping rho(S) = rho(A) + <deg B, alpha>/2.
// ---------------------------------------------------------------------------

struct ConjugationCheck {
    double residual = 0;
    bool rho_shift_ok = false;
    double rho_cocycle = 0;
    double rho_constant = 0;
    double shift_defect = 0;
};

inline ConjugationCheck verify_conjugation(const Cocycle& s, const FourierConjugation& b, const Sl2Matrix& a,
                                           long long n_rot = 100000, int grid = 0) {
    int d = s.dim();
    if (grid == 0) grid = d == 1 ? 1024 : (d == 2 ? 256 : 64);
    auto al = s.alpha.values();
    size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<size_t>(grid);
    std::vector<double> zero_off(static_cast<size_t>(d), 0.0);
    auto bgrid = synthesize_grid(b.coef, b.box, grid, zero_off);
    auto bgrid_sh = synthesize_grid(b.coef, b.box, grid, al);
    ConjugationCheck out;
    auto grid_point = [&](size_t idx) {
        TorusPoint p = TorusPoint::zero(d);
        for (int i = d - 1; i >= 0; --i) {
            p[i] = static_cast<double>(idx % static_cast<size_t>(grid)) / grid;
            idx /= static_cast<size_t>(grid);
        }
        return p;
    };
    for (size_t i = 0; i < total; ++i) {
        Sl2Matrix bx = bgrid[i].real_part();
        Sl2Matrix bxa = bgrid_sh[i].real_part();
        Sl2Matrix lhs = bxa.inverse() * s.map(grid_point(i)) * bx;
        out.residual = std::max(out.residual, (lhs - a).frobenius());
    }
    TorusPoint x0 = TorusPoint::zero(d);
    x0[0] = 0.3137;
    out.rho_cocycle = rotation_number(s, n_rot, x0).rho;
    out.rho_constant = constant_rotation(a);
    double shift = 0.5 * dot(b.degree, al);
    out.shift_defect = std::abs(wrap_half(out.rho_cocycle - out.rho_constant - shift));
    out.rho_shift_ok = out.shift_defect <= 4.0 / static_cast<double>(n_rot);
    return out;
}

// ---------------------------------------------------------------------------
// Diagonalization of elliptic constants with the norm bound of the
// gamma-condition: U in SL(2,C), U^{-1} A U = diag(e^{2 pi i rho}, e^{-2 pi i rho}),
// ||U|| <= 2^{tau'} sqrt(2 ||A|| / gamma).
// ---------------------------------------------------------------------------

inline Mat2c diagonalize_sl2(const Sl2Matrix& a, double rho, double gamma, double tau_prime) {
    if (!is_elliptic(a)) throw std::invalid_argument("diagonalize_sl2: |trace| >= 2, matrix not elliptic");
    double rho_a = constant_rotation(a);
    if (std::abs(wrap_half(rho_a - rho)) > 1e-8)
        throw std::invalid_argument("diagonalize_sl2: rho inconsistent with the eigenvalues (expected " +
                                    std::to_string(rho_a) + ")");
    cplx lam = std::polar(1.0, two_pi * rho_a);
    // eigenvector for lambda; column-conjugate partner gives the second one
    cplx v1 = a.a12, v2 = lam - a.a11;
    if (std::abs(v1) + std::abs(v2) < 1e-14) { v1 = lam - a.a22; v2 = a.a21; }
    Mat2c u{v1, std::conj(v1), v2, std::conj(v2)};
    cplx dt = u.det();
    if (std::abs(dt) < 1e-14) throw std::invalid_argument("diagonalize_sl2: eigenvectors degenerate");
    cplx scale = 1.0 / std::sqrt(dt);
    u = u * scale;
    // norm bound in logs (2^{tau'} overflows for the A_gamma exponent)
    double lhs = std::log(u.norm());
    double rhs = tau_prime * std::log(2.0) + 0.5 * (std::log(2.0 * a.norm()) - std::log(gamma));
    if (lhs > rhs)
        throw std::runtime_error("diagonalize_sl2: norm bound violated (ln||U|| = " + std::to_string(lhs) + " > " +
                                 std::to_string(rhs) + ")");
    return u;
}

/// Joint diagonalization of a nearby pair via the matrix-log route: U' = U P
/// with the explicit P built from U^{-1} A' U = exp [[a,b],[c,-a]].
struct NearbyDiagonalization {
    Mat2c u;
    Mat2c u_prime;
    double dist = 0;
};

inline NearbyDiagonalization diagonalize_nearby(const Sl2Matrix& a, const Sl2Matrix& a_prime, double rho,
                                                double rho_prime, double gamma, double tau_prime,
                                                bool relax_threshold = false) {
    double delta = (a - a_prime).norm();
    // delta < min{ 1/(1000000 pi), (gamma / 2^{tau'})^{1/10}, eps^{10} }; the middle
    // term is evaluated in logs (2^{tau'} overflows).
    double lim1 = 1.0 / (1000000.0 * 3.14159265358979323846);
    double llim2 = 0.1 * (std::log(gamma) - tau_prime * std::log(2.0));
    double lim2 = llim2 < -700 ? 0.0 : std::exp(llim2);
    double lim = lim2 > 0 ? std::min(lim1, lim2) : lim1;
    if (!relax_threshold && delta >= lim)
        throw std::invalid_argument("diagonalize_nearby: ||A - A'|| = " + std::to_string(delta) +
                                    " above the threshold " + std::to_string(lim) + " (pass relax_threshold to override)");
    NearbyDiagonalization out;
    out.u = diagonalize_sl2(a, rho, gamma, tau_prime);
    if (delta == 0.0) {
        out.u_prime = out.u;
        out.dist = 0;
        return out;
    }
    Mat2c gmat = out.u.inverse() * Mat2c::from_real(a_prime) * out.u;
    // principal log: G = exp(At), At = (phi / sin phi)(G - cos phi I), phi = arccos(tr/2)
    cplx t = gmat.trace() * 0.5;
    cplx phi = std::acos(t);
    if (std::abs(std::sin(phi)) < 1e-14) throw std::runtime_error("diagonalize_nearby: parabolic midpoint, log undefined");
    Mat2c at = (gmat - Mat2c::identity() * t) * (phi / std::sin(phi));
    cplx la = at.a11, lb = at.a12, lc = at.a21;
    // omega = sqrt(a^2 + bc) with the branch matching +2 pi i rho'
    cplx omega = std::sqrt(la * la + lb * lc);
    cplx target(0, two_pi * constant_rotation(a_prime));
    if (std::abs(omega - target) > std::abs(-omega - target)) omega = -omega;
    if (std::abs(omega - target) > 1e-6 * (1.0 + std::abs(target)))
        throw std::runtime_error("diagonalize_nearby: rho' inconsistent with the log eigenvalues");
    (void)rho_prime;
    cplx den = la + omega;  // = 2 pi (x + i y + i rho')
    cplx pre = 1.0 / std::sqrt(1.0 + lb * lc / (den * den));
    Mat2c p{pre, -lb / den * pre, lc / den * pre, pre};
    out.u_prime = out.u * p;
    out.dist = (out.u - out.u_prime).norm();
    double bound = std::pow(std::max(delta, 1e-300), 0.1);
    if (!relax_threshold && out.dist > bound)
        throw std::runtime_error("diagonalize_nearby: ||U - U'|| = " + std::to_string(out.dist) +
                                 " violates the delta^{1/10} bound " + std::to_string(bound));
    return out;
}

}  // namespace qpl
