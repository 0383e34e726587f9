#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qpl/arithmetic.hpp"
#include "qpl/cocycle.hpp"
#include "qpl/common.hpp"
#include "qpl/eigen_symmetric.hpp"

namespace qpl {

// ---------------------------------------------------------------------------
// Real even potentials by Fourier data: V(x) = sum_k Vhat_k e^{2 pi i <k,x>}
// with Vhat_{-k} = Vhat_k real, finite support.
// ---------------------------------------------------------------------------

class PotentialFourier {
public:
    PotentialFourier() = default;
    PotentialFourier(int d, std::map<std::vector<int>, double> coeffs, double claimed_strip = 0.5)
        : d_(d), strip_(claimed_strip) {
        for (auto& [k, v] : coeffs) {
            if (static_cast<int>(k.size()) != d) throw std::invalid_argument("potential: coefficient index dimension mismatch");
            if (v == 0.0) continue;
            std::vector<int> mk(k.size());
            for (size_t i = 0; i < k.size(); ++i) mk[i] = -k[i];
            auto it = coeffs.find(mk);
            if (it != coeffs.end() && std::abs(it->second - v) > 1e-14)
                throw std::invalid_argument("potential: Vhat(-k) != Vhat(k), real even coefficients required");
            coeffs_[k] = v;
            coeffs_[mk] = v;  // mirror to enforce evenness
        }
        for (auto& [k, v] : coeffs_) {
            l1_ += std::abs(v);
            support_ = std::max(support_, sup_norm(k));
        }
    }

    static PotentialFourier zero(int d) { return PotentialFourier(d, {}); }

    /// V(x) = sum_i 2 c cos(2 pi x_i): coefficients c at +-e_i.
    static PotentialFourier amo(int d, double c) {
        std::map<std::vector<int>, double> m;
        for (int i = 0; i < d; ++i) {
            std::vector<int> k(static_cast<size_t>(d), 0);
            k[static_cast<size_t>(i)] = 1;
            m[k] = c;
        }
        return PotentialFourier(d, std::move(m));
    }

    int dim() const { return d_; }
    double l1_norm() const { return l1_; }
    double claimed_strip() const { return strip_; }
    int support_radius() const { return support_; }
    const std::map<std::vector<int>, double>& coefficients() const { return coeffs_; }

    double coefficient(const std::vector<int>& k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? 0.0 : it->second;
    }

    double eval(const TorusPoint& x) const {
        double s = 0;
        for (const auto& [k, v] : coeffs_) {
            double ph = 0;
            for (int i = 0; i < d_; ++i) ph += k[static_cast<size_t>(i)] * x[i];
            s += v * std::cos(two_pi * ph);  // sine parts cancel by evenness
        }
        return s;
    }

private:
    int d_ = 1;
    double strip_ = 0.5;
    double l1_ = 0;
    int support_ = 0;
    std::map<std::vector<int>, double> coeffs_;
};

inline Cocycle Cocycle::schrodinger(const Frequency& alpha, const PotentialFourier& v, double energy,
                                    std::optional<double> strip) {
    if (v.dim() != alpha.dim()) throw std::invalid_argument("schrodinger: potential/frequency dimension mismatch");
    auto pv = v;  // value copy keeps the cocycle self-contained
    return {alpha,
            [pv, energy](const TorusPoint& x) {
                return Sl2Matrix{energy - pv.eval(x), -1.0, 1.0, 0.0};
            },
            strip.has_value() ? strip : std::optional<double>(v.claimed_strip())};
}

// ---------------------------------------------------------------------------
// Finite truncations. schrodinger1d: tridiagonal on sites -N..N with diagonal
// V(x + n alpha); longrange: dense (2N+1)^d matrix Vhat_{n-m} + diagonal
// 2 cos 2 pi (theta + <n,alpha>). Dirichlet boundary (plain truncation).
// ---------------------------------------------------------------------------

enum class OperatorKind { schrodinger1d, longrange };

struct TruncatedOperator {
    OperatorKind kind;
    int d = 1;      // torus dimension (schrodinger1d) or lattice dimension (longrange)
    int N = 0;      // box radius
    Frequency alpha;
    TorusPoint x{};     // schrodinger1d phase point
    double theta = 0;   // longrange phase
    IndexBox box;       // longrange site box

    std::vector<double> diag;      // schrodinger1d
    std::vector<double> offdiag;   // schrodinger1d (all ones)
    std::vector<double> dense;     // longrange, row-major

    int dimension() const {
        return kind == OperatorKind::schrodinger1d ? 2 * N + 1 : static_cast<int>(box.size());
    }
    std::vector<int> site_of_row(size_t row) const {
        if (kind == OperatorKind::schrodinger1d) return {static_cast<int>(row) - N};
        return box.unflatten(row);
    }
    size_t row_of_site(const std::vector<int>& n) const {
        if (kind == OperatorKind::schrodinger1d) return static_cast<size_t>(n.at(0) + N);
        return box.flatten(n);
    }
};

inline TruncatedOperator build_truncation(const PotentialFourier& v, const Frequency& alpha, double phase,
                                          OperatorKind kind, int N) {
    if (N < 1) throw std::invalid_argument("build_truncation: N >= 1 required");
    TruncatedOperator op;
    op.kind = kind;
    op.alpha = alpha;
    op.N = N;
    op.d = kind == OperatorKind::schrodinger1d ? alpha.dim() : v.dim();
    if (kind == OperatorKind::schrodinger1d) {
        long long n = 2LL * N + 1;
        if (n > 2'000'000LL) throw std::invalid_argument("build_truncation: chain length exceeds guard");
        op.x = TorusPoint::zero(alpha.dim());
        op.x[0] = frac(phase);
        auto al = alpha.values();
        op.diag.resize(static_cast<size_t>(n));
        op.offdiag.assign(static_cast<size_t>(n - 1), 1.0);
        for (long long j = 0; j < n; ++j) {
            TorusPoint xj = op.x;
            for (int i = 0; i < alpha.dim(); ++i) xj[i] = frac(op.x[i] + (static_cast<double>(j) - N) * al[static_cast<size_t>(i)]);
            op.diag[static_cast<size_t>(j)] = v.eval(xj);
        }
    } else {
        if (v.dim() != alpha.dim()) throw std::invalid_argument("build_truncation: potential/frequency dimension mismatch");
        op.box = IndexBox{std::vector<int>(static_cast<size_t>(v.dim()), N)};
        size_t dim = op.box.size();
        if (dim > 20000) {
            std::ostringstream os;
            os << "build_truncation: box dimension " << dim << " exceeds the 2e4 guard (dense storage ~ "
               << (dim * dim * 8) / (1024 * 1024) << " MiB)";
            throw std::invalid_argument(os.str());
        }
        op.theta = frac(phase);
        auto al = alpha.values();
        op.dense.assign(dim * dim, 0.0);
        for (size_t r = 0; r < dim; ++r) {
            auto n = op.box.unflatten(r);
            double di = 2.0 * std::cos(two_pi * (op.theta + dot(n, al)));
            std::vector<int> diff(n.size());
            for (size_t c = 0; c < dim; ++c) {
                auto m = op.box.unflatten(c);
                for (size_t i = 0; i < n.size(); ++i) diff[i] = n[i] - m[i];
                double val = v.coefficient(diff);
                if (r == c) val += di;
                op.dense[r * dim + c] = val;
            }
        }
    }
    return op;
}

// ---------------------------------------------------------------------------
// Spectral data of a truncation: eigenvalues ascending, eigenvectors, and the
// mass each eigenvector leaves on the outermost shell (truncation quality).
// ---------------------------------------------------------------------------

struct SpectralData {
    std::vector<double> eigenvalues;
    std::vector<double> vectors;       // row-major, column j = eigenvector j
    std::vector<double> boundary_mass; // per eigenvector
    int n = 0;

    double vector_entry(size_t row, size_t j) const { return vectors[row * static_cast<size_t>(n) + j]; }

    /// Weights |<delta_row, phi_j>|^2 of the spectral measure at a site row.
    std::vector<double> weights_at(size_t row) const {
        std::vector<double> w(static_cast<size_t>(n));
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            double c = vector_entry(row, j);
            w[j] = c * c;
        }
        return w;
    }
};

inline SpectralData eigensolve(const TruncatedOperator& op) {
    int n = op.dimension();
    if (n > 4000) throw std::invalid_argument("eigensolve: dimension " + std::to_string(n) + " exceeds the dense guard (4000)");
    SpectralData sd;
    sd.n = n;
    if (op.kind == OperatorKind::schrodinger1d) {
        eigensolve_tridiagonal(op.diag, op.offdiag, sd.eigenvalues, sd.vectors);
    } else {
        eigensolve_symmetric(op.dense, n, sd.eigenvalues, sd.vectors);
    }
    // residual spot check ||M phi - E phi|| <= 1e-10 ||M|| on a few pairs
    double scale = 0;
    for (double ev : sd.eigenvalues) scale = std::max(scale, std::abs(ev));
    for (int probe = 0; probe < std::min(n, 5); ++probe) {
        size_t j = static_cast<size_t>(probe) * static_cast<size_t>(n - 1) / static_cast<size_t>(std::max(1, std::min(n, 5) - 1));
        double rmax = 0;
        for (int i = 0; i < n; ++i) {
            double mv = 0;
            if (op.kind == OperatorKind::schrodinger1d) {
                mv = op.diag[static_cast<size_t>(i)] * sd.vector_entry(static_cast<size_t>(i), j);
                if (i > 0) mv += sd.vector_entry(static_cast<size_t>(i - 1), j);
                if (i < n - 1) mv += sd.vector_entry(static_cast<size_t>(i + 1), j);
            } else {
                for (int c = 0; c < n; ++c) mv += op.dense[static_cast<size_t>(i) * n + c] * sd.vector_entry(static_cast<size_t>(c), j);
            }
            rmax = std::max(rmax, std::abs(mv - sd.eigenvalues[j] * sd.vector_entry(static_cast<size_t>(i), j)));
        }
        if (rmax > 1e-10 * std::max(scale, 1.0))
            throw std::runtime_error("eigensolve: residual " + std::to_string(rmax) + " exceeds 1e-10 * ||M||");
    }
    // boundary shell mass per eigenvector
    sd.boundary_mass.assign(static_cast<size_t>(n), 0.0);
    for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
        double m = 0;
        for (size_t r = 0; r < static_cast<size_t>(n); ++r) {
            auto site = op.site_of_row(r);
            if (sup_norm(site) == op.N) {
                double c = sd.vector_entry(r, j);
                m += c * c;
            }
        }
        sd.boundary_mass[j] = m;
    }
    return sd;
}

// ---------------------------------------------------------------------------
// Integrated density of states via Sturm counting on the tridiagonal
// truncation, averaged over the equidistributed phase orbit x0 + j alpha.
// ---------------------------------------------------------------------------

inline double ids(const PotentialFourier& v, const Frequency& alpha, double energy, int N, int x_samples,
                  uint64_t seed, int threads = 0) {
    if (x_samples < 1) throw std::invalid_argument("ids: x_samples >= 1 required");
    auto al = alpha.values();
    Rng rng(seed, 0);
    std::vector<double> x0(static_cast<size_t>(alpha.dim()));
    for (auto& xi : x0) xi = rng.next_double();
    std::vector<double> counts(static_cast<size_t>(x_samples));
    parallel_for(static_cast<size_t>(x_samples), [&](size_t s) {
        TorusPoint x = TorusPoint::zero(alpha.dim());
        for (int i = 0; i < alpha.dim(); ++i)
            x[i] = frac(x0[static_cast<size_t>(i)] + static_cast<double>(s) * al[static_cast<size_t>(i)]);
        long long n = 2LL * N + 1;
        std::vector<double> diag(static_cast<size_t>(n));
        for (long long j = 0; j < n; ++j) {
            TorusPoint xj = x;
            for (int i = 0; i < alpha.dim(); ++i) xj[i] = frac(x[i] + (static_cast<double>(j) - N) * al[static_cast<size_t>(i)]);
            diag[static_cast<size_t>(j)] = v.eval(xj);
        }
        std::vector<double> off(static_cast<size_t>(n - 1), 1.0);
        counts[s] = static_cast<double>(sturm_count(diag, off, energy)) / static_cast<double>(n);
    }, threads);
    double mean = 0;
    for (double c : counts) mean += c;
    return mean / x_samples;
}

/// Identity N(E) = 1 - 2 rho(E) checked over an energy grid; rho in [0,1/2].
struct IdsRotationReport {
    double max_defect = 0;
    bool pass = false;
    std::vector<double> energies;
    std::vector<double> ids_values;
    std::vector<double> rho_values;
    std::vector<double> defects;
};

inline IdsRotationReport ids_rotation_check(const PotentialFourier& v, const Frequency& alpha,
                                            const std::vector<double>& energies, int N, long long n_rot, double tol,
                                            uint64_t seed = 11, int threads = 0) {
    IdsRotationReport rep;
    rep.energies = energies;
    rep.ids_values.resize(energies.size());
    rep.rho_values.resize(energies.size());
    rep.defects.resize(energies.size());
    parallel_for(energies.size(), [&](size_t i) {
        double E = energies[i];
        double nval = ids(v, alpha, E, N, 32, seed, 1);
        Cocycle c = Cocycle::schrodinger(alpha, v, E);
        TorusPoint x0 = TorusPoint::zero(alpha.dim());
        x0[0] = 0.2437;
        double rho = fold_rho(rotation_number(c, n_rot, x0).rho);
        rep.ids_values[i] = nval;
        rep.rho_values[i] = rho;
        rep.defects[i] = std::abs(nval - (1.0 - 2.0 * rho));
    }, threads);
    for (double d0 : rep.defects) rep.max_defect = std::max(rep.max_defect, d0);
    rep.pass = rep.max_defect <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Discrete spectral measure of a long-range truncation at a site.
// ---------------------------------------------------------------------------

struct SpectralMeasure {
    std::vector<double> atoms_energy;
    std::vector<double> atoms_weight;
    double total = 0;
    double boundary_mass = 0;  // weight-averaged eigenvector mass on the outer shell
};

inline SpectralMeasure spectral_measure(const TruncatedOperator& op, const SpectralData& sd, const std::vector<int>& site) {
    if (op.kind != OperatorKind::longrange) throw std::invalid_argument("spectral_measure: longrange operator required");
    size_t row = op.row_of_site(site);
    SpectralMeasure m;
    auto w = sd.weights_at(row);
    m.atoms_energy = sd.eigenvalues;
    m.atoms_weight = w;
    for (size_t j = 0; j < w.size(); ++j) {
        m.total += w[j];
        m.boundary_mass += w[j] * sd.boundary_mass[j];
    }
    return m;
}

}  // namespace qpl
