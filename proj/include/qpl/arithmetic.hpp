#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qpl/common.hpp"

namespace qpl {

// ---------------------------------------------------------------------------
// Frequency vectors. Quadratic-irrational components are carried in exact
// integer form (a + b*sqrt(c))/q and evaluated in extended precision, so
// continued-fraction scans at depth <= 40 are exact.
// ---------------------------------------------------------------------------

struct QuadSurd {
    long long a = 0, b = 0, q = 1;
    long long c = 0;  // radicand, not a perfect square when b != 0

    long double value() const {
        return (static_cast<long double>(a) + static_cast<long double>(b) * std::sqrt(static_cast<long double>(c))) /
               static_cast<long double>(q);
    }
};

struct FrequencyComponent {
    enum class Kind { Decimal, Quadratic, Golden, Silver };
    Kind kind = Kind::Decimal;
    QuadSurd surd;        // valid for Quadratic/Golden/Silver
    long double val = 0;  // always valid, reduced to [0,1)

    static FrequencyComponent decimal(long double x) {
        FrequencyComponent f;
        f.kind = Kind::Decimal;
        f.val = fracl(x);
        return f;
    }
    static FrequencyComponent quadratic(long long a, long long b, long long c, long long q, Kind kind = Kind::Quadratic) {
        if (q == 0) throw std::invalid_argument("frequency: quad(a,b,c,q) needs q != 0");
        if (c < 0) throw std::invalid_argument("frequency: quad(a,b,c,q) needs c >= 0");
        FrequencyComponent f;
        f.kind = kind;
        f.surd = {a, b, q, c};
        f.val = fracl(f.surd.value());
        return f;
    }
    static FrequencyComponent golden() { return quadratic(-1, 1, 5, 2, Kind::Golden); }   // (sqrt(5)-1)/2
    static FrequencyComponent silver() { return quadratic(-1, 1, 2, 1, Kind::Silver); }   // sqrt(2)-1
};

struct Frequency {
    std::vector<FrequencyComponent> comps;

    int dim() const { return static_cast<int>(comps.size()); }

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(comps.size());
        for (const auto& c : comps) v.push_back(static_cast<double>(c.val));
        return v;
    }
    std::vector<long double> values_l() const {
        std::vector<long double> v;
        v.reserve(comps.size());
        for (const auto& c : comps) v.push_back(c.val);
        return v;
    }

    static Frequency golden() { return Frequency{{FrequencyComponent::golden()}}; }
    static Frequency silver() { return Frequency{{FrequencyComponent::silver()}}; }
    static Frequency decimal(double x) { return Frequency{{FrequencyComponent::decimal(x)}}; }

    /// Rational-independence guard: rejects integer vectors n with
    /// <n, alpha> within tol of an integer, up to |n|_inf <= guard.
    void validate_irrational(int guard = 0, long double tol = 1e-12L) const {
        if (comps.empty()) throw std::invalid_argument("frequency: d >= 1 required");
        if (guard <= 0) guard = dim() == 1 ? 100 : 30;
        auto al = values_l();
        IndexBox box{std::vector<int>(static_cast<size_t>(dim()), guard)};
        for (size_t i = 0; i < box.size(); ++i) {
            auto n = box.unflatten(i);
            if (sup_norm(n) == 0) continue;
            if (dist_to_intl(dotl(n, al)) <= tol) {
                std::ostringstream os;
                os << "frequency fails rational-independence guard at n = (";
                for (size_t j = 0; j < n.size(); ++j) os << (j ? "," : "") << n[j];
                os << ")";
                throw std::invalid_argument(os.str());
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Continued fractions of x in (0,1). Quadratic-irrational inputs run the
// exact integer algorithm for (P + sqrt(D))/Q; decimal inputs iterate the
// Gauss map in extended precision.
// ---------------------------------------------------------------------------

struct ContinuedFraction {
    std::vector<long long> partial_quotients;                 // a_1, a_2, ... (integer part dropped, x in (0,1))
    std::vector<std::pair<long long, long long>> convergents; // (p_k, q_k) for the a_k above
};

namespace detail {

inline long long isqrt_ll(long long n) {
    if (n < 0) return -1;
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline void push_convergent(ContinuedFraction& cf, long long a) {
    long long p2 = 0, p1 = 1, q2 = 1, q1 = 0;  // p_{-1}=1,p_{-2}=0 / q_{-1}=0,q_{-2}=1 for the 1/(a1+...) expansion
    size_t n = cf.convergents.size();
    if (n >= 1) { p1 = cf.convergents[n - 1].first; q1 = cf.convergents[n - 1].second; }
    if (n >= 2) { p2 = cf.convergents[n - 2].first; q2 = cf.convergents[n - 2].second; }
    if (n == 0) { p1 = 0; q1 = 1; p2 = 1; q2 = 0; }
    else if (n == 1) { p2 = 0; q2 = 1; }
    cf.partial_quotients.push_back(a);
    cf.convergents.emplace_back(a * p1 + p2, a * q1 + q2);
}

}  // namespace detail

/// Exact CF of a quadratic surd in (0,1); classical (P + sqrt(D))/Q recursion
/// in integer arithmetic, so deep scans do not lose precision.
inline ContinuedFraction continued_fraction_surd(const QuadSurd& s, int depth) {
    if (s.b == 0) throw std::invalid_argument("continued_fraction: input is rational (b = 0), denominator " + std::to_string(s.q));
    long long r = detail::isqrt_ll(s.c);
    if (r * r == s.c) throw std::invalid_argument("continued_fraction: radicand is a perfect square, input rational");
    // Normalize to x = (P + sqrt(D))/Q with Q | (D - P^2) and +sqrt branch.
    long long P = s.a, Q = s.q;
    long long D = s.b * s.b * s.c;
    if (s.b < 0) { P = -s.a; Q = -s.q; }
    if ((D - P * P) % Q != 0) {
        long long aq = std::llabs(Q);
        D *= Q * Q;
        P *= aq;
        Q *= aq;
    }
    long long sq = detail::isqrt_ll(D);
    // floor((P + sqrt(D))/Q), exact for either sign of Q (sqrt(D) irrational).
    auto exact_floor = [&](long long p, long long q) {
        auto floor_div = [](long long num, long long den) {
            long long v = num / den;
            if ((num % den != 0) && ((num < 0) != (den < 0))) --v;
            return v;
        };
        // sqrt(D) in (sq, sq+1): for q > 0 the floor of (p + sqrt(D))/q equals floor((p + sq)/q);
        // for q < 0 it equals floor((p + sq + 1)/q) (open endpoints, never integral).
        return q > 0 ? floor_div(p + sq, q) : floor_div(p + sq + 1, q);
    };
    // a_k = floor((P_k + sqrt D)/Q_k); P_{k+1} = a_k Q_k - P_k; Q_{k+1} = (D - P_{k+1}^2)/Q_k.
    long long a0 = exact_floor(P, Q);
    P -= a0 * Q;  // x now in (0,1), integer part dropped
    ContinuedFraction cf;
    for (int i = 0; i < depth; ++i) {
        long long Pn = -P;  // one step of the recursion applied to 1/x
        long long Qn = (D - Pn * Pn) / Q;
        long long a = exact_floor(Pn, Qn);
        detail::push_convergent(cf, a);
        P = Pn - a * Qn;
        Q = Qn;
    }
    return cf;
}

/// CF of a floating x in (0,1). Detects rational x (to working precision) and
/// reports the detected denominator in the error.
inline ContinuedFraction continued_fraction(long double x, int depth) {
    if (depth < 1) throw std::invalid_argument("continued_fraction: depth >= 1 required");
    if (!(x > 0.0L && x < 1.0L)) throw std::invalid_argument("continued_fraction: x must lie in (0,1)");
    ContinuedFraction cf;
    long double y = x;
    for (int i = 0; i < depth; ++i) {
        long double inv = 1.0L / y;
        long long a = static_cast<long long>(std::floor(inv));
        long double rem = inv - static_cast<long double>(a);
        if (a < 1) throw std::runtime_error("continued_fraction: lost precision (nonpositive quotient)");
        detail::push_convergent(cf, a);
        long long q = cf.convergents.back().second;
        if (rem < 1e-16L || rem * static_cast<long double>(q) * static_cast<long double>(q) < 1e-14L) {
            throw std::invalid_argument("continued_fraction: x rational within precision, denominator " + std::to_string(q));
        }
        y = rem;
    }
    return cf;
}

inline ContinuedFraction continued_fraction(const FrequencyComponent& f, int depth) {
    if (f.kind != FrequencyComponent::Kind::Decimal) return continued_fraction_surd(f.surd, depth);
    return continued_fraction(f.val, depth);
}

// ---------------------------------------------------------------------------
// Diophantine classes.  Frequencies: inf_j |<n,alpha> - j| > kappa / |n|^tau
// for 0 < |n| <= N_max.  Phases: || 2 theta - <k,alpha> || > gamma/(|k|+1)^tau'
// for |k| <= bound, k = 0 included.  |.| is the sup norm on Z^d.
// ---------------------------------------------------------------------------

struct DiophantineFreqParams {
    double kappa = 0.1;
    double tau = 1.5;
    int scan_bound = 10000;

    void validate(int d) const {
        if (!(kappa > 0)) throw std::invalid_argument("freq params: kappa > 0 required");
        if (!(tau > d - 1)) throw std::invalid_argument("freq params: tau > d-1 required");
        if (scan_bound < 1) throw std::invalid_argument("freq params: scan_bound >= 1 required");
    }
};

struct DiophantinePhaseParams {
    double gamma = 0.05;
    double tau_prime = 151.0;  // A_gamma convention: tau' = 100 tau + d
    int scan_bound = 10000;

    static DiophantinePhaseParams for_class(double gamma, double tau, int d, int bound = 10000) {
        return {gamma, 100.0 * tau + d, bound};
    }
};

struct FreqDcResult {
    bool holds = false;
    std::vector<int> worst_n;
    double margin = 0;  // min over n of dist * |n|^tau; holds iff margin > kappa
};

inline FreqDcResult check_freq_dc(const Frequency& alpha, const DiophantineFreqParams& params) {
    params.validate(alpha.dim());
    auto al = alpha.values_l();
    int bound = params.scan_bound;
    if (alpha.dim() >= 2) bound = std::min(bound, 100);
    IndexBox box{std::vector<int>(static_cast<size_t>(alpha.dim()), bound)};
    FreqDcResult res;
    long double best = std::numeric_limits<long double>::max();
    for (size_t i = 0; i < box.size(); ++i) {
        auto n = box.unflatten(i);
        int nn = sup_norm(n);
        if (nn == 0) continue;
        long double dist = dist_to_intl(dotl(n, al));
        long double margin = dist * std::pow(static_cast<long double>(nn), static_cast<long double>(params.tau));
        if (margin < best) {
            best = margin;
            res.worst_n = n;
        }
    }
    res.margin = static_cast<double>(best);
    res.holds = best > static_cast<long double>(params.kappa);
    return res;
}

struct PhaseDcResult {
    bool holds = false;
    std::vector<int> worst_k;
    double margin = 0;          // dist * (|k|+1)^tau' at the worst k (saturated at 1e300)
    double worst_log_excess = 0;  // ln dist - (ln gamma - tau' ln(|k|+1)) at the worst k
};

/// Exact resonances (dist <= 1e-14) fail regardless of the tau' weight.
inline PhaseDcResult check_phase_dc(double theta, const Frequency& alpha, const DiophantinePhaseParams& params) {
    if (params.scan_bound < 0) throw std::invalid_argument("phase params: scan_bound >= 0 required");
    auto al = alpha.values_l();
    int bound = params.scan_bound;
    if (alpha.dim() >= 2) bound = std::min(bound, 100);
    IndexBox box{std::vector<int>(static_cast<size_t>(alpha.dim()), bound)};
    PhaseDcResult res;
    res.holds = true;
    long double th2 = 2.0L * static_cast<long double>(theta);
    long double lgamma_ = params.gamma > 0 ? std::log(static_cast<long double>(params.gamma))
                                           : -std::numeric_limits<long double>::max();
    long double best_excess = std::numeric_limits<long double>::max();
    for (size_t i = 0; i < box.size(); ++i) {
        auto k = box.unflatten(i);
        int kk = sup_norm(k);
        long double dist = dist_to_intl(th2 - dotl(k, al));
        bool resonant = dist <= 1e-14L;
        long double ldist = resonant ? -std::numeric_limits<long double>::max() : std::log(dist);
        long double excess = ldist - (lgamma_ - static_cast<long double>(params.tau_prime) * std::log(static_cast<long double>(kk) + 1.0L));
        if (resonant || excess <= 0) res.holds = false;
        if (excess < best_excess) {
            best_excess = excess;
            res.worst_k = k;
            long double lmargin = ldist + static_cast<long double>(params.tau_prime) * std::log(static_cast<long double>(kk) + 1.0L);
            res.margin = resonant ? 0.0 : static_cast<double>(std::exp(std::min(lmargin, 690.0L)));
            res.worst_log_excess = (resonant || excess == -std::numeric_limits<long double>::max())
                                       ? -std::numeric_limits<double>::infinity()
                                       : static_cast<double>(excess);
        }
    }
    return res;
}

/// Phase shift rule along the orbit: T^k theta lies in the class with
/// gamma scaled by (|k|+1)^{-tau'}; tau' is unchanged.
inline DiophantinePhaseParams shifted_phase_params(const DiophantinePhaseParams& params, const std::vector<int>& k) {
    DiophantinePhaseParams out = params;
    double kk = static_cast<double>(sup_norm(k)) + 1.0;
    out.gamma = params.gamma * std::pow(kk, -params.tau_prime);  // may underflow for huge shifts; 0 keeps only hard-resonance checks
    return out;
}

// ---------------------------------------------------------------------------
// Homogeneity of the phase class around theta0: measure of the window
// (theta0-sigma, theta0+sigma) minus the exclusion intervals
// Theta_k = { theta : ||2 theta - <k,alpha>|| < gamma (|k|+1)^{-tau'} },
// scanned for |k| <= k_cut with the geometric-sum bound for the tail.
// ---------------------------------------------------------------------------

struct HomogeneityEstimate {
    double ratio = 0;             // (2 sigma - excluded) / (2 sigma)
    double excluded_measure = 0;  // scanned exclusions + tail bound
    double tail_bound = 0;
    bool relaxed_regime = false;  // sigma outside the admissible smallness regime
    int intervals_hit = 0;
};

inline HomogeneityEstimate homogeneity_estimate(const Frequency& alpha,
                                                const DiophantineFreqParams& freq_params,
                                                const DiophantinePhaseParams& phase_params,
                                                double theta0, double sigma, int k_cut) {
    if (!(sigma > 0)) throw std::invalid_argument("homogeneity_estimate: sigma > 0 required");
    int d = alpha.dim();
    double tau_prime = phase_params.tau_prime;
    if (!(tau_prime > d + 1)) throw std::invalid_argument("homogeneity_estimate: tail diverges, need tau' > d+1");

    auto freq = check_freq_dc(alpha, {freq_params.kappa, freq_params.tau, std::min(freq_params.scan_bound, 2000)});
    if (!freq.holds)
        throw std::invalid_argument("homogeneity_estimate: frequency fails its Diophantine condition (margin " +
                                    std::to_string(freq.margin) + " <= kappa)");
    DiophantinePhaseParams scan = phase_params;
    scan.scan_bound = k_cut;
    auto pc = check_phase_dc(theta0, alpha, scan);
    if (!pc.holds) throw std::invalid_argument("homogeneity_estimate: theta0 fails the phase Diophantine condition");

    HomogeneityEstimate out;
    // Admissible regime, compared in logs (2^{-100 tau} underflows for large tau).
    long double lsig = std::log(static_cast<long double>(sigma));
    long double l2 = std::log(2.0L);
    long double lim1 = -100.0L * freq_params.tau * l2;
    long double lim2 = std::log(static_cast<long double>(freq_params.kappa) * freq_params.kappa / 16.0L) + lim1;
    long double lim3 = std::log(static_cast<long double>(phase_params.gamma) / 4.0L);
    out.relaxed_regime = !(lsig < std::min(std::min(lim1, lim2), lim3));

    auto al = alpha.values_l();
    long double th0 = static_cast<long double>(theta0);
    long double sig = static_cast<long double>(sigma);
    long double lgam = std::log(static_cast<long double>(phase_params.gamma));

    std::vector<std::pair<long double, long double>> ivals;  // window coordinates, clipped to [-sigma, sigma]
    IndexBox box{std::vector<int>(static_cast<size_t>(d), k_cut)};
    for (size_t i = 0; i < box.size(); ++i) {
        auto k = box.unflatten(i);
        int kk = sup_norm(k);
        long double lr = lgam - static_cast<long double>(tau_prime) * std::log(static_cast<long double>(kk) + 1.0L);
        long double r = lr < -11500.0L ? 0.0L : std::exp(lr);  // radius of ||2 theta - c|| < r
        long double c = dotl(k, al);
        // Theta_k consists of two intervals around c/2 and c/2 + 1/2, of half-width r/2.
        for (int branch = 0; branch < 2; ++branch) {
            long double center = c * 0.5L + 0.5L * branch;
            long double off = center - th0;
            off -= std::roundl(off);  // signed wrapped distance in (-1/2, 1/2]
            long double lo = off - r * 0.5L, hi = off + r * 0.5L;
            if (hi <= -sig || lo >= sig) continue;
            ivals.emplace_back(std::max(lo, -sig), std::min(hi, sig));
        }
    }
    std::sort(ivals.begin(), ivals.end());
    long double covered = 0;
    long double cur_lo = 0, cur_hi = 0;
    bool open = false;
    for (auto& iv : ivals) {
        if (!open) { cur_lo = iv.first; cur_hi = iv.second; open = true; continue; }
        if (iv.first <= cur_hi) cur_hi = std::max(cur_hi, iv.second);
        else { covered += cur_hi - cur_lo; cur_lo = iv.first; cur_hi = iv.second; }
    }
    if (open) covered += cur_hi - cur_lo;
    out.intervals_hit = static_cast<int>(ivals.size());

    // Tail over |k| > k_cut: count of sup-norm shell j is (2j+1)^d - (2j-1)^d,
    // each contributing theta-measure at most min(2 sigma, 2 gamma (j+1)^{-tau'}).
    long double tail = 0;
    for (long double j = k_cut + 1;; j += 1.0L) {
        long double shell = std::pow(2.0L * j + 1.0L, static_cast<long double>(d)) -
                            std::pow(2.0L * j - 1.0L, static_cast<long double>(d));
        long double lr = lgam - static_cast<long double>(tau_prime) * std::log(j + 1.0L);
        long double m = lr < -11500.0L ? 0.0L : std::exp(lr);
        long double add = shell * std::min(2.0L * sig, 2.0L * m);
        tail += add;
        if (add < 1e-30L * std::max(tail, 1e-300L) || add == 0.0L) break;
        if (j > 1e7L) break;
    }
    if (tail > sig) {
        // find the cutoff that would tame the tail and report it
        throw std::invalid_argument("homogeneity_estimate: k_cut too small, tail bound " + std::to_string(static_cast<double>(tail)) +
                                    " exceeds sigma; increase k_cut");
    }
    out.tail_bound = static_cast<double>(tail);
    out.excluded_measure = static_cast<double>(covered + tail);
    out.ratio = static_cast<double>((2.0L * sig - (covered + tail)) / (2.0L * sig));
    return out;
}

}  // namespace qpl
