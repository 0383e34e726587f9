#pragma once

#include <array>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qpl {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Point on the torus T^d, d <= 3. Components live in [0,1).
struct TorusPoint {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int d = 1;

    static TorusPoint zero(int dim) { return TorusPoint{{0.0, 0.0, 0.0}, dim}; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

/// Reduce to [0,1).
inline double frac(double x) {
    double f = x - std::floor(x);
    return (f >= 1.0) ? f - 1.0 : f;
}

inline long double fracl(long double x) {
    long double f = x - std::floor(x);
    return (f >= 1.0L) ? f - 1.0L : f;
}

/// Distance to the nearest integer, reduction to [-1/2,1/2].
inline double dist_to_int(double x) {
    double f = x - std::round(x);
    return std::abs(f);
}

inline long double dist_to_intl(long double x) {
    long double f = x - std::roundl(x);
    return std::fabs(f);
}

/// Signed reduction of x to (-1/2, 1/2].
inline double wrap_half(double x) {
    double f = x - std::round(x);
    if (f <= -0.5) f += 1.0;
    return f;
}

inline TorusPoint advance(const TorusPoint& x, const std::vector<double>& alpha) {
    TorusPoint y = x;
    for (int i = 0; i < x.d; ++i) y.c[static_cast<size_t>(i)] = frac(y.c[static_cast<size_t>(i)] + alpha[static_cast<size_t>(i)]);
    return y;
}

// ---------------------------------------------------------------------------
// Deterministic RNG. Streams are keyed by (seed, index) so results do not
// depend on scheduling or thread count.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : state(splitmix64(seed ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1))) {}
    uint64_t next_u64() {
        state = splitmix64(state);
        return state;
    }
    double next_double() {  // uniform in [0,1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }
};

// ---------------------------------------------------------------------------
// Deterministic parallel map: each task writes only its own slot, results are
// identical for any worker count.
// ---------------------------------------------------------------------------

inline int default_thread_count() {
    if (const char* env = std::getenv("QPL_THREADS")) {
        int k = std::atoi(env);
        if (k >= 1) return k;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline void parallel_for(size_t n, const std::function<void(size_t)>& body, int threads = 0) {
    if (threads <= 0) threads = default_thread_count();
    threads = static_cast<int>(std::min<size_t>(static_cast<size_t>(threads), n == 0 ? 1 : n));
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    std::atomic<size_t> counter{0};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                size_t i = counter.fetch_add(1);
                if (i >= n) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Multi-index boxes {k in Z^d : |k_i| <= K_i}, used for Fourier supports and
// lattice truncations.
// ---------------------------------------------------------------------------

struct IndexBox {
    std::vector<int> radius;  // per-axis radius

    int dim() const { return static_cast<int>(radius.size()); }
    size_t size() const {
        size_t s = 1;
        for (int r : radius) s *= static_cast<size_t>(2 * r + 1);
        return s;
    }
    size_t flatten(const std::vector<int>& k) const {
        size_t idx = 0;
        for (int i = 0; i < dim(); ++i) {
            int r = radius[static_cast<size_t>(i)];
            int o = k[static_cast<size_t>(i)] + r;
            idx = idx * static_cast<size_t>(2 * r + 1) + static_cast<size_t>(o);
        }
        return idx;
    }
    std::vector<int> unflatten(size_t idx) const {
        std::vector<int> k(static_cast<size_t>(dim()));
        for (int i = dim() - 1; i >= 0; --i) {
            int w = 2 * radius[static_cast<size_t>(i)] + 1;
            k[static_cast<size_t>(i)] = static_cast<int>(idx % static_cast<size_t>(w)) - radius[static_cast<size_t>(i)];
            idx /= static_cast<size_t>(w);
        }
        return k;
    }
};

inline int sup_norm(const std::vector<int>& k) {
    int m = 0;
    for (int v : k) m = std::max(m, std::abs(v));
    return m;
}

inline double dot(const std::vector<int>& k, const std::vector<double>& alpha) {
    double s = 0;
    for (size_t i = 0; i < k.size(); ++i) s += k[i] * alpha[i];
    return s;
}

inline long double dotl(const std::vector<int>& k, const std::vector<long double>& alpha) {
    long double s = 0;
    for (size_t i = 0; i < k.size(); ++i) s += k[i] * alpha[i];
    return s;
}

}  // namespace qpl
