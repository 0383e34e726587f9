#pragma once

#include <complex>
#include <vector>

#include "qpl/common.hpp"
#include "qpl/linalg.hpp"

namespace qpl {

// ---------------------------------------------------------------------------
// Dense trigonometric fields on T^d (d <= 3): samples on a uniform G^d grid
// and coefficients on an IndexBox. Transforms are separable axis-by-axis
// partial DFTs; with G >= 4*K the analyze/synthesize pair is exact for fields
// band-limited inside the box and aliasing stays below coefficient decay.
// ---------------------------------------------------------------------------

namespace fourier {

/// Contract one axis of a flat tensor with a dense matrix:
/// out[..., r, ...] = sum_c M[r*in_size + c] * in[..., c, ...].
template <class T>
std::vector<T> transform_axis(const std::vector<T>& in, std::vector<int>& shape, int axis,
                              const std::vector<cplx>& m, int out_size) {
    int d = static_cast<int>(shape.size());
    size_t outer = 1, inner = 1;
    for (int i = 0; i < axis; ++i) outer *= static_cast<size_t>(shape[static_cast<size_t>(i)]);
    for (int i = axis + 1; i < d; ++i) inner *= static_cast<size_t>(shape[static_cast<size_t>(i)]);
    size_t in_size = static_cast<size_t>(shape[static_cast<size_t>(axis)]);
    std::vector<T> out(outer * static_cast<size_t>(out_size) * inner, T{} * cplx(0, 0));
    for (size_t o = 0; o < outer; ++o) {
        const T* in_o = in.data() + o * in_size * inner;
        T* out_o = out.data() + o * static_cast<size_t>(out_size) * inner;
        for (int r = 0; r < out_size; ++r) {
            const cplx* mr = m.data() + static_cast<size_t>(r) * in_size;
            T* dst = out_o + static_cast<size_t>(r) * inner;
            for (size_t c = 0; c < in_size; ++c) {
                cplx w = mr[c];
                const T* src = in_o + c * inner;
                for (size_t i = 0; i < inner; ++i) dst[i] = dst[i] + src[i] * w;
            }
        }
    }
    shape[static_cast<size_t>(axis)] = out_size;
    return out;
}

}  // namespace fourier

/// Grid -> coefficients on the box: fhat(k) = (1/G^d) sum_x f(x) e^{-2 pi i <k,x>}.
template <class T>
std::vector<T> analyze_grid(std::vector<T> grid, int d, int g, const IndexBox& box) {
    std::vector<int> shape(static_cast<size_t>(d), g);
    for (int axis = 0; axis < d; ++axis) {
        int k_r = box.radius[static_cast<size_t>(axis)];
        int out = 2 * k_r + 1;
        std::vector<cplx> m(static_cast<size_t>(out) * static_cast<size_t>(g));
        for (int r = 0; r < out; ++r) {
            int k = r - k_r;
            for (int i = 0; i < g; ++i)
                m[static_cast<size_t>(r) * g + i] = std::polar(1.0 / g, -two_pi * k * static_cast<double>(i) / g);
        }
        grid = fourier::transform_axis(grid, shape, axis, m, out);
    }
    return grid;
}

/// Coefficients -> samples at x_i = i/G + offset (per axis).
template <class T>
std::vector<T> synthesize_grid(const std::vector<T>& coef, const IndexBox& box, int g,
                               const std::vector<double>& offset) {
    int d = box.dim();
    std::vector<int> shape(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) shape[static_cast<size_t>(i)] = 2 * box.radius[static_cast<size_t>(i)] + 1;
    std::vector<T> data = coef;
    for (int axis = 0; axis < d; ++axis) {
        int k_r = box.radius[static_cast<size_t>(axis)];
        int in = 2 * k_r + 1;
        double off = offset.empty() ? 0.0 : offset[static_cast<size_t>(axis)];
        std::vector<cplx> m(static_cast<size_t>(g) * static_cast<size_t>(in));
        for (int i = 0; i < g; ++i) {
            double x = static_cast<double>(i) / g + off;
            for (int r = 0; r < in; ++r)
                m[static_cast<size_t>(i) * in + r] = std::polar(1.0, two_pi * (r - k_r) * x);
        }
        data = fourier::transform_axis(data, shape, axis, m, g);
    }
    return data;
}

/// Single-point synthesis (direct sum over the box).
template <class T>
T eval_field(const std::vector<T>& coef, const IndexBox& box, const std::vector<double>& x) {
    T acc = coef[0] * cplx(0, 0);
    for (size_t i = 0; i < coef.size(); ++i) {
        auto k = box.unflatten(i);
        double ph = 0;
        for (size_t a = 0; a < k.size(); ++a) ph += k[a] * x[a];
        acc = acc + coef[i] * std::polar(1.0, two_pi * ph);
    }
    return acc;
}

}  // namespace qpl
