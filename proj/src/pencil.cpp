#include "pencil.hpp"

#include <stdexcept>

#include "fft.hpp"
#include "taupint/tau.hpp"

namespace taupint::detail {

AxisGeometry axis_geometry(std::span<const std::size_t> extents, std::size_t axis) {
    if (axis >= extents.size()) throw std::out_of_range("axis_geometry: axis out of range");
    AxisGeometry g;
    std::size_t total = 1;
    for (std::size_t i = 0; i < extents.size(); ++i) {
        if (i < axis) g.stride *= extents[i];
        total *= extents[i];
    }
    g.length = extents[axis];
    g.count = total / g.length;
    return g;
}

namespace {

inline std::size_t pencil_base(const AxisGeometry& g, std::size_t p) {
    const std::size_t outer = p / g.stride;
    const std::size_t inner = p % g.stride;
    return outer * g.stride * g.length + inner;
}

}  // namespace

void accumulate_axis_toeplitz(const Toeplitz1D& T, std::span<const double> x, std::span<double> y,
                              std::span<const std::size_t> extents, std::size_t axis,
                              double scale) {
    const AxisGeometry g = axis_geometry(extents, axis);
    if (T.size() != g.length) throw std::invalid_argument("accumulate_axis_toeplitz: size mismatch");
    const auto count = static_cast<std::ptrdiff_t>(g.count);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
        auto& s = thread_scratch();
        s.pencil_in.reserve(g.length);
        s.pencil_out.reserve(g.length);
        const std::size_t base = pencil_base(g, static_cast<std::size_t>(p));
        double* in = s.pencil_in.data();
        double* out = s.pencil_out.data();
        for (std::size_t k = 0; k < g.length; ++k) in[k] = x[base + k * g.stride];
        T.apply({in, g.length}, {out, g.length});
        for (std::size_t k = 0; k < g.length; ++k) y[base + k * g.stride] += scale * out[k];
    }
}

void dst_axis(std::span<double> x, std::span<const std::size_t> extents, std::size_t axis) {
    const AxisGeometry g = axis_geometry(extents, axis);
    const auto count = static_cast<std::ptrdiff_t>(g.count);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
        auto& s = thread_scratch();
        s.pencil_in.reserve(g.length);
        const std::size_t base = pencil_base(g, static_cast<std::size_t>(p));
        double* buf = s.pencil_in.data();
        for (std::size_t k = 0; k < g.length; ++k) buf[k] = x[base + k * g.stride];
        dst1_inplace({buf, g.length});
        for (std::size_t k = 0; k < g.length; ++k) x[base + k * g.stride] = buf[k];
    }
}

void dst_all_axes(std::span<double> x, std::span<const std::size_t> extents) {
    for (std::size_t axis = 0; axis < extents.size(); ++axis) dst_axis(x, extents, axis);
}

}  // namespace taupint::detail
