#pragma once

// Batched 1D kernels over one axis of a tensor stored with axis 0 fastest.

#include <cstddef>
#include <span>

#include "taupint/toeplitz.hpp"

namespace taupint::detail {

struct AxisGeometry {
    std::size_t stride = 1;  ///< distance between consecutive pencil entries
    std::size_t length = 1;  ///< pencil length (extent of the axis)
    std::size_t count = 1;   ///< number of pencils
};

AxisGeometry axis_geometry(std::span<const std::size_t> extents, std::size_t axis);

/// y += scale * T applied along `axis` of x.
void accumulate_axis_toeplitz(const Toeplitz1D& T, std::span<const double> x, std::span<double> y,
                              std::span<const std::size_t> extents, std::size_t axis,
                              double scale);

/// Orthonormal DST-I along `axis`, in place.
void dst_axis(std::span<double> x, std::span<const std::size_t> extents, std::size_t axis);

/// Applies the separable transform S_0 (x) S_1 (x) ... over all axes, in place.
void dst_all_axes(std::span<double> x, std::span<const std::size_t> extents);

}  // namespace taupint::detail
