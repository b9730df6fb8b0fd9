#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ersr/errors.hpp"

namespace ersr {

/// H x W raster of real values, row-major. Probability maps keep values in
/// [0,1]; derived surfaces (gradients, distance fields) may hold any finite
/// value. Values are stored as doubles; the 32-bit file format quantizes at
/// I/O time.
///
/// Coordinate convention: (a, b) = (column, row), origin top-left, b grows
/// downward. Accessors take (row, col) to match storage order.
struct FloatGrid {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    FloatGrid() = default;
    FloatGrid(int h, int w, double fill = 0.0);

    double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    std::size_t size() const { return data.size(); }
    bool same_shape(const FloatGrid& o) const { return height == o.height && width == o.width; }
};

/// H x W raster of {0,1}.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int h, int w, std::uint8_t fill = 0);

    std::uint8_t& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    std::size_t size() const { return data.size(); }
    bool same_shape(const BinaryMask& o) const { return height == o.height && width == o.width; }
    std::size_t foreground_count() const;
};

/// Fixed 3x3 stencil, row-major weights.
struct Kernel3x3 {
    std::array<double, 9> w{};

    double at(int dr, int dc) const { return w[static_cast<std::size_t>((dr + 1) * 3 + (dc + 1))]; }
};

/// Standard unnormalized Sobel pair. sobel_horizontal() responds to
/// left-to-right intensity change; sobel_vertical() is its transpose.
Kernel3x3 sobel_horizontal();
Kernel3x3 sobel_vertical();

/// 4-neighbor Laplacian: [[0,1,0],[1,-4,1],[0,1,0]].
Kernel3x3 laplacian4();

/// Correlation of the kernel with the replicate-padded neighborhood of each
/// pixel. Output has the same dimensions as the input.
FloatGrid convolve3x3(const FloatGrid& grid, const Kernel3x3& kernel);

/// mask(i,j) = 1 iff p(i,j) > tau (strict).
BinaryMask binarize(const FloatGrid& p, double tau);

/// Throws Error unless every value is finite and within [lo, hi].
void validate_range(const FloatGrid& g, double lo, double hi, const char* what);

} // namespace ersr
