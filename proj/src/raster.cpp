#include "ersr/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ersr {

FloatGrid::FloatGrid(int h, int w, double fill) : height(h), width(w) {
    if (h < 1 || w < 1)
        throw Error("FloatGrid dimensions must be >= 1, got " + std::to_string(h) + "x" +
                    std::to_string(w));
    data.assign(static_cast<std::size_t>(h) * w, fill);
}

BinaryMask::BinaryMask(int h, int w, std::uint8_t fill) : height(h), width(w) {
    if (h < 1 || w < 1)
        throw Error("BinaryMask dimensions must be >= 1, got " + std::to_string(h) + "x" +
                    std::to_string(w));
    data.assign(static_cast<std::size_t>(h) * w, fill);
}

std::size_t BinaryMask::foreground_count() const {
    return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

Kernel3x3 sobel_horizontal() {
    return Kernel3x3{{-1, 0, 1, -2, 0, 2, -1, 0, 1}};
}

Kernel3x3 sobel_vertical() {
    return Kernel3x3{{-1, -2, -1, 0, 0, 0, 1, 2, 1}};
}

Kernel3x3 laplacian4() {
    return Kernel3x3{{0, 1, 0, 1, -4, 1, 0, 1, 0}};
}

FloatGrid convolve3x3(const FloatGrid& grid, const Kernel3x3& kernel) {
    const int h = grid.height, w = grid.width;
    FloatGrid out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                const int rr = std::clamp(r + dr, 0, h - 1);
                for (int dc = -1; dc <= 1; ++dc) {
                    const int cc = std::clamp(c + dc, 0, w - 1);
                    acc += kernel.at(dr, dc) * grid.at(rr, cc);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

BinaryMask binarize(const FloatGrid& p, double tau) {
    BinaryMask m(p.height, p.width);
    for (std::size_t i = 0; i < p.data.size(); ++i)
        m.data[i] = p.data[i] > tau ? 1 : 0;
    return m;
}

void validate_range(const FloatGrid& g, double lo, double hi, const char* what) {
    for (double v : g.data) {
        if (!std::isfinite(v) || v < lo || v > hi)
            throw Error(std::string(what) + ": value " + std::to_string(v) + " outside [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

} // namespace ersr
