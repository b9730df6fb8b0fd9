#include "ersr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ersr/dsaf.hpp"

namespace ersr {
namespace {

void check_shape(const BinaryMask& a, const BinaryMask& b, const char* where) {
    if (!a.same_shape(b)) throw Error(std::string(where) + ": dimension mismatch");
}

std::vector<double> directed_distances(const BinaryMask& from_surface,
                                       const FloatGrid& to_field) {
    std::vector<double> out;
    for (int r = 0; r < from_surface.height; ++r)
        for (int c = 0; c < from_surface.width; ++c)
            if (from_surface.at(r, c)) out.push_back(to_field.at(r, c));
    return out;
}

double percentile95(std::vector<double> pooled) {
    std::sort(pooled.begin(), pooled.end());
    const double rank = 0.95 * static_cast<double>(pooled.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= pooled.size()) return pooled.back();
    const double frac = rank - static_cast<double>(lo);
    return pooled[lo] + frac * (pooled[lo + 1] - pooled[lo]);
}

std::vector<double> pooled(const SurfaceDistanceSet& s) {
    std::vector<double> all = s.a_to_b;
    all.insert(all.end(), s.b_to_a.begin(), s.b_to_a.end());
    return all;
}

} // namespace

BinaryMask surface(const BinaryMask& m) {
    const int h = m.height, w = m.width;
    BinaryMask out(h, w);
    constexpr int dr[4] = {1, -1, 0, 0};
    constexpr int dc[4] = {0, 0, 1, -1};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!m.at(r, c)) continue;
            for (int k = 0; k < 4; ++k) {
                const int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nr >= h || nc < 0 || nc >= w || !m.at(nr, nc)) {
                    out.at(r, c) = 1;
                    break;
                }
            }
        }
    }
    return out;
}

SurfaceDistanceSet surface_distances(const BinaryMask& a, const BinaryMask& b, double spacing) {
    check_shape(a, b, "surface_distances");
    const BinaryMask sa = surface(a);
    const BinaryMask sb = surface(b);
    if (sa.foreground_count() == 0 || sb.foreground_count() == 0)
        throw MetricUndefinedError("surface distance undefined: empty surface");

    const FloatGrid to_b = distance_to_nearest(sb);
    const FloatGrid to_a = distance_to_nearest(sa);
    SurfaceDistanceSet s;
    s.pixel_spacing = spacing;
    s.a_to_b = directed_distances(sa, to_b);
    s.b_to_a = directed_distances(sb, to_a);
    return s;
}

double dice_score(const BinaryMask& a, const BinaryMask& b) {
    check_shape(a, b, "dice_score");
    std::size_t inter = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        na += a.data[i];
        nb += b.data[i];
        inter += static_cast<std::size_t>(a.data[i] & b.data[i]);
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

double hd95(const BinaryMask& a, const BinaryMask& b, double spacing) {
    const auto s = surface_distances(a, b, spacing);
    return percentile95(pooled(s)) * spacing;
}

double asd(const BinaryMask& a, const BinaryMask& b, double spacing) {
    const auto s = surface_distances(a, b, spacing);
    const auto all = pooled(s);
    double sum = 0.0;
    for (double d : all) sum += d;
    return sum / static_cast<double>(all.size()) * spacing;
}

} // namespace ersr
