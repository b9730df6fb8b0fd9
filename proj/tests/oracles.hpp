// Brute-force reference implementations used to pin expected values.
// Everything here is deliberately independent of the library's fast paths:
// direct loops, all-pairs scans, and literal formula transcriptions only.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ersr/raster.hpp"

namespace oracle {

// direct correlation with replicate padding
inline ersr::FloatGrid correlate3x3(const ersr::FloatGrid& g, const ersr::Kernel3x3& k) {
    ersr::FloatGrid out(g.height, g.width);
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    rr = rr < 0 ? 0 : (rr >= g.height ? g.height - 1 : rr);
                    cc = cc < 0 ? 0 : (cc >= g.width ? g.width - 1 : cc);
                    acc += k.at(dr, dc) * g.at(rr, cc);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

// all-pairs nearest-background distance; sqrt of exact integer squared
// distances; all-foreground handled with the sqrt(H^2+W^2) sentinel
inline ersr::FloatGrid edt_all_pairs(const ersr::BinaryMask& m) {
    const int h = m.height, w = m.width;
    std::vector<std::pair<int, int>> background;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (!m.at(r, c)) background.emplace_back(r, c);

    ersr::FloatGrid out(h, w);
    if (background.empty()) {
        const double sentinel = std::sqrt(double(h) * h + double(w) * w);
        std::fill(out.data.begin(), out.data.end(), sentinel);
        return out;
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!m.at(r, c)) continue;
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const auto& [br, bc] : background) {
                const std::int64_t dr = r - br, dc = c - bc;
                best = std::min(best, dr * dr + dc * dc);
            }
            out.at(r, c) = std::sqrt(static_cast<double>(best));
        }
    }
    return out;
}

// surface pixels by the same 4-neighbor definition, written out directly
inline std::vector<std::pair<int, int>> surface_points(const ersr::BinaryMask& m) {
    std::vector<std::pair<int, int>> pts;
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            if (!m.at(r, c)) continue;
            const bool border = r == 0 || r == m.height - 1 || c == 0 || c == m.width - 1;
            if (border || !m.at(r - 1, c) || !m.at(r + 1, c) || !m.at(r, c - 1) ||
                !m.at(r, c + 1))
                pts.emplace_back(r, c);
        }
    }
    return pts;
}

inline std::vector<double> directed_all_pairs(const std::vector<std::pair<int, int>>& from,
                                              const std::vector<std::pair<int, int>>& to) {
    std::vector<double> out;
    out.reserve(from.size());
    for (const auto& [r, c] : from) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (const auto& [tr, tc] : to) {
            const std::int64_t dr = r - tr, dc = c - tc;
            best = std::min(best, dr * dr + dc * dc);
        }
        out.push_back(std::sqrt(static_cast<double>(best)));
    }
    return out;
}

// linear-interpolated percentile between order statistics
inline double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double rank = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (rank - lo) * (values[lo + 1] - values[lo]);
}

struct SurfacePair {
    std::vector<double> pooled;
    bool defined = true;
};

inline SurfacePair pooled_surface_distances(const ersr::BinaryMask& a, const ersr::BinaryMask& b) {
    const auto sa = surface_points(a);
    const auto sb = surface_points(b);
    SurfacePair sp;
    if (sa.empty() || sb.empty()) {
        sp.defined = false;
        return sp;
    }
    sp.pooled = directed_all_pairs(sa, sb);
    const auto back = directed_all_pairs(sb, sa);
    sp.pooled.insert(sp.pooled.end(), back.begin(), back.end());
    return sp;
}

inline double hd95_all_pairs(const ersr::BinaryMask& a, const ersr::BinaryMask& b,
                             double spacing) {
    const auto sp = pooled_surface_distances(a, b);
    return percentile(sp.pooled, 0.95) * spacing;
}

inline double asd_all_pairs(const ersr::BinaryMask& a, const ersr::BinaryMask& b, double spacing) {
    const auto sp = pooled_surface_distances(a, b);
    double sum = 0.0;
    for (double d : sp.pooled) sum += d;
    return sum / static_cast<double>(sp.pooled.size()) * spacing;
}

// literal transcriptions of the rotating-frame formulas (degrees)
inline std::pair<double, double> rotate_formula(double a, double b, double ca, double cb,
                                                double theta_deg) {
    const double t = theta_deg * 3.14159265358979323846 / 180.0;
    return {(a - ca) * std::cos(t) + (b - cb) * std::sin(t),
            -(a - ca) * std::sin(t) + (b - cb) * std::cos(t)};
}

inline double elliptical_distance_formula(double a, double b, double ca, double cb,
                                          double axis_major, double axis_minor,
                                          double theta_deg) {
    const auto [ar, br] = rotate_formula(a, b, ca, cb, theta_deg);
    const double u = ar / (axis_major / 2.0);
    const double v = br / (axis_minor / 2.0);
    return u * u + v * v;
}

inline std::pair<double, double> reflect_formula(double a, double b, double ca, double cb,
                                                 double theta_deg) {
    const double t = theta_deg * 3.14159265358979323846 / 180.0;
    const double ux = std::cos(t), uy = std::sin(t);
    const double dx = a - ca, dy = b - cb;
    const double proj = dx * ux + dy * uy;
    return {2.0 * proj * ux - dx + ca, 2.0 * proj * uy - dy + cb};
}

// test-data helpers
inline ersr::BinaryMask random_mask(std::mt19937& rng, int h, int w, double p_fg) {
    ersr::BinaryMask m(h, w);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : m.data) v = u(rng) < p_fg ? 1 : 0;
    return m;
}

// a random blob: filled disk plus salt noise, guaranteed non-empty surface
inline ersr::BinaryMask random_blob(std::mt19937& rng, int h, int w) {
    ersr::BinaryMask m(h, w);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cr = u(rng) * (h - 1);
    const double cc = u(rng) * (w - 1);
    const double radius = 1.0 + u(rng) * (std::min(h, w) / 3.0);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if ((r - cr) * (r - cr) + (c - cc) * (c - cc) <= radius * radius) m.at(r, c) = 1;
    for (int i = 0; i < 5; ++i)
        m.at(static_cast<int>(u(rng) * h) % h, static_cast<int>(u(rng) * w) % w) = 1;
    return m;
}

inline ersr::FloatGrid random_grid(std::mt19937& rng, int h, int w, double lo = 0.0,
                                   double hi = 1.0) {
    ersr::FloatGrid g(h, w);
    std::uniform_real_distribution<double> u(lo, hi);
    for (auto& v : g.data) v = u(rng);
    return g;
}

} // namespace oracle
