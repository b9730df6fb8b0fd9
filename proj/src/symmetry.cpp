#include "ersr/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ersr/rng.hpp"

namespace ersr {
namespace {

double to_rad(double deg) {
    return deg * std::numbers::pi / 180.0;
}

double wrap180(double deg) {
    double t = std::fmod(deg, 180.0);
    if (t < 0) t += 180.0;
    return t == 180.0 ? 0.0 : t;
}

struct BBox {
    int rmin, rmax, cmin, cmax;
};

BBox mask_bbox(const BinaryMask& m) {
    BBox b{m.height - 1, 0, m.width - 1, 0};
    bool any = false;
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            if (!m.at(r, c)) continue;
            any = true;
            b.rmin = std::min(b.rmin, r);
            b.rmax = std::max(b.rmax, r);
            b.cmin = std::min(b.cmin, c);
            b.cmax = std::max(b.cmax, c);
        }
    }
    if (!any) {
        const int rc = m.height / 2, cc = m.width / 2;
        return {rc, rc, cc, cc};
    }
    return b;
}

// nearest-neighbor pixel of a continuous (a, b) location
std::array<int, 2> nearest_pixel(const std::array<double, 2>& p) {
    return {static_cast<int>(std::lround(p[0])), static_cast<int>(std::lround(p[1]))};
}

} // namespace

SymmetryAxis make_axis(const EllipseParams& e, AxisKind kind, const BinaryMask& mask,
                       std::uint64_t seed) {
    SymmetryAxis axis;
    axis.kind = kind;
    axis.center_a = e.center_a;
    axis.center_b = e.center_b;
    switch (kind) {
    case AxisKind::Major:
        axis.theta_deg = wrap180(e.theta_deg);
        break;
    case AxisKind::Minor:
        axis.theta_deg = wrap180(e.theta_deg + 90.0);
        break;
    case AxisKind::Random: {
        Rng rng = Rng::derive(seed, 0x617869u); // "axi"
        axis.theta_deg = rng.uniform(0.0, 180.0);
        break;
    }
    case AxisKind::Horizontal: {
        Rng rng = Rng::derive(seed, 0x686f72u); // "hor"
        const BBox b = mask_bbox(mask);
        axis.theta_deg = 0.0;
        axis.center_a = (mask.width - 1) / 2.0;
        axis.center_b = static_cast<double>(rng.uniform_int(b.rmin, b.rmax));
        break;
    }
    case AxisKind::Vertical: {
        Rng rng = Rng::derive(seed, 0x766572u); // "ver"
        const BBox b = mask_bbox(mask);
        axis.theta_deg = 90.0;
        axis.center_a = static_cast<double>(rng.uniform_int(b.cmin, b.cmax));
        axis.center_b = (mask.height - 1) / 2.0;
        break;
    }
    }
    return axis;
}

std::array<double, 2> reflect_point(double a, double b, const SymmetryAxis& axis) {
    const double th = to_rad(axis.theta_deg);
    const double ux = std::cos(th), uy = std::sin(th);
    const double dx = a - axis.center_a, dy = b - axis.center_b;
    const double proj = dx * ux + dy * uy;
    return {2.0 * proj * ux - dx + axis.center_a, 2.0 * proj * uy - dy + axis.center_b};
}

double side_coordinate(double a, double b, const SymmetryAxis& axis, SplitMode mode) {
    const double th = to_rad(axis.theta_deg);
    const double dx = a - axis.center_a, dy = b - axis.center_b;
    if (mode == SplitMode::Literal) return dx * std::cos(th) + dy * std::sin(th);
    return -dx * std::sin(th) + dy * std::cos(th);
}

HalfPlaneMasks split_halves(const SymmetryAxis& axis, int height, int width, SplitMode mode) {
    HalfPlaneMasks h{BinaryMask(height, width), BinaryMask(height, width)};
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const bool left = side_coordinate(c, r, axis, mode) < 0.0;
            h.left.at(r, c) = left ? 1 : 0;
            h.right.at(r, c) = left ? 0 : 1;
        }
    }
    return h;
}

AugmentedPair compose_symmetric_images(const FloatGrid& x, const BinaryMask& m,
                                       const SymmetryAxis& axis, SplitMode mode,
                                       const PerturbationParams& perturb, std::uint64_t seed) {
    if (x.height != m.height || x.width != m.width)
        throw Error("compose_symmetric_images: image/mask dimension mismatch");

    const int h = x.height, w = x.width;
    AugmentedPair out{FloatGrid(h, w), FloatGrid(h, w), seed};

    // piece streams: {s1 own, s1 mirror, s2 own, s2 mirror}
    Rng piece_rng[4] = {Rng::derive(seed, 1), Rng::derive(seed, 2), Rng::derive(seed, 3),
                        Rng::derive(seed, 4)};
    double jitter[4] = {1.0, 1.0, 1.0, 1.0};
    if (perturb.enabled)
        for (int i = 0; i < 4; ++i)
            jitter[i] = piece_rng[i].uniform(perturb.jitter_lo, perturb.jitter_hi);

    auto sample = [&](double v, int piece) {
        if (!perturb.enabled) return v;
        return v * jitter[piece] + piece_rng[piece].normal(0.0, perturb.noise_sigma);
    };

    // Paste semantics per output pixel: kept-half foreground wins, then the
    // mirrored half pasted at its reflected destination, then background.
    // Dropped-half foreground with no paste coverage reads 0. Keeping the
    // genuine pixel first makes the on-axis line well defined (it belongs to
    // both kept halves and is never doubled).
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double side = side_coordinate(c, r, axis, mode);
            const auto [ma, mb] = nearest_pixel(reflect_point(c, r, axis));
            const bool mirror_in = ma >= 0 && ma < w && mb >= 0 && mb < h;
            const double mside = mirror_in ? side_coordinate(ma, mb, axis, mode) : 0.0;
            const bool mirror_fg = mirror_in && m.at(mb, ma) != 0;
            const bool fg = m.at(r, c) != 0;

            double s1, s2;
            if (fg && side <= 0.0) s1 = sample(x.at(r, c), 0);
            else if (mirror_fg && mside <= 0.0) s1 = sample(x.at(mb, ma), 1);
            else if (!fg) s1 = x.at(r, c);
            else s1 = 0.0;

            if (fg && side >= 0.0) s2 = sample(x.at(r, c), 2);
            else if (mirror_fg && mside >= 0.0) s2 = sample(x.at(mb, ma), 3);
            else if (!fg) s2 = x.at(r, c);
            else s2 = 0.0;

            out.s1.at(r, c) = std::clamp(s1, 0.0, 1.0);
            out.s2.at(r, c) = std::clamp(s2, 0.0, 1.0);
        }
    }
    return out;
}

std::pair<FloatGrid, FloatGrid> mirror_prediction(const FloatGrid& p_o, const SymmetryAxis& axis,
                                                  const HalfPlaneMasks& halves) {
    const int h = p_o.height, w = p_o.width;
    FloatGrid p1(h, w), p2(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const auto [ma, mb] = nearest_pixel(reflect_point(c, r, axis));
            const double reflected =
                (ma >= 0 && ma < w && mb >= 0 && mb < h) ? p_o.at(mb, ma) : 0.0;
            if (halves.left.at(r, c)) {
                p1.at(r, c) = p_o.at(r, c);
                p2.at(r, c) = reflected;
            } else {
                p1.at(r, c) = reflected;
                p2.at(r, c) = p_o.at(r, c);
            }
        }
    }
    return {std::move(p1), std::move(p2)};
}

std::pair<FloatGrid, FloatGrid> decompose_prediction(const FloatGrid& p_si,
                                                     const SymmetryAxis& axis, SplitMode mode,
                                                     const BinaryMask* foreground) {
    const int h = p_si.height, w = p_si.width;
    FloatGrid p1(h, w), p2(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double side = side_coordinate(c, r, axis, mode);
            const bool fg_here = foreground == nullptr || foreground->at(r, c) != 0;
            if (side <= 0.0 && fg_here) p1.at(r, c) = p_si.at(r, c);

            const auto [ma, mb] = nearest_pixel(reflect_point(c, r, axis));
            if (ma >= 0 && ma < w && mb >= 0 && mb < h) {
                const double mside = side_coordinate(ma, mb, axis, mode);
                const bool fg_there = foreground == nullptr || foreground->at(mb, ma) != 0;
                if (mside >= 0.0 && fg_there) p2.at(r, c) = p_si.at(mb, ma);
            }
        }
    }
    return {std::move(p1), std::move(p2)};
}

} // namespace ersr
