#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ersr/ellipse.hpp"
#include "oracles.hpp"

using namespace ersr;

namespace {

// rasterize with the literal formula so the generator is independent of the
// implementation under test
BinaryMask rasterize_ellipse(int size, double ca, double cb, double semi_a, double semi_b,
                             double theta_deg) {
    BinaryMask m(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            if (oracle::elliptical_distance_formula(c, r, ca, cb, 2 * semi_a, 2 * semi_b,
                                                    theta_deg) <= 1.0)
                m.at(r, c) = 1;
    return m;
}

double angle_diff_mod180(double a, double b) {
    double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

} // namespace

TEST_CASE("largest component keeps only the biggest blob") {
    BinaryMask m(10, 12);
    // blob A: 3x4 = 12 pixels
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 4; ++c) m.at(r, c) = 1;
    // blob B: 5 pixels
    for (int c = 7; c <= 11; ++c) m.at(8, c) = 1;
    const BinaryMask out = largest_component(m);
    CHECK(out.foreground_count() == 12);
    CHECK(out.at(2, 2) == 1);
    CHECK(out.at(8, 8) == 0);
}

TEST_CASE("single blob is returned unchanged") {
    BinaryMask m(6, 6);
    for (int r = 2; r <= 4; ++r)
        for (int c = 1; c <= 3; ++c) m.at(r, c) = 1;
    CHECK(largest_component(m).data == m.data);
}

TEST_CASE("anti-diagonal pair is one component under 8-connectivity") {
    BinaryMask m(4, 4);
    m.at(1, 2) = 1;
    m.at(2, 1) = 1;
    const auto cl = label_components(m);
    CHECK(cl.sizes.size() == 2); // background slot + one component
    CHECK(cl.sizes[1] == 2);
}

TEST_CASE("largest component errors on empty foreground") {
    CHECK_THROWS_AS(largest_component(BinaryMask(5, 5)), EmptyMaskError);
}

TEST_CASE("component size tie breaks to the earliest row-major pixel") {
    BinaryMask m(5, 9);
    m.at(1, 6) = 1; // later in row-major order than (1,1)...
    m.at(1, 1) = 1;
    m.at(2, 1) = 1;
    m.at(2, 6) = 1;
    const BinaryMask out = largest_component(m);
    CHECK(out.at(1, 1) == 1);
    CHECK(out.at(1, 6) == 0);
}

TEST_CASE("fit recovers a rasterized axis-aligned ellipse") {
    const BinaryMask m = rasterize_ellipse(64, 32, 32, 20, 10, 0.0);
    const EllipseParams e = fit_ellipse(m);
    CHECK(std::abs(e.center_a - 32) < 0.5);
    CHECK(std::abs(e.center_b - 32) < 0.5);
    CHECK(std::abs(e.axis_major - 40) / 40 < 0.02);
    CHECK(std::abs(e.axis_minor - 20) / 20 < 0.02);
    CHECK(angle_diff_mod180(e.theta_deg, 0.0) < 1.0);
}

TEST_CASE("fit recovers a 30-degree rotation") {
    const BinaryMask m = rasterize_ellipse(64, 31.5, 32.5, 22, 11, 30.0);
    const EllipseParams e = fit_ellipse(m);
    CHECK(angle_diff_mod180(e.theta_deg, 30.0) < 1.0);
    CHECK(std::abs(e.axis_major - 44) / 44 < 0.02);
    CHECK(std::abs(e.axis_minor - 22) / 22 < 0.02);
}

TEST_CASE("a disk fits to near-equal axes") {
    const BinaryMask m = rasterize_ellipse(64, 32, 32, 15, 15, 0.0);
    const EllipseParams e = fit_ellipse(m);
    CHECK(std::abs(e.axis_major - e.axis_minor) / e.axis_major < 0.02);
}

TEST_CASE("fit errors") {
    SUBCASE("fewer than 5 boundary pixels") {
        BinaryMask m(8, 8);
        m.at(3, 3) = 1;
        m.at(3, 4) = 1;
        CHECK_THROWS_AS(fit_ellipse(m), FitDegenerateError);
    }
    SUBCASE("collinear points have no ellipse") {
        std::vector<std::array<double, 2>> line;
        for (int i = 0; i < 12; ++i) line.push_back({double(i), 2.0 * i + 1.0});
        CHECK_THROWS_AS(fit_ellipse_points(line), FitDegenerateError);
    }
}

TEST_CASE("fit residual on analytic boundary points is tiny") {
    const double ca = 40.25, cb = 33.75, sa = 21.0, sb = 9.5, th = 57.0;
    std::vector<std::array<double, 2>> pts;
    const double thr = th * std::numbers::pi / 180.0;
    for (int i = 0; i < 180; ++i) {
        const double psi = 2.0 * std::numbers::pi * i / 180.0;
        const double u = sa * std::cos(psi), v = sb * std::sin(psi);
        pts.push_back({ca + u * std::cos(thr) - v * std::sin(thr),
                       cb + u * std::sin(thr) + v * std::cos(thr)});
    }
    const EllipseParams e = fit_ellipse_points(pts);
    double max_residual = 0.0;
    for (const auto& p : pts)
        max_residual = std::max(max_residual, std::abs(elliptical_distance(p[0], p[1], e) - 1.0));
    CHECK(max_residual < 1e-9);
    CHECK(std::abs(e.center_a - ca) < 1e-6);
    CHECK(std::abs(e.axis_major - 2 * sa) < 1e-6);
    CHECK(angle_diff_mod180(e.theta_deg, th) < 1e-6);
}

TEST_CASE("rotate_coords direct substitutions") {
    EllipseParams e{10, 20, 8, 4, 0};
    SUBCASE("center maps to origin") {
        const auto [a, b] = rotate_coords(10, 20, e);
        CHECK(a == doctest::Approx(0.0));
        CHECK(b == doctest::Approx(0.0));
    }
    SUBCASE("theta 0") {
        const auto [a, b] = rotate_coords(15, 20, e);
        CHECK(a == doctest::Approx(5.0));
        CHECK(b == doctest::Approx(0.0));
    }
    SUBCASE("theta 90") {
        e.theta_deg = 90;
        const auto [a, b] = rotate_coords(15, 20, e);
        CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(b == doctest::Approx(-5.0));
    }
}

TEST_CASE("elliptical distance values") {
    EllipseParams e{12, 9, 10, 6, 0};
    CHECK(elliptical_distance(12, 9, e) == doctest::Approx(0.0));
    CHECK(elliptical_distance(17, 9, e) == doctest::Approx(1.0)); // on the major vertex

    e.theta_deg = 30.0;
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-20.0, 40.0);
    for (int i = 0; i < 50; ++i) {
        const double a = u(rng), b = u(rng);
        const double ref =
            oracle::elliptical_distance_formula(a, b, e.center_a, e.center_b, e.axis_major,
                                                e.axis_minor, e.theta_deg);
        CHECK(elliptical_distance(a, b, e) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("circle degeneracy: d is invariant to theta when axes are equal") {
    EllipseParams e{20, 20, 14, 14, 0};
    std::mt19937 rng(32);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    for (int i = 0; i < 30; ++i) {
        const double a = u(rng), b = u(rng);
        const double d0 = elliptical_distance(a, b, e);
        for (double th : {17.0, 45.0, 90.0, 133.0}) {
            EllipseParams rot = e;
            rot.theta_deg = th;
            CHECK(elliptical_distance(a, b, rot) == doctest::Approx(d0).epsilon(1e-12));
        }
    }
}

TEST_CASE("rotation invariance of d through the fit") {
    // fit the same shape rasterized at 0 and at 40 degrees; d at matched
    // points must agree within fit tolerance
    const double sa = 18, sb = 9;
    const BinaryMask m0 = rasterize_ellipse(64, 32, 32, sa, sb, 0.0);
    const BinaryMask m1 = rasterize_ellipse(64, 32, 32, sa, sb, 40.0);
    const EllipseParams e0 = fit_ellipse(m0);
    const EllipseParams e1 = fit_ellipse(m1);
    const double rot = 40.0 * std::numbers::pi / 180.0;
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> u(-22.0, 22.0);
    for (int i = 0; i < 100; ++i) {
        const double dx = u(rng), dy = u(rng);
        const double d0 = elliptical_distance(32 + dx, 32 + dy, e0);
        const double rx = dx * std::cos(rot) - dy * std::sin(rot);
        const double ry = dx * std::sin(rot) + dy * std::cos(rot);
        const double d1 = elliptical_distance(32 + rx, 32 + ry, e1);
        // absolute near the ellipse where refinement reads d, relative farther out
        if (std::min(d0, d1) <= 2.0)
            CHECK(std::abs(d0 - d1) < 2e-2);
        else
            CHECK(std::abs(d0 - d1) / d0 < 2e-2);
    }
}

TEST_CASE("refinement branch values") {
    // single-pixel grids at controlled distances
    EllipseParams e{0, 0, 20, 10, 0};
    SUBCASE("d = 0 clamps the raw 1.6 to 1.0") {
        FloatGrid p(1, 1, 0.3);
        const FloatGrid out = refine_pseudo_label(p, e, 0.6);
        CHECK(out.at(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("d = 1 takes the floor beta") {
        FloatGrid p(1, 1, 0.5);
        EllipseParams at_vertex{-10, 0, 20, 10, 0}; // pixel (0,0) on the major vertex
        const FloatGrid out = refine_pseudo_label(p, at_vertex, 0.6);
        CHECK(out.at(0, 0) == doctest::Approx(0.6));
    }
    SUBCASE("d = 2 decays by exp(-1)") {
        FloatGrid p(1, 1, 0.8);
        // choose center so that d((0,0)) = 2: a_rot = 10*sqrt(2) on semi 10
        EllipseParams far{-10.0 * std::sqrt(2.0), 0, 20, 20, 0};
        const FloatGrid out = refine_pseudo_label(p, far, 0.6);
        CHECK(out.at(0, 0) == doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-9));
    }
}

TEST_CASE("refinement inside floor and outside decay properties") {
    EllipseParams e{16, 16, 18, 10, 25.0};
    std::mt19937 rng(34);
    const FloatGrid p = oracle::random_grid(rng, 32, 32);
    const double beta = 0.6;
    const FloatGrid out = refine_pseudo_label(p, e, beta);
    for (int r = 0; r < 32; ++r) {
        for (int c = 0; c < 32; ++c) {
            const double d = elliptical_distance(c, r, e);
            const double v = out.at(r, c);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (d <= 1.0) {
                CHECK(v >= std::min(1.0, beta));
                CHECK(v >= p.at(r, c) - 1e-12); // never lowers inside
            } else {
                CHECK(v <= p.at(r, c) + 1e-12);
            }
        }
    }
    // strict decay in d for fixed p > 0
    FloatGrid one(1, 1, 0.9);
    double prev = 1.0;
    for (double offset : {1.2, 1.5, 2.0, 3.0}) {
        EllipseParams shifted{-offset * 10.0, 0, 20, 20, 0};
        const double v = refine_pseudo_label(one, shifted, beta).at(0, 0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("refine_map passes through on empty or degenerate masks") {
    SUBCASE("empty") {
        const FloatGrid p(8, 8, 0.1);
        const RefinementResult res = refine_map(p, 0.5, 0.6);
        CHECK(res.skipped);
        CHECK_FALSE(res.ellipse.has_value());
        CHECK(res.refined.data == p.data);
    }
    SUBCASE("too small to fit") {
        FloatGrid p(8, 8, 0.1);
        p.at(4, 4) = 0.9;
        const RefinementResult res = refine_map(p, 0.5, 0.6);
        CHECK(res.skipped);
        CHECK(res.refined.data == p.data);
    }
    SUBCASE("healthy blob is refined") {
        FloatGrid p(64, 64, 0.05);
        for (int r = 0; r < 64; ++r)
            for (int c = 0; c < 64; ++c)
                if (oracle::elliptical_distance_formula(c, r, 32, 32, 36, 20, 10) <= 1.0)
                    p.at(r, c) = 0.85;
        const RefinementResult res = refine_map(p, 0.5, 0.6);
        CHECK_FALSE(res.skipped);
        REQUIRE(res.ellipse.has_value());
        CHECK(std::abs(res.ellipse->center_a - 32) < 0.5);
    }
}
