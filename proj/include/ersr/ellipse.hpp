#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ersr/raster.hpp"

namespace ersr {

/// Fitted ellipse: center in (a, b) = (col, row) pixel coordinates, full
/// axis lengths in pixels, orientation in degrees normalized to [0, 180).
/// axis_major >= axis_minor > 0.
struct EllipseParams {
    double center_a = 0.0;
    double center_b = 0.0;
    double axis_major = 0.0;
    double axis_minor = 0.0;
    double theta_deg = 0.0;

    double semi_major() const { return axis_major / 2.0; }
    double semi_minor() const { return axis_minor / 2.0; }
};

/// 8-connected foreground components. Label 0 is background; foreground
/// labels start at 1 in discovery (row-major scan) order.
struct ComponentLabeling {
    int height = 0;
    int width = 0;
    std::vector<int> labels;
    std::vector<std::size_t> sizes; // sizes[k] = pixel count of label k; sizes[0] = 0

    int label_at(int row, int col) const { return labels[static_cast<std::size_t>(row) * width + col]; }
};

ComponentLabeling label_components(const BinaryMask& m);

/// Mask of the single largest 8-connected component. Equal sizes tie-break
/// to the component whose first row-major pixel comes first. Throws
/// EmptyMaskError when there is no foreground.
BinaryMask largest_component(const BinaryMask& m);

/// Boundary pixels: foreground pixels with at least one background
/// 4-neighbor (out-of-grid counts as background).
std::vector<std::array<int, 2>> boundary_pixels(const BinaryMask& component); // (col,row)

/// Subpixel contour samples: midpoints of every foreground/background
/// 4-neighbor crack, in (a, b) coordinates. These straddle the true contour
/// with near-zero bias, unlike boundary pixel centers which sit up to a full
/// pixel inside it.
std::vector<std::array<double, 2>> boundary_samples(const BinaryMask& component);

/// Direct least-squares conic fit constrained to an ellipse over the
/// component's contour samples, with a second-moment fallback when the
/// eigen step is degenerate. Requires >= 5 boundary pixels; throws
/// FitDegenerateError otherwise or when no valid ellipse exists.
EllipseParams fit_ellipse(const BinaryMask& component);

/// Same fit on explicit (a, b) points. Exposed for analytic-contour tests.
EllipseParams fit_ellipse_points(const std::vector<std::array<double, 2>>& points);

/// Rotating-frame coordinates of a point relative to the ellipse:
/// a_rot along the major axis, b_rot across it. theta is in degrees.
std::array<double, 2> rotate_coords(double a, double b, const EllipseParams& e);

/// d = (a_rot/semi_major)^2 + (b_rot/semi_minor)^2; d <= 1 iff inside or on
/// the ellipse.
double elliptical_distance(double a, double b, const EllipseParams& e);

/// Per-pixel refinement: inside (d <= 1) raises the probability to at least
/// beta + (1-d)^2, outside decays it by exp(-(d-1)). Output clamped to
/// [0,1]. The rule is discontinuous at d = 1 when p < beta.
FloatGrid refine_pseudo_label(const FloatGrid& p_selected, const EllipseParams& e, double beta);

/// Full refinement step: binarize at tau, take the largest component, fit,
/// apply refine_pseudo_label. An empty mask or degenerate fit passes the
/// input through unrefined with the skip flag set.
struct RefinementResult {
    FloatGrid refined;
    std::optional<EllipseParams> ellipse;
    bool skipped = false;
    std::string skip_reason;
};

RefinementResult refine_map(const FloatGrid& p_selected, double tau, double beta);

} // namespace ersr
