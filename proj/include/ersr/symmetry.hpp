#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "ersr/ellipse.hpp"
#include "ersr/raster.hpp"

namespace ersr {

enum class AxisKind { Major, Minor, Random, Horizontal, Vertical };

/// Reflection/splitting axis: the line through `center` with direction
/// (cos theta, sin theta), theta in degrees in [0, 180).
struct SymmetryAxis {
    double center_a = 0.0;
    double center_b = 0.0;
    double theta_deg = 0.0;
    AxisKind kind = AxisKind::Major;
};

/// Axis from a fitted ellipse under the chosen strategy. Major/minor use the
/// ellipse directly; random draws theta around the ellipse center; horizontal
/// and vertical place an axis-aligned line at a seeded position within the
/// mask's bounding box (grid center when the mask is empty).
SymmetryAxis make_axis(const EllipseParams& e, AxisKind kind, const BinaryMask& mask,
                       std::uint64_t seed);

/// Reflection of (a, b) across the axis: 2((x-c)*u)u - (x-c) + c with
/// u = (cos theta, sin theta). An involution.
std::array<double, 2> reflect_point(double a, double b, const SymmetryAxis& axis);

/// How pixels are assigned to a side. Perpendicular uses the coordinate
/// orthogonal to the axis direction (the offset that reflection negates);
/// Literal uses the along-axis coordinate a_rot as Eq-style splitting rules
/// are sometimes written, even though reflection does not swap those sides.
enum class SplitMode { Perpendicular, Literal };

/// Signed side coordinate of a point under the given mode; reflection
/// negates it in Perpendicular mode.
double side_coordinate(double a, double b, const SymmetryAxis& axis, SplitMode mode);

/// Full-image partition: side < 0 goes left, side >= 0 goes right.
/// left(i,j) + right(i,j) = 1 for every pixel.
struct HalfPlaneMasks {
    BinaryMask left;
    BinaryMask right;
};

HalfPlaneMasks split_halves(const SymmetryAxis& axis, int height, int width,
                            SplitMode mode = SplitMode::Perpendicular);

/// Per-half pixel perturbation: one multiplicative jitter factor per piece
/// drawn from U(jitter_lo, jitter_hi), plus per-pixel Gaussian noise. The
/// composed image is clamped to [0,1].
struct PerturbationParams {
    bool enabled = false;
    double jitter_lo = 0.9;
    double jitter_hi = 1.1;
    double noise_sigma = 0.02;
};

struct AugmentedPair {
    FloatGrid s1;
    FloatGrid s2;
    std::uint64_t perturbation_seed = 0;
};

/// Symmetric augmentation: each output keeps the background, one foreground
/// half, and that half mirrored (pasted) across the axis. Per destination
/// pixel the kept half wins, then the pasted mirror, then background;
/// dropped-half foreground with no paste coverage reads 0. Reflected samples
/// are nearest-neighbor; reflections from outside the grid contribute
/// nothing. The axis line belongs to both kept halves, so on-axis foreground
/// is neither doubled nor lost.
AugmentedPair compose_symmetric_images(const FloatGrid& x, const BinaryMask& m,
                                       const SymmetryAxis& axis, SplitMode mode,
                                       const PerturbationParams& perturb, std::uint64_t seed);

/// Mirrored predictions: left pixels keep p(x) in the first output and take
/// p(x') in the second; right pixels swap roles. Out-of-grid reflections
/// read 0.
std::pair<FloatGrid, FloatGrid> mirror_prediction(const FloatGrid& p_o, const SymmetryAxis& axis,
                                                  const HalfPlaneMasks& halves);

/// Masked decomposition of a prediction into a kept-left component and the
/// mirrored-right component re-expressed on left-side support, directly
/// comparable by MSE. Uses closed half-plane gates (the axis line belongs to
/// both) so axis-symmetric inputs decompose into identical components. When
/// `foreground` is non-null the gates are additionally intersected with it.
std::pair<FloatGrid, FloatGrid> decompose_prediction(const FloatGrid& p_si,
                                                     const SymmetryAxis& axis, SplitMode mode,
                                                     const BinaryMask* foreground = nullptr);

} // namespace ersr
