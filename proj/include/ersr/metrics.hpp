#pragma once

#include <vector>

#include "ersr/raster.hpp"

namespace ersr {

/// Surface of a mask: foreground pixels with at least one background
/// 4-neighbor; out-of-grid counts as background.
BinaryMask surface(const BinaryMask& m);

/// Pooled directed surface distances between two masks, in pixel units.
/// a_to_b[i] is the distance from the i-th surface pixel of A to the nearest
/// surface pixel of B.
struct SurfaceDistanceSet {
    std::vector<double> a_to_b;
    std::vector<double> b_to_a;
    double pixel_spacing = 1.0;
};

/// Throws MetricUndefinedError if either surface is empty.
SurfaceDistanceSet surface_distances(const BinaryMask& a, const BinaryMask& b, double spacing);

/// 2|A n B| / (|A| + |B|); both empty -> 1.0, exactly one empty -> 0.0.
double dice_score(const BinaryMask& a, const BinaryMask& b);

/// 95th percentile (linear interpolation between order statistics) of the
/// pooled directed surface distances, scaled by spacing.
double hd95(const BinaryMask& a, const BinaryMask& b, double spacing = 1.0);

/// Mean of the pooled directed surface distances, scaled by spacing.
double asd(const BinaryMask& a, const BinaryMask& b, double spacing = 1.0);

} // namespace ersr
