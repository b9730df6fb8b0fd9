#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "ersr/raster.hpp"

namespace ersr {

/// Per-sample geometric quality scores. score = 1 - (alpha*boundary +
/// (1-alpha)*contour); raw sub-scores are combined without normalization.
struct GeometricScores {
    double boundary = 0.0;
    double contour = 0.0;
    double score = 0.0;
};

/// Mean Sobel gradient magnitude of a probability map:
/// (1/HW) * sum sqrt(Gh^2 + Gv^2 + epsilon). Lower = smoother boundary.
/// Equals sqrt(epsilon) exactly iff the map is constant.
double boundary_consistency_score(const FloatGrid& p, double epsilon);

/// Exact Euclidean distance from every pixel to the nearest feature pixel
/// (feature = 1). Two-pass separable transform on squared distances; results
/// are exact. Throws EmptyMaskError if there are no feature pixels.
FloatGrid distance_to_nearest(const BinaryMask& features);

/// Distance of each foreground pixel to the nearest background pixel; 0 on
/// background. An all-foreground mask has no background, so every value is
/// set to the sqrt(H^2+W^2) sentinel.
FloatGrid euclidean_distance_transform(const BinaryMask& m);

/// Mean absolute 4-neighbor Laplacian response of EDT(m). Lower = more
/// regular contour.
double contour_regularity_score(const BinaryMask& m);

/// Both sub-scores on p (mask via binarize at tau) blended by alpha.
GeometricScores combined_score(const FloatGrid& p, double alpha, double tau, double epsilon);

/// initial + (final - initial) * exp(-5 * (1 - min(t,T)/T)^2); clamps to
/// final for t >= T. Nondecreasing in t whenever final >= initial.
struct RampSchedule {
    double initial_value = 0.0;
    double final_value = 1.0;
    long total_steps = 1;

    double value(double t) const;
};

/// Latest geometric score per sample id. Updates overwrite; reads take a
/// consistent snapshot. Writers are serialized by an internal mutex.
class ScoreDictionary {
public:
    struct Entry {
        double score = 0.0;
        long iteration = 0;
    };

    void update(const std::string& sample_id, double score, long iteration);
    bool contains(const std::string& sample_id) const;
    std::size_t size() const;
    std::map<std::string, Entry> snapshot() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, Entry> entries_;
};

/// K = floor(ratio * n_unlabeled) highest-score sample ids, descending score,
/// ties broken by ascending sample id. K = 0 yields an empty list; K larger
/// than the dictionary returns everything (a note goes to stderr).
std::vector<std::string> topk_select(const ScoreDictionary& dict, double ratio,
                                     std::size_t n_unlabeled);

} // namespace ersr
