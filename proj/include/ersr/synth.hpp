#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ersr/config.hpp"
#include "ersr/dsaf.hpp"
#include "ersr/ellipse.hpp"
#include "ersr/losses.hpp"
#include "ersr/raster.hpp"

namespace ersr {

/// Ultrasound-like phantom: dark background, speckled interior, bright
/// elliptical ring (the skull analog) with optional dropout arcs and an
/// acoustic-shadow wedge.
struct PhantomSpec {
    int size = 128;
    double center_jitter = 2.0;       // px, uniform in [-j, j] per coordinate
    double semi_major_frac_lo = 0.25; // of grid size
    double semi_major_frac_hi = 0.40;
    double aspect_lo = 1.2; // major/minor
    double aspect_hi = 3.0;
    double theta_lo = 0.0; // degrees
    double theta_hi = 180.0;
    double background_level = 0.10;
    double interior_level = 0.35;
    double ring_brightness = 0.85;
    double ring_width = 2.5;        // px near the minor axis
    double speckle = 0.15;          // multiplicative noise strength
    double dropout_fraction = 0.15; // fraction of ring arc removed
    double shadow_strength = 0.30;  // darkening of the shadow wedge
};

struct Phantom {
    FloatGrid image;
    BinaryMask gt;
    EllipseParams true_ellipse;
};

/// Deterministic in (spec, seed). Throws Error for an infeasible spec
/// (axes cannot fit with a 2-pixel margin).
Phantom generate_phantom(const PhantomSpec& spec, std::uint64_t seed);

/// Membership rule used for the ground-truth rasterization (d <= 1 under the
/// true parameters); exposed so tests can check gt against it directly.
bool phantom_interior(double a, double b, const EllipseParams& true_ellipse);

/// Controlled degradation standing in for a teacher network's probability
/// map: boundary erode/dilate jitter, spurious blobs, blur, additive noise.
/// All-zero corruption reproduces gt exactly.
struct TeacherCorruption {
    int blur_passes = 0;        // binomial 3x3 smoothing passes
    double noise_sigma = 0.0;   // additive Gaussian, clamped after
    int jitter_amplitude = 0;   // max erode/dilate steps
    int blob_count = 0;         // spurious high-probability blobs
    double blob_radius = 4.0;   // px
};

FloatGrid mock_teacher(const BinaryMask& gt, const TeacherCorruption& corruption,
                       std::uint64_t seed);

/// Preset scaling: level 0 is the identity, 1 is "moderate".
TeacherCorruption corruption_from_level(double level);

/// One full desk-scale pipeline pass over generated samples: score + filter
/// (DS-AF), ellipse refinement, symmetric augmentation and mirrored
/// predictions, the complete loss stack, and Dice of raw vs refined
/// pseudo-labels against ground truth.
struct ExperimentConfig {
    int n_samples = 200;
    PhantomSpec phantom;
    TeacherCorruption corruption_low;
    TeacherCorruption corruption_high;
    double high_fraction = 0.0; // fraction of samples on the high tier
    double selection_ratio = 0.5;
    double step = 0.0; // ramp position t for lambda
    PipelineConfig pipe;
    std::uint64_t seed = 7;
};

struct SampleResult {
    std::string id;
    bool high_tier = false;
    bool selected = false;
    bool refine_skipped = false;
    GeometricScores scores;
    double dice_raw = 0.0;
    double dice_refined = 0.0;
    double aug_s1_mean = 0.0;
    double aug_s2_mean = 0.0;
    LossReport losses;
    std::string status = "ok";
};

struct ExperimentSummary {
    int n = 0;
    int n_selected = 0;
    int n_refine_skipped = 0;
    int n_errors = 0;
    double mean_dice_raw_selected = 0.0;
    double mean_dice_refined_selected = 0.0;
    double mean_score_selected = 0.0;
    double mean_score_rejected = 0.0;
    double low_tier_fraction_in_selection = 0.0;
};

struct ExperimentReport {
    std::vector<SampleResult> samples; // in sample-id order
    ExperimentSummary summary;
};

ExperimentReport run_pipeline_experiment(const ExperimentConfig& config);

/// report.csv (one row per sample) and summary.csv under `dir`.
/// Byte-identical for identical configs.
void write_experiment_csv(const ExperimentReport& report, const std::filesystem::path& dir);

/// Runs the experiment once per axis strategy and collects per-strategy
/// means of the consistency terms and refined Dice.
struct AxisAblationRow {
    AxisKind kind;
    double mean_dice_refined = 0.0;
    double mean_l_aug = 0.0;
    double mean_l_sym = 0.0;
    double mean_l_ori = 0.0;
};

std::vector<AxisAblationRow> run_axis_ablation(ExperimentConfig config);
void write_axis_ablation_csv(const std::vector<AxisAblationRow>& rows,
                             const std::filesystem::path& path);

} // namespace ersr
