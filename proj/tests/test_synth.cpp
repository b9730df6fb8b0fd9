#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ersr/metrics.hpp"
#include "ersr/synth.hpp"
#include "oracles.hpp"

using namespace ersr;
namespace fs = std::filesystem;

namespace {

PhantomSpec clean_spec(int size = 64) {
    PhantomSpec s;
    s.size = size;
    s.speckle = 0.0;
    s.dropout_fraction = 0.0;
    s.shadow_strength = 0.0;
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("phantom generation is deterministic in the seed") {
    const PhantomSpec spec;
    const Phantom a = generate_phantom(spec, 123);
    const Phantom b = generate_phantom(spec, 123);
    CHECK(a.image.data == b.image.data);
    CHECK(a.gt.data == b.gt.data);
    CHECK(a.true_ellipse.theta_deg == b.true_ellipse.theta_deg);
    const Phantom c = generate_phantom(spec, 124);
    CHECK(a.image.data != c.image.data);
}

TEST_CASE("ground truth equals the analytic interior test") {
    const Phantom ph = generate_phantom(clean_spec(), 5);
    const auto& e = ph.true_ellipse;
    BinaryMask analytic(ph.gt.height, ph.gt.width);
    for (int r = 0; r < analytic.height; ++r)
        for (int c = 0; c < analytic.width; ++c)
            analytic.at(r, c) = oracle::elliptical_distance_formula(
                                    c, r, e.center_a, e.center_b, e.axis_major, e.axis_minor,
                                    e.theta_deg) <= 1.0
                                    ? 1
                                    : 0;
    CHECK(dice_score(ph.gt, analytic) == 1.0);
}

TEST_CASE("noiseless ring sits exactly on the analytic annulus") {
    const PhantomSpec spec = clean_spec();
    const Phantom ph = generate_phantom(spec, 9);
    const auto& e = ph.true_ellipse;
    const double band = spec.ring_width / e.axis_minor; // ring_width / (2*semi_minor)
    for (int r = 0; r < spec.size; ++r) {
        for (int c = 0; c < spec.size; ++c) {
            const double rho = std::sqrt(oracle::elliptical_distance_formula(
                c, r, e.center_a, e.center_b, e.axis_major, e.axis_minor, e.theta_deg));
            const bool on_ring = std::abs(rho - 1.0) <= band;
            CHECK((ph.image.at(r, c) == spec.ring_brightness) == on_ring);
        }
    }
}

TEST_CASE("phantom respects the margin or refuses") {
    PhantomSpec spec = clean_spec(16);
    spec.center_jitter = 7.0; // pushes the center against the border
    CHECK_THROWS_AS(
        [&] {
            for (std::uint64_t s = 0; s < 64; ++s) generate_phantom(spec, s);
        }(),
        Error);
}

TEST_CASE("mock teacher with zero corruption reproduces the ground truth") {
    const Phantom ph = generate_phantom(clean_spec(), 17);
    const FloatGrid p = mock_teacher(ph.gt, TeacherCorruption{}, 3);
    for (std::size_t i = 0; i < p.data.size(); ++i)
        CHECK(p.data[i] == static_cast<double>(ph.gt.data[i]));
}

TEST_CASE("mock teacher output is always a probability map") {
    const Phantom ph = generate_phantom(clean_spec(), 19);
    const TeacherCorruption heavy = corruption_from_level(3.0);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const FloatGrid p = mock_teacher(ph.gt, heavy, s);
        for (double v : p.data) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("more spurious blobs lower the expected dice") {
    const Phantom ph = generate_phantom(clean_spec(96), 23);
    TeacherCorruption few, many;
    few.blob_count = 1;
    many.blob_count = 8;
    few.blob_radius = many.blob_radius = 5.0;
    double dice_few = 0, dice_many = 0;
    const int n_seeds = 50;
    for (std::uint64_t s = 0; s < n_seeds; ++s) {
        dice_few += dice_score(binarize(mock_teacher(ph.gt, few, s), 0.5), ph.gt);
        dice_many += dice_score(binarize(mock_teacher(ph.gt, many, s), 0.5), ph.gt);
    }
    CHECK(dice_many / n_seeds < dice_few / n_seeds);
}

TEST_CASE("refinement never degrades recall inside the fitted ellipse") {
    const PhantomSpec spec = clean_spec(96);
    const TeacherCorruption corr = corruption_from_level(1.0);
    int checked = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Phantom ph = generate_phantom(spec, s);
        const FloatGrid p_t = mock_teacher(ph.gt, corr, s);
        const RefinementResult res = refine_map(p_t, 0.5, 0.6);
        if (res.skipped) continue;
        ++checked;
        const BinaryMask raw = binarize(p_t, 0.5);
        const BinaryMask refined = binarize(res.refined, 0.5);
        std::size_t gt_in = 0, raw_hit = 0, re_hit = 0;
        for (int r = 0; r < spec.size; ++r) {
            for (int c = 0; c < spec.size; ++c) {
                if (!ph.gt.at(r, c)) continue;
                if (elliptical_distance(c, r, *res.ellipse) > 1.0) continue;
                ++gt_in;
                raw_hit += raw.at(r, c);
                re_hit += refined.at(r, c);
            }
        }
        REQUIRE(gt_in > 0);
        CHECK(re_hit >= raw_hit);
    }
    CHECK(checked > 10);
}

TEST_CASE("experiment report is deterministic and internally consistent") {
    ExperimentConfig ec;
    ec.n_samples = 12;
    ec.phantom = clean_spec(48);
    ec.phantom.speckle = 0.1;
    ec.corruption_low = corruption_from_level(0.5);
    ec.corruption_high = corruption_from_level(2.0);
    ec.high_fraction = 0.5;
    ec.selection_ratio = 0.5;
    ec.seed = 77;

    const ExperimentReport a = run_pipeline_experiment(ec);
    CHECK(a.summary.n == 12);
    CHECK(a.summary.n_selected == 6);
    CHECK(a.summary.n_errors == 0);
    // filtering monotonicity
    CHECK(a.summary.mean_score_selected >= a.summary.mean_score_rejected);

    const auto dir_a = fs::temp_directory_path() / "ersr_exp_a";
    const auto dir_b = fs::temp_directory_path() / "ersr_exp_b";
    write_experiment_csv(a, dir_a);
    const ExperimentReport b = run_pipeline_experiment(ec);
    write_experiment_csv(b, dir_b);
    CHECK(slurp(dir_a / "report.csv") == slurp(dir_b / "report.csv"));
    CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));
    CHECK(!slurp(dir_a / "report.csv").empty());
}

TEST_CASE("axis ablation covers all five strategies") {
    ExperimentConfig ec;
    ec.n_samples = 6;
    ec.phantom = clean_spec(48);
    ec.corruption_low = corruption_from_level(0.5);
    ec.selection_ratio = 1.0;
    ec.seed = 3;
    const auto rows = run_axis_ablation(ec);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].kind == AxisKind::Major);
    CHECK(rows[4].kind == AxisKind::Vertical);
    const auto path = fs::temp_directory_path() / "ersr_ablation.csv";
    write_axis_ablation_csv(rows, path);
    const std::string csv = slurp(path);
    for (const char* name : {"long", "short", "random", "horizontal", "vertical"})
        CHECK(csv.find(name) != std::string::npos);
}
