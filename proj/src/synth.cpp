#include "ersr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "ersr/metrics.hpp"
#include "ersr/parallel.hpp"
#include "ersr/rng.hpp"
#include "ersr/symmetry.hpp"

namespace ersr {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// substream tags for per-sample derivation
enum : std::uint64_t { kGeom = 11, kTexture = 12, kTeacher = 13, kAxis = 14, kPerturb = 15 };

struct ArcSpan {
    double start; // radians in [0, 2pi)
    double length;
};

bool in_arc(double phi, const std::vector<ArcSpan>& arcs) {
    for (const auto& a : arcs) {
        double rel = std::fmod(phi - a.start, kTwoPi);
        if (rel < 0) rel += kTwoPi;
        if (rel <= a.length) return true;
    }
    return false;
}

BinaryMask dilate4(const BinaryMask& m) {
    BinaryMask out(m.height, m.width);
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            bool v = m.at(r, c) != 0;
            if (!v && r > 0) v = m.at(r - 1, c) != 0;
            if (!v && r + 1 < m.height) v = m.at(r + 1, c) != 0;
            if (!v && c > 0) v = m.at(r, c - 1) != 0;
            if (!v && c + 1 < m.width) v = m.at(r, c + 1) != 0;
            out.at(r, c) = v ? 1 : 0;
        }
    }
    return out;
}

BinaryMask erode4(const BinaryMask& m) {
    BinaryMask out(m.height, m.width);
    for (int r = 0; r < m.height; ++r) {
        for (int c = 0; c < m.width; ++c) {
            bool v = m.at(r, c) != 0;
            v = v && r > 0 && m.at(r - 1, c) != 0;
            v = v && r + 1 < m.height && m.at(r + 1, c) != 0;
            v = v && c > 0 && m.at(r, c - 1) != 0;
            v = v && c + 1 < m.width && m.at(r, c + 1) != 0;
            out.at(r, c) = v ? 1 : 0;
        }
    }
    return out;
}

Kernel3x3 binomial3x3() {
    Kernel3x3 k{{1, 2, 1, 2, 4, 2, 1, 2, 1}};
    for (auto& w : k.w) w /= 16.0;
    return k;
}

std::string sample_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sample_%04d", index);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

bool phantom_interior(double a, double b, const EllipseParams& true_ellipse) {
    return elliptical_distance(a, b, true_ellipse) <= 1.0;
}

Phantom generate_phantom(const PhantomSpec& spec, std::uint64_t seed) {
    if (spec.size < 16) throw Error("phantom spec: grid size must be >= 16");
    if (spec.speckle < 0 || spec.dropout_fraction < 0 || spec.shadow_strength < 0)
        throw Error("phantom spec: noise levels must be >= 0");

    Rng geom = Rng::derive(seed, kGeom);
    const double half = (spec.size - 1) / 2.0;
    const double ca = half + geom.uniform(-spec.center_jitter, spec.center_jitter);
    const double cb = half + geom.uniform(-spec.center_jitter, spec.center_jitter);

    double semi_major = geom.uniform(spec.semi_major_frac_lo, spec.semi_major_frac_hi) * spec.size;
    const double margin = 2.0;
    const double max_fit =
        std::min({ca, cb, spec.size - 1 - ca, spec.size - 1 - cb}) - margin;
    if (max_fit < 6.0)
        throw Error("phantom spec infeasible: axes cannot fit with a 2-pixel margin");
    semi_major = std::min(semi_major, max_fit);
    const double aspect = geom.uniform(spec.aspect_lo, spec.aspect_hi);
    const double semi_minor = std::max(semi_major / aspect, 3.0);
    const double theta = std::fmod(geom.uniform(spec.theta_lo, spec.theta_hi), 180.0);

    Phantom ph;
    ph.true_ellipse = {ca, cb, 2.0 * semi_major, 2.0 * semi_minor, theta};

    // dropout arcs in ring-parameter angle
    std::vector<ArcSpan> arcs;
    if (spec.dropout_fraction > 0) {
        const int n_arcs = static_cast<int>(geom.uniform_int(1, 2));
        const double total = spec.dropout_fraction * kTwoPi;
        for (int i = 0; i < n_arcs; ++i)
            arcs.push_back({geom.uniform(0.0, kTwoPi), total / n_arcs});
    }
    const double shadow_center_a = geom.uniform(0.0, spec.size - 1.0);
    const double shadow_halfwidth = spec.size * 0.08;

    ph.gt = BinaryMask(spec.size, spec.size);
    ph.image = FloatGrid(spec.size, spec.size);
    const double band = spec.ring_width / (2.0 * semi_minor);

    Rng tex = Rng::derive(seed, kTexture);
    for (int r = 0; r < spec.size; ++r) {
        for (int c = 0; c < spec.size; ++c) {
            const double d = elliptical_distance(c, r, ph.true_ellipse);
            const bool inside = d <= 1.0;
            ph.gt.at(r, c) = inside ? 1 : 0;

            double v = inside ? spec.interior_level : spec.background_level;
            const double rho = std::sqrt(d);
            if (std::abs(rho - 1.0) <= band) {
                const auto [ar, br] = rotate_coords(c, r, ph.true_ellipse);
                const double phi =
                    std::atan2(br / semi_minor, ar / semi_major) + std::numbers::pi;
                if (!in_arc(phi, arcs)) v = spec.ring_brightness;
            }
            if (spec.shadow_strength > 0 && r > cb &&
                std::abs(c - shadow_center_a) < shadow_halfwidth)
                v *= 1.0 - spec.shadow_strength;
            if (spec.speckle > 0) v *= 1.0 + spec.speckle * tex.normal();
            ph.image.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return ph;
}

FloatGrid mock_teacher(const BinaryMask& gt, const TeacherCorruption& corruption,
                       std::uint64_t seed) {
    Rng rng = Rng::derive(seed, kTeacher);
    const int h = gt.height, w = gt.width;

    BinaryMask shape = gt;
    if (corruption.jitter_amplitude > 0) {
        const auto k = rng.uniform_int(-corruption.jitter_amplitude, corruption.jitter_amplitude);
        for (std::int64_t i = 0; i < std::abs(k); ++i)
            shape = k < 0 ? erode4(shape) : dilate4(shape);
    }

    FloatGrid p(h, w);
    for (std::size_t i = 0; i < p.data.size(); ++i) p.data[i] = shape.data[i];

    for (int blob = 0; blob < corruption.blob_count; ++blob) {
        const double bca = rng.uniform(0.0, w - 1.0);
        const double bcb = rng.uniform(0.0, h - 1.0);
        const double radius = corruption.blob_radius * rng.uniform(0.6, 1.2);
        const double peak = rng.uniform(0.6, 0.95);
        const double sigma2 = 2.0 * (radius / 2.0) * (radius / 2.0);
        const int reach = static_cast<int>(std::ceil(radius * 2.0));
        const int r0 = std::max(0, static_cast<int>(bcb) - reach);
        const int r1 = std::min(h - 1, static_cast<int>(bcb) + reach);
        const int c0 = std::max(0, static_cast<int>(bca) - reach);
        const int c1 = std::min(w - 1, static_cast<int>(bca) + reach);
        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) {
                const double dr = r - bcb, dc = c - bca;
                const double bump = peak * std::exp(-(dr * dr + dc * dc) / sigma2);
                p.at(r, c) = std::max(p.at(r, c), bump);
            }
        }
    }

    for (int pass = 0; pass < corruption.blur_passes; ++pass) p = convolve3x3(p, binomial3x3());

    if (corruption.noise_sigma > 0)
        for (auto& v : p.data) v += rng.normal(0.0, corruption.noise_sigma);
    for (auto& v : p.data) v = std::clamp(v, 0.0, 1.0);
    return p;
}

TeacherCorruption corruption_from_level(double level) {
    if (level < 0) throw Error("corruption level must be >= 0");
    TeacherCorruption c;
    c.blur_passes = static_cast<int>(std::lround(2.0 * level));
    c.noise_sigma = 0.05 * level;
    c.jitter_amplitude = static_cast<int>(std::lround(2.0 * level));
    c.blob_count = static_cast<int>(std::lround(3.0 * level));
    c.blob_radius = 3.0 + 2.0 * level;
    return c;
}

ExperimentReport run_pipeline_experiment(const ExperimentConfig& config) {
    const int n = config.n_samples;
    ExperimentReport report;
    report.samples.resize(static_cast<std::size_t>(n));

    // deterministic tier assignment with exact proportions
    std::vector<bool> high(static_cast<std::size_t>(n), false);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += config.high_fraction;
        if (acc >= 1.0 - 1e-12) {
            high[static_cast<std::size_t>(i)] = true;
            acc -= 1.0;
        }
    }

    const auto teacher_map = [&](int i) {
        const std::uint64_t s = Rng::derive(config.seed, static_cast<std::uint64_t>(i)).next_u64();
        const Phantom ph = generate_phantom(config.phantom, s);
        const auto& corr =
            high[static_cast<std::size_t>(i)] ? config.corruption_high : config.corruption_low;
        return std::pair{ph, mock_teacher(ph.gt, corr, s)};
    };

    // pass 1: score everything
    ScoreDictionary dict;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        auto& res = report.samples[i];
        res.id = sample_name(static_cast<int>(i));
        res.high_tier = high[i];
        try {
            const auto [ph, p_t] = teacher_map(static_cast<int>(i));
            res.scores = combined_score(p_t, config.pipe.alpha, config.pipe.tau,
                                        config.pipe.epsilon);
            dict.update(res.id, res.scores.score, static_cast<long>(config.step));
        } catch (const Error& e) {
            res.status = e.what();
        }
    });

    const auto selected_ids = topk_select(dict, config.selection_ratio,
                                          static_cast<std::size_t>(n));
    const std::set<std::string> selected(selected_ids.begin(), selected_ids.end());
    for (auto& res : report.samples) res.selected = selected.count(res.id) != 0;

    // pass 2: refine + losses on selected samples (inputs regenerate
    // bit-identically from the per-sample seed)
    const RampSchedule lambda{0.0, config.pipe.lambda_max, config.pipe.total_steps};
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        auto& res = report.samples[i];
        if (!res.selected || res.status != "ok") return;
        try {
            const auto [ph, p_t] = teacher_map(static_cast<int>(i));
            const std::uint64_t s =
                Rng::derive(config.seed, static_cast<std::uint64_t>(i)).next_u64();

            const RefinementResult refined = refine_map(p_t, config.pipe.tau, config.pipe.beta);
            res.refine_skipped = refined.skipped;
            const BinaryMask raw_mask = binarize(p_t, config.pipe.tau);
            const BinaryMask re_mask = binarize(refined.refined, config.pipe.tau);
            res.dice_raw = dice_score(raw_mask, ph.gt);
            res.dice_refined = dice_score(re_mask, ph.gt);

            double l_aug = 0.0, l_sym = 0.0;
            if (refined.ellipse) {
                const SymmetryAxis axis = make_axis(*refined.ellipse, config.pipe.axis_kind,
                                                    re_mask, Rng::derive(s, kAxis).next_u64());
                const HalfPlaneMasks halves =
                    split_halves(axis, p_t.height, p_t.width, config.pipe.split_mode);

                PerturbationParams perturb;
                perturb.enabled = true;
                const AugmentedPair aug = compose_symmetric_images(
                    ph.image, re_mask, axis, config.pipe.split_mode, perturb,
                    Rng::derive(s, kPerturb).next_u64());
                res.aug_s1_mean = mean_of(aug.s1.data);
                res.aug_s2_mean = mean_of(aug.s2.data);

                // stand-in student responses: the teacher map pushed through
                // the same symmetric composition (perturbation off)
                PerturbationParams clean;
                const AugmentedPair pred = compose_symmetric_images(
                    p_t, re_mask, axis, config.pipe.split_mode, clean, 0);
                const auto [p_o1, p_o2] = mirror_prediction(p_t, axis, halves);
                l_aug = aug_consistency(p_o1, pred.s1, p_o2, pred.s2);
                const auto [ps1_1, ps1_2] =
                    decompose_prediction(pred.s1, axis, config.pipe.split_mode);
                const auto [ps2_1, ps2_2] =
                    decompose_prediction(pred.s2, axis, config.pipe.split_mode);
                l_sym = sym_consistency(ps1_1, ps1_2, ps2_1, ps2_2);
            }
            const double l_ori = ori_consistency(p_t, refined.refined);
            const double l_sup = supervised_loss(p_t, ph.gt, config.pipe.dice_weight,
                                                 config.pipe.bce_weight);
            res.losses = total_loss(l_sup, l_ori, l_aug, l_sym, lambda, config.step);
        } catch (const Error& e) {
            res.status = e.what();
        }
    });

    // summary
    auto& s = report.summary;
    s.n = n;
    std::vector<double> dice_raw_sel, dice_ref_sel, score_sel, score_rej;
    int low_in_selection = 0;
    for (const auto& res : report.samples) {
        if (res.status != "ok") {
            ++s.n_errors;
            continue;
        }
        if (res.selected) {
            ++s.n_selected;
            if (res.refine_skipped) ++s.n_refine_skipped;
            if (!res.high_tier) ++low_in_selection;
            dice_raw_sel.push_back(res.dice_raw);
            dice_ref_sel.push_back(res.dice_refined);
            score_sel.push_back(res.scores.score);
        } else {
            score_rej.push_back(res.scores.score);
        }
    }
    s.mean_dice_raw_selected = mean_of(dice_raw_sel);
    s.mean_dice_refined_selected = mean_of(dice_ref_sel);
    s.mean_score_selected = mean_of(score_sel);
    s.mean_score_rejected = mean_of(score_rej);
    s.low_tier_fraction_in_selection =
        s.n_selected > 0 ? static_cast<double>(low_in_selection) / s.n_selected : 0.0;
    return report;
}

void write_experiment_csv(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "report.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "report.csv").string());
        out << "sample_id,tier,s_boundary,s_contour,s_score,selected,refine_skipped,"
               "dice_raw,dice_refined,aug_s1_mean,aug_s2_mean,l_sup,l_ori,l_aug,l_sym,lambda,"
               "l_total,status\n";
        for (const auto& r : report.samples) {
            out << r.id << ',' << (r.high_tier ? "high" : "low") << ','
                << format_double(r.scores.boundary) << ',' << format_double(r.scores.contour)
                << ',' << format_double(r.scores.score) << ',' << (r.selected ? 1 : 0) << ','
                << (r.refine_skipped ? 1 : 0) << ',' << format_double(r.dice_raw) << ','
                << format_double(r.dice_refined) << ',' << format_double(r.aug_s1_mean) << ','
                << format_double(r.aug_s2_mean) << ',' << format_double(r.losses.l_sup) << ','
                << format_double(r.losses.l_ori) << ',' << format_double(r.losses.l_aug) << ','
                << format_double(r.losses.l_sym) << ',' << format_double(r.losses.lambda_t) << ','
                << format_double(r.losses.l_total) << ',' << r.status << '\n';
        }
    }
    {
        std::ofstream out(dir / "summary.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / "summary.csv").string());
        const auto& s = report.summary;
        out << "key,value\n";
        out << "n," << s.n << '\n';
        out << "n_selected," << s.n_selected << '\n';
        out << "n_refine_skipped," << s.n_refine_skipped << '\n';
        out << "n_errors," << s.n_errors << '\n';
        out << "mean_dice_raw_selected," << format_double(s.mean_dice_raw_selected) << '\n';
        out << "mean_dice_refined_selected," << format_double(s.mean_dice_refined_selected)
            << '\n';
        out << "mean_score_selected," << format_double(s.mean_score_selected) << '\n';
        out << "mean_score_rejected," << format_double(s.mean_score_rejected) << '\n';
        out << "low_tier_fraction_in_selection,"
            << format_double(s.low_tier_fraction_in_selection) << '\n';
    }
}

std::vector<AxisAblationRow> run_axis_ablation(ExperimentConfig config) {
    const AxisKind kinds[] = {AxisKind::Major, AxisKind::Minor, AxisKind::Random,
                              AxisKind::Horizontal, AxisKind::Vertical};
    std::vector<AxisAblationRow> rows;
    for (AxisKind kind : kinds) {
        config.pipe.axis_kind = kind;
        const ExperimentReport rep = run_pipeline_experiment(config);
        AxisAblationRow row;
        row.kind = kind;
        std::vector<double> dice, aug, sym, ori;
        for (const auto& r : rep.samples) {
            if (!r.selected || r.status != "ok") continue;
            dice.push_back(r.dice_refined);
            aug.push_back(r.losses.l_aug);
            sym.push_back(r.losses.l_sym);
            ori.push_back(r.losses.l_ori);
        }
        row.mean_dice_refined = mean_of(dice);
        row.mean_l_aug = mean_of(aug);
        row.mean_l_sym = mean_of(sym);
        row.mean_l_ori = mean_of(ori);
        rows.push_back(row);
    }
    return rows;
}

void write_axis_ablation_csv(const std::vector<AxisAblationRow>& rows,
                             const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "strategy,mean_dice_refined,mean_l_aug,mean_l_sym,mean_l_ori\n";
    for (const auto& r : rows) {
        out << axis_kind_name(r.kind) << ',' << format_double(r.mean_dice_refined) << ','
            << format_double(r.mean_l_aug) << ',' << format_double(r.mean_l_sym) << ','
            << format_double(r.mean_l_ori) << '\n';
    }
}

} // namespace ersr
