// ersr: command-line front end for the ERSR geometric pipeline.
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
// Diagnostics go to stderr; data goes to files or stdout only.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ersr/config.hpp"
#include "ersr/dsaf.hpp"
#include "ersr/ellipse.hpp"
#include "ersr/io.hpp"
#include "ersr/losses.hpp"
#include "ersr/metrics.hpp"
#include "ersr/parallel.hpp"
#include "ersr/rng.hpp"
#include "ersr/symmetry.hpp"
#include "ersr/synth.hpp"

namespace fs = std::filesystem;
using namespace ersr;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::map<std::string, std::string> read_kv_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read file '" + path.string() + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("'" + path.string() + "' line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        kv.insert_or_assign(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return kv;
}

// Sorted probability-map files (.ersrf32/.png) in a directory, keyed by stem.
std::vector<std::pair<std::string, fs::path>> list_maps(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error("input directory '" + dir.string() + "' not found");
    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".ersrf32" || ext == ".png")
            files.emplace_back(entry.path().stem().string(), entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .ersrf32/.png maps in '" + dir.string() + "'");
    return files;
}

EllipseParams read_ellipse_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read ellipse file '" + path.string() + "'");
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row))
        throw Error("'" + path.string() + "': expected header plus one data row");
    const auto f = split_csv_line(row);
    if (f.size() < 5) throw Error("'" + path.string() + "': expected 5 columns");
    EllipseParams e;
    e.center_a = std::stod(f[0]);
    e.center_b = std::stod(f[1]);
    e.axis_major = std::stod(f[2]);
    e.axis_minor = std::stod(f[3]);
    e.theta_deg = std::stod(f[4]);
    return e;
}

void write_ellipse_csv(const std::optional<EllipseParams>& e, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "c_a,c_b,axis_major,axis_minor,theta_deg\n";
    if (e) {
        out << format_double(e->center_a) << ',' << format_double(e->center_b) << ','
            << format_double(e->axis_major) << ',' << format_double(e->axis_minor) << ','
            << format_double(e->theta_deg) << '\n';
    }
}

// Config: defaults, then --config file, then explicit flag overrides.
struct ConfigCli {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value config file");
        const char* keys[] = {"alpha",      "beta",        "tau",        "epsilon",
                              "initial_ratio", "lambda_max", "total_steps", "ema_momentum",
                              "axis_kind",  "split_mode",  "dice_weight", "bce_weight",
                              "spacing",    "seed"};
        for (const char* key : keys) {
            cmd->add_option_function<std::string>(
                std::string("--") + key,
                [this, key](const std::string& v) { overrides[key] = v; },
                std::string("override config key ") + key);
        }
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        for (const auto& [k, v] : overrides) apply_config_entry(cfg, k, v);
        return cfg;
    }
};

// ---------------------------------------------------------------- score ---

int cmd_score(const std::string& in_dir, const ConfigCli& ccli, const std::string& out_path) {
    const PipelineConfig cfg = ccli.resolve();
    const auto files = list_maps(in_dir);
    std::vector<GeometricScores> scores(files.size());
    std::vector<std::string> errors(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        try {
            const FloatGrid p = read_image(files[i].second);
            scores[i] = combined_score(p, cfg.alpha, cfg.tau, cfg.epsilon);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < files.size(); ++i)
        if (!errors[i].empty()) throw Error(files[i].second.string() + ": " + errors[i]);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + out_path + "'");
    out << "sample_id,s_boundary,s_contour,s_score\n";
    for (std::size_t i = 0; i < files.size(); ++i)
        out << files[i].first << ',' << format_double(scores[i].boundary) << ','
            << format_double(scores[i].contour) << ',' << format_double(scores[i].score) << '\n';
    return 0;
}

// --------------------------------------------------------------- filter ---

int cmd_filter(const std::string& scores_path, double ratio, long n_opt,
               const std::string& out_path) {
    std::ifstream in(scores_path);
    if (!in) throw Error("cannot read scores file '" + scores_path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("'" + scores_path + "' is empty");
    const auto header = split_csv_line(line);
    std::size_t id_col = 0, score_col = 3;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "sample_id") id_col = i;
        if (header[i] == "s_score") score_col = i;
    }
    ScoreDictionary dict;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() <= std::max(id_col, score_col))
            throw Error("'" + scores_path + "': malformed row '" + line + "'");
        dict.update(f[id_col], std::stod(f[score_col]), 0);
        ++rows;
    }
    const std::size_t n = n_opt > 0 ? static_cast<std::size_t>(n_opt) : rows;
    const auto selected = topk_select(dict, ratio, n);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw IoError("cannot write '" + out_path + "'");
        os = &file;
    }
    for (const auto& id : selected) *os << id << '\n';
    return 0;
}

// --------------------------------------------------------------- refine ---

int cmd_refine(const std::string& in_path, const ConfigCli& ccli, const std::string& out_path,
               const std::string& ellipse_path) {
    const PipelineConfig cfg = ccli.resolve();
    const FloatGrid p = read_image(in_path);
    const RefinementResult res = refine_map(p, cfg.tau, cfg.beta);
    if (res.skipped)
        std::cerr << "refinement skipped, map passed through: " << res.skip_reason << '\n';
    write_image(res.refined, out_path);
    if (!ellipse_path.empty()) write_ellipse_csv(res.ellipse, ellipse_path);
    return 0;
}

// -------------------------------------------------------------- augment ---

int cmd_augment(const std::string& image_path, const std::string& mask_path,
                const std::string& ellipse_path, const std::string& axis_name,
                const std::string& split_name, std::uint64_t seed, bool no_perturb,
                const std::string& out_prefix) {
    const FloatGrid image = read_png_gray(image_path);
    const BinaryMask mask = read_mask_png(mask_path);
    const EllipseParams e = read_ellipse_csv(ellipse_path);
    const AxisKind kind = axis_kind_from_name(axis_name);
    const SplitMode mode = split_mode_from_name(split_name);

    const SymmetryAxis axis = make_axis(e, kind, mask, seed);
    PerturbationParams perturb;
    perturb.enabled = !no_perturb;
    const AugmentedPair pair = compose_symmetric_images(image, mask, axis, mode, perturb, seed);
    write_png_gray(pair.s1, out_prefix + "_s1.png");
    write_png_gray(pair.s2, out_prefix + "_s2.png");
    return 0;
}

// --------------------------------------------------------------- losses ---

int cmd_losses(const ConfigCli& ccli, const std::string& manifest_path,
               const std::string& out_path, double step) {
    const PipelineConfig cfg = ccli.resolve();
    std::ifstream in(manifest_path);
    if (!in) throw Error("cannot read manifest '" + manifest_path + "'");
    const fs::path base = fs::path(manifest_path).parent_path();

    std::string line;
    if (!std::getline(in, line)) throw Error("manifest '" + manifest_path + "' is empty");
    const auto header = split_csv_line(line);
    const std::vector<std::string> want = {"sample_id", "p_o", "p_s1", "p_s2", "p_re", "gt"};
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const auto& w : want)
        if (!col.count(w))
            throw Error("manifest '" + manifest_path + "': missing column '" + w + "'");

    const RampSchedule lambda{0.0, cfg.lambda_max, cfg.total_steps};
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + out_path + "'");
    out << "sample_id,l_sup,l_ori,l_aug,l_sym,lambda,l_total\n";

    const auto resolve = [&](const std::string& p) {
        const fs::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        const std::string id = f[col["sample_id"]];
        const FloatGrid p_o = read_image(resolve(f[col["p_o"]]));
        const FloatGrid p_s1 = read_image(resolve(f[col["p_s1"]]));
        const FloatGrid p_s2 = read_image(resolve(f[col["p_s2"]]));
        const FloatGrid p_re = read_image(resolve(f[col["p_re"]]));
        const BinaryMask gt = read_mask_png(resolve(f[col["gt"]]));

        double l_aug = 0.0, l_sym = 0.0;
        const BinaryMask re_mask = binarize(p_re, cfg.tau);
        const RefinementResult fit = refine_map(p_re, cfg.tau, cfg.beta);
        if (fit.ellipse) {
            const SymmetryAxis axis = make_axis(*fit.ellipse, cfg.axis_kind, re_mask, cfg.seed);
            const HalfPlaneMasks halves =
                split_halves(axis, p_o.height, p_o.width, cfg.split_mode);
            const auto [p_o1, p_o2] = mirror_prediction(p_o, axis, halves);
            l_aug = aug_consistency(p_o1, p_s1, p_o2, p_s2);
            const auto [a1, a2] = decompose_prediction(p_s1, axis, cfg.split_mode);
            const auto [b1, b2] = decompose_prediction(p_s2, axis, cfg.split_mode);
            l_sym = sym_consistency(a1, a2, b1, b2);
        } else {
            std::cerr << id << ": no usable ellipse, consistency terms set to 0 ("
                      << fit.skip_reason << ")\n";
        }
        const double l_ori = ori_consistency(p_o, p_re);
        const double l_sup = supervised_loss(p_o, gt, cfg.dice_weight, cfg.bce_weight);
        const LossReport rep = total_loss(l_sup, l_ori, l_aug, l_sym, lambda, step);
        out << id << ',' << format_double(rep.l_sup) << ',' << format_double(rep.l_ori) << ','
            << format_double(rep.l_aug) << ',' << format_double(rep.l_sym) << ','
            << format_double(rep.lambda_t) << ',' << format_double(rep.l_total) << '\n';
    }
    return 0;
}

// ----------------------------------------------------------------- eval ---

int cmd_eval(const std::string& pred_dir, const std::string& gt_dir, double spacing,
             const std::string& out_path) {
    if (!fs::is_directory(pred_dir)) throw Error("prediction directory '" + pred_dir + "' not found");
    if (!fs::is_directory(gt_dir)) throw Error("ground-truth directory '" + gt_dir + "' not found");
    std::vector<std::pair<std::string, fs::path>> preds;
    for (const auto& entry : fs::directory_iterator(pred_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            preds.emplace_back(entry.path().filename().string(), entry.path());
    std::sort(preds.begin(), preds.end());
    if (preds.empty()) throw Error("no .png masks in '" + pred_dir + "'");

    struct Row {
        std::string id;
        double dice = 0.0, hd = 0.0, sd = 0.0;
        bool defined = true;
        std::string error;
    };
    std::vector<Row> rows(preds.size());
    parallel_for(preds.size(), [&](std::size_t i) {
        auto& row = rows[i];
        row.id = fs::path(preds[i].first).stem().string();
        try {
            const BinaryMask pred = read_mask_png(preds[i].second);
            const fs::path gt_path = fs::path(gt_dir) / preds[i].first;
            if (!fs::exists(gt_path)) throw Error("missing ground truth '" + gt_path.string() + "'");
            const BinaryMask gt = read_mask_png(gt_path);
            row.dice = dice_score(pred, gt);
            try {
                row.hd = hd95(pred, gt, spacing);
                row.sd = asd(pred, gt, spacing);
            } catch (const MetricUndefinedError&) {
                row.defined = false;
            }
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    for (const auto& row : rows)
        if (!row.error.empty()) throw Error(row.id + ": " + row.error);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + out_path + "'");
    out << "sample_id,dice,hd95,asd\n";
    double sdice = 0, shd = 0, ssd = 0;
    std::size_t ndef = 0;
    for (const auto& row : rows) {
        sdice += row.dice;
        out << row.id << ',' << format_double(row.dice) << ',';
        if (row.defined) {
            out << format_double(row.hd) << ',' << format_double(row.sd) << '\n';
            shd += row.hd;
            ssd += row.sd;
            ++ndef;
        } else {
            out << "nan,nan\n";
            std::cerr << row.id << ": surface distances undefined (empty surface)\n";
        }
    }
    out << "mean," << format_double(sdice / static_cast<double>(rows.size())) << ',';
    if (ndef > 0)
        out << format_double(shd / static_cast<double>(ndef)) << ','
            << format_double(ssd / static_cast<double>(ndef)) << '\n';
    else
        out << "nan,nan\n";
    return 0;
}

// ------------------------------------------------------------------ gen ---

int cmd_gen(const std::string& spec_path, const std::string& out_dir) {
    auto kv = read_kv_file(spec_path);
    PhantomSpec spec;
    TeacherCorruption corr;
    long n = 20;
    std::uint64_t seed = 7;

    const auto take_real = [&](const char* key, double& slot) {
        if (auto it = kv.find(key); it != kv.end()) {
            slot = std::stod(it->second);
            kv.erase(it);
        }
    };
    const auto take_int = [&](const char* key, auto& slot) {
        if (auto it = kv.find(key); it != kv.end()) {
            slot = static_cast<std::decay_t<decltype(slot)>>(std::stol(it->second));
            kv.erase(it);
        }
    };
    take_int("n", n);
    take_int("size", spec.size);
    take_int("seed", seed);
    take_real("center_jitter", spec.center_jitter);
    take_real("semi_major_frac_lo", spec.semi_major_frac_lo);
    take_real("semi_major_frac_hi", spec.semi_major_frac_hi);
    take_real("aspect_lo", spec.aspect_lo);
    take_real("aspect_hi", spec.aspect_hi);
    take_real("theta_lo", spec.theta_lo);
    take_real("theta_hi", spec.theta_hi);
    take_real("background_level", spec.background_level);
    take_real("interior_level", spec.interior_level);
    take_real("ring_brightness", spec.ring_brightness);
    take_real("ring_width", spec.ring_width);
    take_real("speckle", spec.speckle);
    take_real("dropout_fraction", spec.dropout_fraction);
    take_real("shadow_strength", spec.shadow_strength);
    double level = 1.0;
    take_real("corruption_level", level);
    corr = corruption_from_level(level);
    if (!kv.empty()) throw ConfigError("unknown spec key '" + kv.begin()->first + "'");

    fs::create_directories(out_dir);
    std::ofstream truth(fs::path(out_dir) / "truth.csv", std::ios::binary);
    if (!truth) throw IoError("cannot write truth.csv");
    truth << "sample_id,c_a,c_b,axis_major,axis_minor,theta_deg\n";
    for (long i = 0; i < n; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "sample_%04ld", i);
        const std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(i)).next_u64();
        const Phantom ph = generate_phantom(spec, s);
        const FloatGrid teacher = mock_teacher(ph.gt, corr, s);
        write_png_gray(ph.image, fs::path(out_dir) / (std::string(name) + "_image.png"));
        write_mask_png(ph.gt, fs::path(out_dir) / (std::string(name) + "_gt.png"));
        write_ersrf32(teacher, fs::path(out_dir) / (std::string(name) + "_teacher.ersrf32"));
        const auto& e = ph.true_ellipse;
        truth << name << ',' << format_double(e.center_a) << ',' << format_double(e.center_b)
              << ',' << format_double(e.axis_major) << ',' << format_double(e.axis_minor) << ','
              << format_double(e.theta_deg) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------- simulate ---

int cmd_simulate(int n, int size, double noise, double noise_high, double high_fraction,
                 double ratio, double step, std::uint64_t seed, const ConfigCli& ccli,
                 const std::string& out_dir, bool axis_ablation) {
    ExperimentConfig ec;
    ec.n_samples = n;
    ec.phantom.size = size;
    ec.corruption_low = corruption_from_level(noise);
    ec.corruption_high = corruption_from_level(noise_high >= 0 ? noise_high : noise);
    ec.high_fraction = noise_high >= 0 ? high_fraction : 0.0;
    ec.selection_ratio = ratio;
    ec.step = step;
    ec.pipe = ccli.resolve();
    ec.seed = seed;

    const ExperimentReport report = run_pipeline_experiment(ec);
    write_experiment_csv(report, out_dir);
    if (axis_ablation) {
        const auto rows = run_axis_ablation(ec);
        write_axis_ablation_csv(rows, fs::path(out_dir) / "ablation.csv");
    }
    std::cerr << "simulate: " << report.summary.n_selected << "/" << report.summary.n
              << " selected, mean dice raw " << report.summary.mean_dice_raw_selected
              << " -> refined " << report.summary.mean_dice_refined_selected << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ERSR geometric pipeline: pseudo-label scoring, ellipse refinement, "
                 "symmetric augmentation, losses, and metrics"};
    app.require_subcommand(1);

    // score
    auto* score = app.add_subcommand("score", "Score probability maps in a directory");
    std::string score_in, score_out = "scores.csv";
    ConfigCli score_cfg;
    score->add_option("--in", score_in, "directory of .ersrf32/.png maps")->required();
    score->add_option("--out", score_out, "output CSV");
    score_cfg.add_to(score);

    // filter
    auto* filter = app.add_subcommand("filter", "Top-K selection from a scores CSV");
    std::string filter_scores, filter_out;
    double filter_ratio = 0.5;
    long filter_n = 0;
    filter->add_option("--scores", filter_scores, "scores.csv from `ersr score`")->required();
    filter->add_option("--ratio", filter_ratio, "selection ratio in [0,1]");
    filter->add_option("--n", filter_n, "unlabeled pool size (default: rows in the CSV)");
    filter->add_option("--out", filter_out, "output file (default: stdout)");

    // refine
    auto* refine = app.add_subcommand("refine", "Ellipse-constrained refinement of one map");
    std::string refine_in, refine_out, refine_ellipse;
    ConfigCli refine_cfg;
    refine->add_option("--in", refine_in, "input map (.ersrf32/.png)")->required();
    refine->add_option("--out", refine_out, "output map")->required();
    refine->add_option("--dump-ellipse", refine_ellipse, "write fitted ellipse CSV");
    refine_cfg.add_to(refine);

    // augment
    auto* augment = app.add_subcommand("augment", "Symmetric augmentation of an image");
    std::string aug_image, aug_mask, aug_ellipse, aug_prefix;
    std::string aug_axis = "long", aug_split = "perpendicular";
    std::uint64_t aug_seed = 0;
    bool aug_no_perturb = false;
    augment->add_option("--image", aug_image, "grayscale PNG")->required();
    augment->add_option("--mask", aug_mask, "foreground mask PNG")->required();
    augment->add_option("--ellipse", aug_ellipse, "fitted ellipse CSV")->required();
    augment->add_option("--axis", aug_axis, "long|short|random|horizontal|vertical");
    augment->add_option("--split", aug_split, "perpendicular|literal");
    augment->add_option("--seed", aug_seed, "perturbation seed");
    augment->add_flag("--no-perturb", aug_no_perturb, "disable pixel-level perturbation");
    augment->add_option("--out-prefix", aug_prefix, "writes <p>_s1.png and <p>_s2.png")->required();

    // losses
    auto* losses = app.add_subcommand("losses", "Loss stack over a prediction manifest");
    std::string losses_manifest, losses_out = "report.csv";
    double losses_step = 0.0;
    ConfigCli losses_cfg;
    losses->add_option("--inputs", losses_manifest,
                       "CSV with columns sample_id,p_o,p_s1,p_s2,p_re,gt")->required();
    losses->add_option("--out", losses_out, "output CSV");
    losses->add_option("--step", losses_step, "ramp position t for lambda");
    losses_cfg.add_to(losses);

    // eval
    auto* eval = app.add_subcommand("eval", "Dice/HD95/ASD between mask directories");
    std::string eval_pred, eval_gt, eval_out = "metrics.csv";
    double eval_spacing = 1.0;
    eval->add_option("--pred", eval_pred, "directory of predicted mask PNGs")->required();
    eval->add_option("--gt", eval_gt, "directory of ground-truth mask PNGs")->required();
    eval->add_option("--spacing", eval_spacing, "units per pixel");
    eval->add_option("--out", eval_out, "output CSV");

    // gen
    auto* gen = app.add_subcommand("gen", "Emit a synthetic phantom dataset");
    std::string gen_spec, gen_out;
    gen->add_option("--spec", gen_spec, "key = value phantom spec file")->required();
    gen->add_option("--out", gen_out, "output directory")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "End-to-end pipeline experiment");
    int sim_n = 200, sim_size = 128;
    double sim_noise = 1.0, sim_noise_high = -1.0, sim_high_fraction = 0.5;
    double sim_ratio = 0.5, sim_step = 0.0;
    std::uint64_t sim_seed = 7;
    std::string sim_out = "report";
    bool sim_ablation = false;
    ConfigCli sim_cfg;
    sim->add_option("--n", sim_n, "number of samples");
    sim->add_option("--size", sim_size, "phantom grid size");
    sim->add_option("--noise", sim_noise, "teacher corruption level");
    sim->add_option("--noise-high", sim_noise_high,
                    "second corruption tier (enables the low/high mix)");
    sim->add_option("--high-fraction", sim_high_fraction, "fraction of samples on the high tier");
    sim->add_option("--ratio", sim_ratio, "selection ratio");
    sim->add_option("--step", sim_step, "ramp position t");
    sim->add_option("--seed", sim_seed, "experiment seed");
    sim->add_option("--out", sim_out, "report directory");
    sim->add_flag("--axis-ablation", sim_ablation, "also run all five axis strategies");
    sim_cfg.add_to(sim);

    // config-dump
    auto* dump = app.add_subcommand("config-dump", "Print the effective configuration");
    ConfigCli dump_cfg;
    dump_cfg.add_to(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (score->parsed()) return cmd_score(score_in, score_cfg, score_out);
        if (filter->parsed()) return cmd_filter(filter_scores, filter_ratio, filter_n, filter_out);
        if (refine->parsed()) return cmd_refine(refine_in, refine_cfg, refine_out, refine_ellipse);
        if (augment->parsed())
            return cmd_augment(aug_image, aug_mask, aug_ellipse, aug_axis, aug_split, aug_seed,
                               aug_no_perturb, aug_prefix);
        if (losses->parsed()) return cmd_losses(losses_cfg, losses_manifest, losses_out, losses_step);
        if (eval->parsed()) return cmd_eval(eval_pred, eval_gt, eval_spacing, eval_out);
        if (gen->parsed()) return cmd_gen(gen_spec, gen_out);
        if (sim->parsed())
            return cmd_simulate(sim_n, sim_size, sim_noise, sim_noise_high, sim_high_fraction,
                                sim_ratio, sim_step, sim_seed, sim_cfg, sim_out, sim_ablation);
        if (dump->parsed()) {
            std::cout << dump_config(dump_cfg.resolve());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
