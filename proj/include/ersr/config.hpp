#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ersr/symmetry.hpp"

namespace ersr {

/// Pipeline hyperparameters with their documented defaults. alpha, beta,
/// tau, initial_ratio live in [0,1]; epsilon > 0; total_steps >= 1; weights
/// and spacing >= 0.
struct PipelineConfig {
    double alpha = 0.5;
    double beta = 0.6;
    double tau = 0.5;
    double epsilon = 1e-8;
    double initial_ratio = 0.5;
    double lambda_max = 1.0;
    long total_steps = 10000;
    double ema_momentum = 0.99;
    AxisKind axis_kind = AxisKind::Major;
    SplitMode split_mode = SplitMode::Perpendicular;
    double dice_weight = 0.5;
    double bce_weight = 0.5;
    double spacing = 1.0;
    std::uint64_t seed = 0;
};

/// Applies one `key = value` assignment; throws ConfigError naming the key
/// for unknown keys or out-of-range values.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Parses a `key = value` file ('#' starts a comment, blank lines ignored).
PipelineConfig parse_config_file(const std::filesystem::path& path);

/// Serializes a config such that re-parsing reproduces it exactly.
std::string dump_config(const PipelineConfig& cfg);

const char* axis_kind_name(AxisKind kind);
AxisKind axis_kind_from_name(const std::string& name); // throws ConfigError
const char* split_mode_name(SplitMode mode);
SplitMode split_mode_from_name(const std::string& name); // throws ConfigError

/// Locale-independent shortest-round-trip formatting used for all CSV and
/// config output.
std::string format_double(double v);

} // namespace ersr
