#include "ersr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ersr {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
}

double parse_unit(const std::string& key, const std::string& value) {
    const double v = parse_real(key, value);
    if (v < 0.0 || v > 1.0)
        throw ConfigError("config key '" + key + "': value " + value + " outside [0,1]");
    return v;
}

double parse_nonneg(const std::string& key, const std::string& value) {
    const double v = parse_real(key, value);
    if (v < 0.0) throw ConfigError("config key '" + key + "': value must be >= 0");
    return v;
}

} // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "alpha") cfg.alpha = parse_unit(key, value);
    else if (key == "beta") cfg.beta = parse_unit(key, value);
    else if (key == "tau") cfg.tau = parse_unit(key, value);
    else if (key == "epsilon") {
        cfg.epsilon = parse_real(key, value);
        if (cfg.epsilon <= 0.0) throw ConfigError("config key 'epsilon': value must be > 0");
    } else if (key == "initial_ratio") cfg.initial_ratio = parse_unit(key, value);
    else if (key == "lambda_max") cfg.lambda_max = parse_nonneg(key, value);
    else if (key == "total_steps") {
        cfg.total_steps = parse_long(key, value);
        if (cfg.total_steps < 1) throw ConfigError("config key 'total_steps': value must be >= 1");
    } else if (key == "ema_momentum") {
        cfg.ema_momentum = parse_real(key, value);
        if (cfg.ema_momentum < 0.0 || cfg.ema_momentum >= 1.0)
            throw ConfigError("config key 'ema_momentum': value must be in [0,1)");
    } else if (key == "axis_kind") cfg.axis_kind = axis_kind_from_name(value);
    else if (key == "split_mode") cfg.split_mode = split_mode_from_name(value);
    else if (key == "dice_weight") cfg.dice_weight = parse_nonneg(key, value);
    else if (key == "bce_weight") cfg.bce_weight = parse_nonneg(key, value);
    else if (key == "spacing") {
        cfg.spacing = parse_real(key, value);
        if (cfg.spacing <= 0.0) throw ConfigError("config key 'spacing': value must be > 0");
    } else if (key == "seed") {
        const long v = parse_long(key, value);
        if (v < 0) throw ConfigError("config key 'seed': value must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(v);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

PipelineConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path.string() + "' line " +
                              std::to_string(lineno) + ": expected 'key = value'");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string dump_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "alpha = " << format_double(cfg.alpha) << "\n"
        << "beta = " << format_double(cfg.beta) << "\n"
        << "tau = " << format_double(cfg.tau) << "\n"
        << "epsilon = " << format_double(cfg.epsilon) << "\n"
        << "initial_ratio = " << format_double(cfg.initial_ratio) << "\n"
        << "lambda_max = " << format_double(cfg.lambda_max) << "\n"
        << "total_steps = " << cfg.total_steps << "\n"
        << "ema_momentum = " << format_double(cfg.ema_momentum) << "\n"
        << "axis_kind = " << axis_kind_name(cfg.axis_kind) << "\n"
        << "split_mode = " << split_mode_name(cfg.split_mode) << "\n"
        << "dice_weight = " << format_double(cfg.dice_weight) << "\n"
        << "bce_weight = " << format_double(cfg.bce_weight) << "\n"
        << "spacing = " << format_double(cfg.spacing) << "\n"
        << "seed = " << cfg.seed << "\n";
    return out.str();
}

const char* axis_kind_name(AxisKind kind) {
    switch (kind) {
    case AxisKind::Major: return "long";
    case AxisKind::Minor: return "short";
    case AxisKind::Random: return "random";
    case AxisKind::Horizontal: return "horizontal";
    case AxisKind::Vertical: return "vertical";
    }
    return "long";
}

AxisKind axis_kind_from_name(const std::string& name) {
    if (name == "long") return AxisKind::Major;
    if (name == "short") return AxisKind::Minor;
    if (name == "random") return AxisKind::Random;
    if (name == "horizontal") return AxisKind::Horizontal;
    if (name == "vertical") return AxisKind::Vertical;
    throw ConfigError("config key 'axis_kind': unknown strategy '" + name +
                      "' (want long|short|random|horizontal|vertical)");
}

const char* split_mode_name(SplitMode mode) {
    return mode == SplitMode::Perpendicular ? "perpendicular" : "literal";
}

SplitMode split_mode_from_name(const std::string& name) {
    if (name == "perpendicular") return SplitMode::Perpendicular;
    if (name == "literal") return SplitMode::Literal;
    throw ConfigError("config key 'split_mode': unknown mode '" + name +
                      "' (want perpendicular|literal)");
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace ersr
