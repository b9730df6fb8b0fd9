#pragma once

#include <stdexcept>
#include <string>

namespace ersr {

// Base for all recoverable pipeline errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mask has no foreground pixels where at least one is required.
class EmptyMaskError : public Error {
public:
    explicit EmptyMaskError(const std::string& msg) : Error(msg) {}
};

// Ellipse fit cannot produce a valid ellipse (too few points, collinear
// points, or a degenerate conic).
class FitDegenerateError : public Error {
public:
    explicit FitDegenerateError(const std::string& msg) : Error(msg) {}
};

// Surface-distance metric requested on a mask with an empty surface.
class MetricUndefinedError : public Error {
public:
    explicit MetricUndefinedError(const std::string& msg) : Error(msg) {}
};

// Malformed file, unreadable path, or unsupported format.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Bad key, out-of-range value, or unreadable config file.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace ersr
