#pragma once

#include <stdexcept>
#include <string>

namespace cotrack {

// Configuration problems: bad hyperparameters, malformed config files,
// missing required flags. CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data problems: unreadable images, ground-truth mismatches, empty result
// directories. CLI maps these to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Tracking-state problems: target left the frame, classifier queried before
// it was trained.
struct TrackError : std::runtime_error {
    explicit TrackError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cotrack
