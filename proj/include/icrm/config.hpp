#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>

#include "icrm/montecarlo.hpp"

namespace icrm {

/// Malformed config text, unknown keys or unusable values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Settings that belong to the severity family but are needed by the
/// closed-form moment code.
struct SeveritySettings {
    double nu = 0.75;
    double kappa = 1.75;
    double sigma = 1.5;  ///< half-normal scale after applying the convention
};

struct RunConfig {
    ModelSpec spec;
    SeveritySettings severity;
    std::uint64_t replications = 100000;
    unsigned workers = 1;
    std::filesystem::path out_dir = ".";
    /// Draws of T(t) used when a Cox time change is random.
    std::uint64_t time_samples = 10000;
    /// Raw key/value pairs after defaults and overrides.
    std::map<std::string, std::string> values;
};

/// Default values of every recognised key.
const std::map<std::string, std::string>& default_config_values();

/// Parses `key = value` lines ('#' starts a comment). Unknown keys throw
/// ConfigError. Relative paths are resolved against `base_dir`.
std::map<std::string, std::string> parse_config_text(std::istream& in);

/// Builds a RunConfig from defaults overlaid with `values`.
RunConfig build_config(const std::map<std::string, std::string>& values,
                       const std::filesystem::path& base_dir = ".");

RunConfig load_config(const std::filesystem::path& path);

/// Severity model built from the gamma + half-normal settings with the given kind.
SeverityModel make_severity(const std::string& kind, const SeveritySettings& s);

}  // namespace icrm
