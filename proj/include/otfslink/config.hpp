#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "otfslink/linksim.hpp"

namespace otfs {

/// Raised for any malformed configuration file; .what() names the offending
/// section/key so the CLI can print a useful diagnostic.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// [pilots] section for the plan-pilots and estimate-demo subcommands.
struct PilotSettings {
    double delay_spread_s = 0.0;
    double doppler_spread_hz = 0.0;
    double region_fraction = 0.0;
    double pilot_amplitude = 1.0;
    std::optional<double> pilot_snr_db;  // absent = noiseless demo
};

struct FileConfig {
    LinkConfig link;
    bool run_both_schemes = false;  // [link] scheme = both
    std::optional<PilotSettings> pilots;
};

/// Strict INI-style parser for the sections [frame], [channel], [link],
/// [pilots]. Keys take SI units (Hz, seconds). Unknown sections or keys are
/// errors; so are missing required keys.
FileConfig load_config_file(const std::string& path);
FileConfig parse_config_text(const std::string& text);

}  // namespace otfs
