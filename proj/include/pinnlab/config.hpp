#pragma once

#include "pinnlab/training.hpp"

#include <map>
#include <string>

namespace pinnlab {

/// Everything a command run needs, parsed and validated from one JSON
/// document. The raw text is kept so commands can echo the configuration
/// into their output directory verbatim.
struct RunConfig {
    TrainConfig train;
    std::filesystem::path output = "out";
    std::string raw;
};

/// Parses and validates; rejects bad input with messages naming the
/// offending field path (e.g. "sampler.interior_batch: must be an integer").
RunConfig parse_run_config(const std::string& text);

RunConfig load_run_config(const std::filesystem::path& path);

/// Bundled case presets keyed by name (tgv-desk, tgv, re40, re40-steady,
/// re200, re200-steady, re200-data).
const std::map<std::string, std::string>& config_presets();

RunConfig preset_run_config(const std::string& name);

} // namespace pinnlab
