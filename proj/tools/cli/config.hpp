#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tumorcord/evolution2d.hpp"
#include "tumorcord/freeboundary.hpp"
#include "tumorcord/stationary1d.hpp"

namespace tumorcord::cli {

struct StationarySection {
    int n = 2001;
    std::optional<double> w;  ///< empty: use the width root
    FixedPointOptions options;
};

enum class WidthMethod { Linear, General, Both };

struct WidthSection {
    WidthMethod method = WidthMethod::Both;
    WidthScanOptions scan;
    int reconstruct_n = 2001;  ///< 0 disables the perturbative reconstruction
};

struct EvolutionSection {
    EvolutionConfig config;
    std::optional<std::pair<double, double>> window;  ///< empty: default rear window
};

/// Parameter axes for the width sweep. Empty axes fall back to [model].
struct SweepSection {
    std::vector<double> mu;
    std::vector<double> phi0;
    std::vector<double> gamma;
    std::vector<double> c0;
    std::vector<double> alpha;
};

struct RunConfig {
    ModelParams model;
    StationarySection stationary;
    WidthSection width;
    EvolutionSection evolution;
    SweepSection sweep;
    std::string out_dir = "out";

    /// Validates every section. Throws ConfigError with a "section.key" field.
    void validate() const;
};

/// Reads an INI-style file with sections [model], [stationary], [width],
/// [evolution], [sweep], [output]. Unknown sections or keys are rejected.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Full text form of a config, every key spelled out. Parsing it back yields
/// an equivalent config.
std::string render_config(const RunConfig& cfg);

/// Reference config with all defaults.
std::string reference_config();

/// Cartesian product of the sweep axes applied on top of cfg.model, in
/// row-major order (mu slowest, alpha fastest).
std::vector<ModelParams> sweep_points(const RunConfig& cfg);

}  // namespace tumorcord::cli
