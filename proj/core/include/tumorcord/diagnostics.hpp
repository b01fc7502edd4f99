#pragma once

#include <optional>
#include <string>
#include <utility>

#include "tumorcord/constitutive.hpp"
#include "tumorcord/evolution2d.hpp"

namespace tumorcord {

struct CordMetrics {
    double tail_width = 0.0;       ///< mean interface x over the rear window
    double tail_width_spread = 0.0;///< max |row width - mean| over the window
    double head_position = 0.0;    ///< max z on the interface
    std::optional<double> xbar_measured;  ///< mean depth where c crosses c0
    double viable_fraction = 0.0;  ///< share of the cord area with c >= c0
    std::pair<double, double> window{0.0, 0.0};
    int rows = 0;
};

/// Default rear window [0.1, 0.4] * head position.
std::pair<double, double> default_window(double head_position);

/// Throws MeasurementError for an empty cord or a window not behind the head.
CordMetrics measure(const EvolutionState& state, const Grid2D& grid, const ModelParams& p,
                    std::optional<std::pair<double, double>> window = std::nullopt,
                    double heaviside_width_cells = 1.5);

struct TheoryReport {
    double tail_width = 0.0;
    double w0 = 0.0;                  ///< general root of the width condition
    std::optional<double> w0_linear;  ///< closed-form root when Gamma is linear
    double relative_deviation = 0.0;  ///< |tail_width - w0| / w0
    double beta_w0 = 0.0;
    bool admissible = false;
    bool rejected = false;            ///< beta w0 >= 1: theory gives no width
    std::optional<double> xbar_theory;    ///< x-bar at the measured width, rescaled to [0,1]
    std::optional<double> xbar_measured;  ///< measured depth / tail width
    double viable_fraction = 0.0;

    std::string to_text() const;
    void write_csv(const std::string& path) const;
};

TheoryReport compare_to_theory(const CordMetrics& metrics, const ModelParams& p);

}  // namespace tumorcord
