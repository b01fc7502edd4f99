#pragma once

#include <functional>

namespace tumorcord {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Simpson on [a, b] with Richardson correction. The absolute
/// tolerance is split between halves at each level. Throws NumericalError
/// if max_depth is reached without meeting the tolerance.
QuadratureResult adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                                  double abs_tol = 1e-12, int max_depth = 50);

}  // namespace tumorcord
