#include "tumorcord/grid2d.hpp"

#include <algorithm>
#include <cmath>

#include "tumorcord/errors.hpp"

namespace tumorcord {

void Grid2D::validate() const {
    if (nx < 16) throw ConfigError("nx", "must be at least 16");
    if (nz < 16) throw ConfigError("nz", "must be at least 16");
    if (!(std::isfinite(Lx) && Lx > 0.0)) throw ConfigError("Lx", "must be positive");
    if (!(std::isfinite(Lz) && Lz > 0.0)) throw ConfigError("Lz", "must be positive");
}

double Field2D::min() const noexcept {
    return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double Field2D::max() const noexcept {
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

}  // namespace tumorcord
