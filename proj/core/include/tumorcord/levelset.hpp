#pragma once

#include <vector>

#include "tumorcord/grid2d.hpp"

namespace tumorcord {

struct Point2D {
    double x = 0.0;
    double z = 0.0;
};

using Polyline = std::vector<Point2D>;

/// Smoothed indicator of {psi < 0}: 1 inside, 0 outside, sine ramp over
/// |psi| < width.
double smoothed_inside(double psi, double width) noexcept;

/// Fields the smoothed indicator over the grid.
Field2D inside_indicator(const Field2D& psi, double width);

/// First-order upwind transport psi_t + v . grad psi = 0 over time dt,
/// sub-stepped to CFL 0.5. Returns the number of sub-steps taken.
int advect_level_set(Field2D& psi, const VectorField2D& velocity, const Grid2D& grid, double dt);

/// Fast-sweeping redistancing to |grad psi| = 1 keeping the zero set.
/// Nodes adjacent to the interface are initialised from edge crossings.
void reinitialize(Field2D& psi, const Grid2D& grid, int sweeps = 2);

/// Marching-squares zero contour of psi, chained into ordered polylines.
std::vector<Polyline> extract_interface(const Field2D& psi, const Grid2D& grid);

/// Outermost x where psi changes sign from negative to nonnegative along
/// row j (linear interpolation), or a negative value when the row is empty.
double row_interface_x(const Field2D& psi, const Grid2D& grid, int j);

/// Number of 4-connected components of {psi < 0}.
int count_inside_components(const Field2D& psi, const Grid2D& grid);

/// Largest deviation from unit gradient magnitude over nodes with
/// |psi| < band (central differences, interior nodes only).
double signed_distance_defect(const Field2D& psi, const Grid2D& grid, double band);

}  // namespace tumorcord
