#include "tumorcord/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "tumorcord/csv.hpp"
#include "tumorcord/errors.hpp"
#include "tumorcord/freeboundary.hpp"

namespace tumorcord {

std::pair<double, double> default_window(double head_position) {
    return {0.1 * head_position, 0.4 * head_position};
}

CordMetrics measure(const EvolutionState& state, const Grid2D& grid, const ModelParams& p,
                    std::optional<std::pair<double, double>> window, double heaviside_width_cells) {
    if (state.psi.min() >= 0.0) throw MeasurementError("measure: no tumor region (psi >= 0 everywhere)");
    const auto contour = extract_interface(state.psi, grid);
    double head = -1.0;
    for (const auto& line : contour) {
        for (const auto& pt : line) head = std::max(head, pt.z);
    }
    if (head < 0.0) throw MeasurementError("measure: tumor region has no interface");

    CordMetrics m;
    m.head_position = head;
    m.window = window.value_or(default_window(head));
    const auto [z_lo, z_hi] = m.window;
    if (!(z_lo >= 0.0 && z_lo < z_hi && z_hi <= grid.Lz)) {
        throw MeasurementError("measure: window must satisfy 0 <= z_lo < z_hi <= Lz");
    }
    if (z_hi > head) throw MeasurementError("measure: window extends ahead of the head");

    double sum = 0.0;
    double xbar_sum = 0.0;
    int xbar_rows = 0;
    std::vector<double> widths;
    for (int j = 0; j < grid.nz; ++j) {
        const double z = grid.z(j);
        if (z < z_lo || z > z_hi) continue;
        const double xw = row_interface_x(state.psi, grid, j);
        if (xw < 0.0) throw MeasurementError("measure: window row without tumor at z = " + format_short(z));
        widths.push_back(xw);
        sum += xw;
        for (int i = 0; i + 1 < grid.nx; ++i) {
            const double a = state.c(i, j) - p.c0;
            const double b = state.c(i + 1, j) - p.c0;
            if (a >= 0.0 && b < 0.0) {
                xbar_sum += grid.x(i) + grid.hx() * a / (a - b);
                ++xbar_rows;
                break;
            }
        }
    }
    if (widths.empty()) throw MeasurementError("measure: window contains no grid rows");
    m.rows = static_cast<int>(widths.size());
    m.tail_width = sum / m.rows;
    for (double wv : widths) m.tail_width_spread = std::max(m.tail_width_spread, std::abs(wv - m.tail_width));
    if (xbar_rows > 0) m.xbar_measured = xbar_sum / xbar_rows;

    const double width = heaviside_width_cells * std::max(grid.hx(), grid.hz());
    double area = 0.0;
    double viable = 0.0;
    for (int j = 0; j < grid.nz; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double chi = smoothed_inside(state.psi(i, j), width) * grid.volume(i, j);
            area += chi;
            if (state.c(i, j) >= p.c0) viable += chi;
        }
    }
    m.viable_fraction = area > 0.0 ? viable / area : 0.0;
    return m;
}

TheoryReport compare_to_theory(const CordMetrics& metrics, const ModelParams& p) {
    TheoryReport r;
    r.tail_width = metrics.tail_width;
    const WidthSolution general = solve_width_general(p);
    r.w0 = general.w0;
    r.beta_w0 = general.beta_w0;
    r.admissible = general.admissible;
    r.rejected = !general.admissible;
    if (p.is_linear()) r.w0_linear = solve_width_linear(p).w0;
    r.relative_deviation = std::abs(metrics.tail_width - r.w0) / r.w0;
    if (metrics.tail_width > 0.0) {
        r.xbar_theory = xbar_of_w(metrics.tail_width, p);
        if (metrics.xbar_measured) r.xbar_measured = *metrics.xbar_measured / metrics.tail_width;
    }
    r.viable_fraction = metrics.viable_fraction;
    return r;
}

std::string TheoryReport::to_text() const {
    std::ostringstream os;
    auto opt = [](const std::optional<double>& v) { return v ? format_short(*v) : std::string("n/a"); };
    auto line = [&](const std::string& key, const std::string& value) {
        os << std::left << std::setw(24) << key << std::right << std::setw(14) << value << '\n';
    };
    line("measured tail width", format_short(tail_width));
    line("w0 (width condition)", format_short(w0));
    line("w0 (tanh closed form)", opt(w0_linear));
    line("relative deviation", format_short(relative_deviation));
    line("beta*w0", format_short(beta_w0));
    line("admissible", admissible ? "yes" : "no");
    line("status", rejected ? "REJECTED" : "accepted");
    line("xbar theory", opt(xbar_theory));
    line("xbar measured", opt(xbar_measured));
    line("viable fraction", format_short(viable_fraction));
    return os.str();
}

void TheoryReport::write_csv(const std::string& path) const {
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("nan"); };
    CsvWriter out(path, {"tail_width", "w0", "w0_linear", "relative_deviation", "beta_w0", "admissible",
                         "rejected", "xbar_theory", "xbar_measured", "viable_fraction"});
    out.text_row({format_real(tail_width), format_real(w0), opt(w0_linear), format_real(relative_deviation),
                  format_real(beta_w0), admissible ? "1" : "0", rejected ? "1" : "0", opt(xbar_theory),
                  opt(xbar_measured), format_real(viable_fraction)});
}

}  // namespace tumorcord
