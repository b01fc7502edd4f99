#include "tumorcord/freeboundary.hpp"

#include <algorithm>
#include <cmath>

#include "tumorcord/csv.hpp"
#include "tumorcord/errors.hpp"
#include "tumorcord/quadrature.hpp"

namespace tumorcord {

namespace {

double decay_rate(const ModelParams& p) { return std::sqrt(p.alpha * p.phi0); }

// acosh(level * cosh(s)) for s >= 0 without overflow.
double acosh_scaled_cosh(double level, double s) {
    if (s < 20.0) return std::acosh(level * std::cosh(s));
    // level*cosh(s) = level e^s (1 + e^{-2s}) / 2, acosh(y) = ln(2y) + ln((1 + sqrt(1 - 1/y^2)) / 2)
    const double log2y = std::log(level) + s + std::log1p(std::exp(-2.0 * s));
    const double inv_y2 = std::exp(-2.0 * (log2y - std::log(2.0)));
    return log2y + std::log(0.5 * (1.0 + std::sqrt(1.0 - inv_y2)));
}

// Position where c0_w equals level in (0,1), or empty when c0_w(1) > level.
std::optional<double> crossing(double w, double level, const ModelParams& p) {
    const double s = w * decay_rate(p);
    if (s <= 0.0) return std::nullopt;
    if (c0_closed_form(1.0, w, p) > level) return std::nullopt;
    const double x = 1.0 - acosh_scaled_cosh(level, s) / s;
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

double c0_closed_form(double x, double w, const ModelParams& p) {
    const double s = w * decay_rate(p);
    if (s <= 0.0) return 1.0;
    return std::exp(-s * x) * (1.0 + std::exp(-2.0 * s * (1.0 - x))) / (1.0 + std::exp(-2.0 * s));
}

std::optional<double> xbar_of_w(double w, const ModelParams& p) {
    if (!(w >= 0.0)) throw DomainError("xbar_of_w: w must be nonnegative");
    return crossing(w, p.c0, p);
}

double capital_C(double w, const ModelParams& p, double abs_tol) {
    if (!(w >= 0.0)) throw DomainError("capital_C: w must be nonnegative");
    std::vector<double> cuts{0.0, 1.0};
    if (auto xb = crossing(w, p.c0, p)) cuts.push_back(*xb);
    if (const auto* tt = std::get_if<TwoThresholdGrowth>(&p.growth)) {
        if (auto x1 = crossing(w, tt->c1, p)) cuts.push_back(*x1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double x) { return growth_regulation(c0_closed_form(x, w, p), p); };
    const double piece_tol = abs_tol / static_cast<double>(cuts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], piece_tol).value;
    }
    return total;
}

namespace {

void fill_admissibility(WidthSolution& sol, const ModelParams& p) {
    const DerivedConstants d = derived_constants(p);
    sol.beta_w0 = d.beta * sol.w0;
    sol.admissible = sol.beta_w0 < 1.0;
    sol.nu = (d.beta2 * sol.w0) * (d.beta2 * sol.w0);
    sol.xbar = xbar_of_w(sol.w0, p);
}

}  // namespace

WidthSolution solve_width_general(const ModelParams& p, const WidthScanOptions& options) {
    std::vector<std::pair<double, double>> scanned;
    double prev = 0.0;
    const double c_at_zero = capital_C(0.0, p, options.quad_tol);
    scanned.emplace_back(0.0, c_at_zero);
    if (!(c_at_zero > 0.0)) throw NoRootError("solve_width_general: C(0) is not positive", scanned);

    double lo = 0.0;
    double hi = 0.0;
    bool found = false;
    for (double w = options.w_seed; w <= options.w_max; w *= 2.0) {
        const double cw = capital_C(w, p, options.quad_tol);
        scanned.emplace_back(w, cw);
        if (cw < 0.0) {
            lo = prev;
            hi = w;
            found = true;
            break;
        }
        prev = w;
    }
    if (!found) {
        throw NoRootError("solve_width_general: no sign change of C(w) below w_max", scanned);
    }

    WidthSolution sol;
    sol.bracket = {lo, hi};
    int it = 0;
    while (hi - lo > options.w_tol && it < 200) {
        const double mid = 0.5 * (lo + hi);
        const double cm = capital_C(mid, p, options.quad_tol);
        if (cm == 0.0) {
            lo = hi = mid;
            break;
        }
        (cm > 0.0 ? lo : hi) = mid;
        ++it;
    }
    sol.w0 = 0.5 * (lo + hi);
    sol.iterations = it;
    fill_admissibility(sol, p);
    return sol;
}

std::pair<double, double> linear_width_bracket(const ModelParams& p) {
    if (!(p.c0 > 0.0 && p.c0 < 1.0)) throw DomainError("linear width: c0 must lie in (0, 1)");
    const double k = decay_rate(p);
    return {std::sqrt(3.0 * (1.0 - p.c0)) / k, 1.0 / (p.c0 * k)};
}

WidthSolution solve_width_linear(const ModelParams& p) {
    if (!p.is_linear()) throw DomainError("solve_width_linear: growth law is not linear");
    const auto bracket = linear_width_bracket(p);
    const double k = decay_rate(p);
    auto residual = [&](double w) { return std::tanh(w * k) - p.c0 * w * k; };

    double lo = bracket.first;
    double hi = bracket.second;
    int it = 0;
    for (; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double r = residual(mid);
        if (r == 0.0) {
            lo = hi = mid;
            break;
        }
        (r > 0.0 ? lo : hi) = mid;
    }
    WidthSolution sol;
    sol.bracket = bracket;
    sol.w0 = 0.5 * (lo + hi);
    sol.iterations = it;
    fill_admissibility(sol, p);
    return sol;
}

Field1D perturbation_phi1(double w, const ModelParams& p, const Grid1D& grid) {
    if (!(w >= 0.0)) throw DomainError("perturbation_phi1: w must be nonnegative");
    const double gamma_max = derived_constants(p).GammaM;
    const double scale = g(p.phi0) / gamma_max;
    const auto n = static_cast<std::size_t>(grid.size());
    Field1D h(n, 0.0);
    Field1D k(n);
    for (std::size_t i = 0; i < n; ++i) {
        k[i] = scale * growth_regulation(c0_closed_form(grid.x(static_cast<int>(i)), w, p), p);
    }
    return solve_linear_mixed(h, k, MixedBoundary::DirichletRight, grid);
}

Reconstruction reconstruct_and_errors(double w, const ModelParams& p, const Grid1D& grid,
                                      const FixedPointOptions& options) {
    Reconstruction rec;
    rec.w = w;
    rec.exact = fixed_point(w, p, grid, options);
    const double b2w = derived_constants(p).beta2 * w;
    rec.nu = b2w * b2w;
    rec.x = grid.nodes();
    rec.phi1 = perturbation_phi1(w, p, grid);
    const std::size_t n = rec.x.size();
    rec.c0.resize(n);
    rec.phi_approx.resize(n);
    rec.E_phi.resize(n);
    rec.E_c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rec.c0[i] = c0_closed_form(rec.x[i], w, p);
        rec.phi_approx[i] = p.phi0 + rec.nu * rec.phi1[i];
        rec.E_phi[i] = 1.0 - rec.phi_approx[i] / rec.exact.phi[i];
        rec.E_c[i] = 1.0 - rec.c0[i] / rec.exact.c[i];
        rec.max_abs_E_phi = std::max(rec.max_abs_E_phi, std::abs(rec.E_phi[i]));
        rec.max_abs_E_c = std::max(rec.max_abs_E_c, std::abs(rec.E_c[i]));
    }
    rec.c_approx = rec.c0;
    return rec;
}

void write_reconstruction_csv(const std::string& path, const Reconstruction& rec) {
    CsvWriter out(path, {"x", "c0", "phi1", "phi_approx", "E_phi", "E_c"});
    for (std::size_t i = 0; i < rec.x.size(); ++i) {
        out.row({rec.x[i], rec.c0[i], rec.phi1[i], rec.phi_approx[i], rec.E_phi[i], rec.E_c[i]});
    }
}

void write_width_summary_csv(const std::string& path, const WidthSolution& sol) {
    CsvWriter out(path, {"w0", "bracket_lo", "bracket_hi", "beta_w0", "admissible", "nu", "xbar"});
    out.text_row({format_real(sol.w0), format_real(sol.bracket.first), format_real(sol.bracket.second),
                  format_real(sol.beta_w0), sol.admissible ? "1" : "0", format_real(sol.nu),
                  sol.xbar ? format_real(*sol.xbar) : std::string("nan")});
}

}  // namespace tumorcord
