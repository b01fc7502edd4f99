#include "tumorcord/stationary1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tumorcord/csv.hpp"
#include "tumorcord/errors.hpp"
#include "tumorcord/tridiagonal.hpp"

namespace tumorcord {

namespace {

constexpr double kRangeSlack = 1e-12;

double sup_diff(const Field1D& a, const Field1D& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double l2_norm(const Field1D& v, double h) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double wgt = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
        s += wgt * v[i] * v[i];
    }
    return std::sqrt(s * h);
}

void check_admissible(double w, const ModelParams& p, const FixedPointOptions& options) {
    if (!options.enforce_admissibility) return;
    const double bw = derived_constants(p).beta * w;
    if (!(bw < 1.0)) {
        throw AdmissibilityError(bw, "beta*w = " + std::to_string(bw) +
                                         " >= 1: existence and uniqueness not guaranteed");
    }
}

// Truncated source term g~(u) = [g(f(u + u0))]^+, equal to g(phi) whenever
// u + u0 lies in [0, 1].
double truncated_growth(double u, double u0, const ModelParams& p) {
    const double arg = std::clamp(u + u0, 0.0, 1.0);
    return std::max(0.0, g(f_inv(arg, p)));
}

}  // namespace

Grid1D::Grid1D(int n) : n_(n), h_(0.0) {
    if (n < 3) throw ConfigError("n", "Grid1D needs at least 3 nodes");
    h_ = 1.0 / (n - 1);
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = x(i);
    return out;
}

Field1D solve_linear_mixed(const Field1D& h, const Field1D& k, MixedBoundary bc, const Grid1D& grid) {
    const int n = grid.size();
    const double h2 = grid.spacing() * grid.spacing();
    Field1D u(static_cast<std::size_t>(n), 0.0);
    if (bc == MixedBoundary::DirichletLeft) {
        // unknowns 1..n-1, ghost u_n = u_{n-2}
        TridiagonalSystem s(static_cast<std::size_t>(n - 1));
        for (int i = 1; i < n; ++i) {
            const auto r = static_cast<std::size_t>(i - 1);
            s.diag[r] = 2.0 + h2 * h[static_cast<std::size_t>(i)];
            s.rhs[r] = h2 * k[static_cast<std::size_t>(i)];
            if (i > 1) s.lower[r] = (i == n - 1) ? -2.0 : -1.0;
            if (i < n - 1) s.upper[r] = -1.0;
        }
        const auto sol = solve_tridiagonal(s);
        for (int i = 1; i < n; ++i) u[static_cast<std::size_t>(i)] = sol[static_cast<std::size_t>(i - 1)];
    } else {
        // unknowns 0..n-2, ghost u_{-1} = u_1
        TridiagonalSystem s(static_cast<std::size_t>(n - 1));
        for (int i = 0; i < n - 1; ++i) {
            const auto r = static_cast<std::size_t>(i);
            s.diag[r] = 2.0 + h2 * h[r];
            s.rhs[r] = h2 * k[r];
            if (i > 0) s.lower[r] = -1.0;
            if (i < n - 2) s.upper[r] = (i == 0) ? -2.0 : -1.0;
        }
        const auto sol = solve_tridiagonal(s);
        std::copy(sol.begin(), sol.end(), u.begin());
    }
    return u;
}

Field1D solve_nutrient(const Field1D& phi, double w, const ModelParams& p, const Grid1D& grid) {
    if (static_cast<int>(phi.size()) != grid.size()) throw DomainError("solve_nutrient: size mismatch");
    if (!(w >= 0.0)) throw DomainError("solve_nutrient: w must be nonnegative");
    const int n = grid.size();
    const double h2 = grid.spacing() * grid.spacing();
    const double a = p.alpha * w * w;
    // unknowns c_1..c_{n-1}; c_0 = 1; ghost c_n = c_{n-2}
    TridiagonalSystem s(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) {
        const auto r = static_cast<std::size_t>(i - 1);
        s.diag[r] = 2.0 + h2 * a * phi[static_cast<std::size_t>(i)];
        if (i == 1) {
            s.rhs[r] = 1.0;
        } else {
            s.lower[r] = (i == n - 1) ? -2.0 : -1.0;
        }
        if (i < n - 1) s.upper[r] = -1.0;
    }
    const auto sol = solve_tridiagonal(s);
    Field1D c(static_cast<std::size_t>(n));
    c[0] = 1.0;
    for (int i = 1; i < n; ++i) c[static_cast<std::size_t>(i)] = sol[static_cast<std::size_t>(i - 1)];
    return c;
}

Field1D solve_cell(const Field1D& sigma_field, double w, const ModelParams& p, const Grid1D& grid,
                   const FixedPointOptions& options) {
    const int n = grid.size();
    if (static_cast<int>(sigma_field.size()) != n) throw DomainError("solve_cell: size mismatch");
    for (double s : sigma_field) {
        if (!(s >= -kRangeSlack && s <= 1.0 + kRangeSlack)) {
            throw DomainError("solve_cell: nutrient field must lie in [0, 1]");
        }
    }
    if (!(w >= 0.0)) throw DomainError("solve_cell: w must be nonnegative");
    check_admissible(w, p, options);

    const double u0 = F(p.phi0, p);
    const double h2 = grid.spacing() * grid.spacing();
    const double w2 = w * w;
    const auto m = static_cast<std::size_t>(n - 1);  // unknowns u_0..u_{n-2}, u_{n-1} = 0

    Field1D gamma_field(m);
    for (std::size_t i = 0; i < m; ++i) gamma_field[i] = growth_regulation(sigma_field[i], p);

    // The Laplacian is fixed; only the source changes between sweeps.
    TridiagonalSystem base(m);
    for (std::size_t i = 0; i < m; ++i) {
        base.diag[i] = 2.0;
        if (i > 0) base.lower[i] = -1.0;
        if (i + 1 < m) base.upper[i] = (i == 0) ? -2.0 : -1.0;
    }

    auto picard_map = [&](const Field1D& u) {
        TridiagonalSystem s = base;
        for (std::size_t i = 0; i < m; ++i) {
            s.rhs[i] = h2 * w2 * truncated_growth(u[i], u0, p) * gamma_field[i];
        }
        return solve_tridiagonal(s);
    };

    Field1D u(m, 0.0);
    double theta = std::clamp(options.damping, 1e-3, 1.0);
    double prev_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int it = 0;
    double last_update = 0.0;
    for (; it < options.inner_max_iters; ++it) {
        const Field1D next = picard_map(u);
        const double residual = sup_diff(next, u);
        if (residual > prev_residual && theta > 1e-3) theta *= 0.5;
        prev_residual = residual;
        last_update = theta * residual;
        for (std::size_t i = 0; i < m; ++i) u[i] += theta * (next[i] - u[i]);
        if (last_update < options.inner_tol) {
            converged = true;
            break;
        }
    }

    Field1D phi(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m; ++i) phi[i] = f_inv(std::clamp(u[i] + u0, 0.0, 1.0), p);
    phi[m] = p.phi0;
    if (!converged) {
        throw ConvergenceError("solve_cell: Picard iteration did not converge", phi, it, last_update);
    }
    return phi;
}

Field1D apply_fixed_point_map(const Field1D& phi, double w, const ModelParams& p, const Grid1D& grid,
                              const FixedPointOptions& options) {
    return solve_cell(solve_nutrient(phi, w, p, grid), w, p, grid, options);
}

std::pair<double, double> stationary_residuals(const Field1D& phi, const Field1D& c, double w,
                                               const ModelParams& p, const Grid1D& grid) {
    const int n = grid.size();
    const double h2 = grid.spacing() * grid.spacing();
    const double w2 = w * w;
    Field1D Fphi(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) Fphi[i] = F(std::clamp(phi[i], 0.0, 1.0), p);

    double res_phi = 0.0;
    for (int i = 0; i < n - 1; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double left = (i == 0) ? Fphi[1] : Fphi[k - 1];
        const double lap = (left - 2.0 * Fphi[k] + Fphi[k + 1]) / h2;
        res_phi = std::max(res_phi, std::abs(-lap - w2 * g(phi[k]) * growth_regulation(c[k], p)));
    }
    double res_c = 0.0;
    for (int i = 1; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double right = (i == n - 1) ? c[k - 1] : c[k + 1];
        const double lap = (c[k - 1] - 2.0 * c[k] + right) / h2;
        res_c = std::max(res_c, std::abs(-lap + p.alpha * w2 * phi[k] * c[k]));
    }
    return {res_phi, res_c};
}

StationarySolution fixed_point(double w, const ModelParams& p, const Grid1D& grid,
                               const FixedPointOptions& options) {
    if (!(w >= 0.0)) throw DomainError("fixed_point: w must be nonnegative");
    const double beta_w = derived_constants(p).beta * w;
    check_admissible(w, p, options);

    Field1D phi(static_cast<std::size_t>(grid.size()), p.phi0);
    double update = 0.0;
    int it = 0;
    bool converged = false;
    while (it < options.max_iters) {
        Field1D next = apply_fixed_point_map(phi, w, p, grid, options);
        update = sup_diff(next, phi);
        phi = std::move(next);
        ++it;
        if (update < options.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("fixed_point: outer iteration did not converge", phi, it, update);
    }

    StationarySolution sol;
    sol.w = w;
    sol.x = grid.nodes();
    sol.c = solve_nutrient(phi, w, p, grid);
    sol.phi = std::move(phi);
    sol.iterations = it;
    sol.last_update = update;
    sol.beta_w = beta_w;
    sol.admissible = beta_w < 1.0;
    std::tie(sol.residual_phi, sol.residual_c) = stationary_residuals(sol.phi, sol.c, w, p, grid);
    if (!(sol.residual_phi <= options.residual_tol && sol.residual_c <= options.residual_tol)) {
        throw ConvergenceError("fixed_point: discrete residual above bound (phi " +
                                   std::to_string(sol.residual_phi) + ", c " +
                                   std::to_string(sol.residual_c) + ")",
                               sol.phi, it, update);
    }
    return sol;
}

bool DiagnosticsRecord::all_pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* DiagnosticsRecord::find(const std::string& name) const noexcept {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

DiagnosticsRecord verify_stationary(const StationarySolution& sol, const ModelParams& p) {
    const DerivedConstants d = derived_constants(p);
    const std::size_t n = sol.phi.size();
    const double h = n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0;
    DiagnosticsRecord rec;
    auto add = [&](std::string name, double observed, double bound) {
        rec.checks.push_back({std::move(name), observed <= bound, observed, bound});
    };

    double dist = 0.0;
    double deficit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dist = std::max(dist, std::abs(sol.phi[i] - p.phi0));
        deficit = std::max(deficit, std::abs(1.0 - sol.c[i]));
    }
    const double b2w = d.beta2 * sol.w;
    add("distance_to_phi0", dist, d.gM / (d.Lg * d.CP) * b2w * b2w);
    add("nutrient_apriori", deficit, p.alpha * sol.w * sol.w * l2_norm(sol.phi, h));

    double rise = 0.0;
    for (std::size_t i = 1; i < n; ++i) rise = std::max(rise, sol.c[i] - sol.c[i - 1]);
    add("c_monotone", rise, kRangeSlack);

    double phi_out = 0.0;
    double c_out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        phi_out = std::max({phi_out, d.epsilon - sol.phi[i], sol.phi[i] - 1.0});
        c_out = std::max({c_out, -sol.c[i], sol.c[i] - 1.0});
    }
    add("phi_range", phi_out, kRangeSlack);
    add("c_range", c_out, kRangeSlack);
    const double bc = n ? std::max(std::abs(sol.c.front() - 1.0), std::abs(sol.phi.back() - p.phi0)) : 0.0;
    add("boundary_values", bc, kRangeSlack);
    return rec;
}

void write_stationary_csv(const std::string& path, const StationarySolution& sol) {
    CsvWriter out(path, {"x", "phi", "c"});
    for (std::size_t i = 0; i < sol.phi.size(); ++i) out.row({sol.x[i], sol.phi[i], sol.c[i]});
}

}  // namespace tumorcord
