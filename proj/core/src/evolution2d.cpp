#include "tumorcord/evolution2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sparse_solver.hpp"
#include "tumorcord/csv.hpp"
#include "tumorcord/errors.hpp"

namespace tumorcord {

namespace {

constexpr double kRangeSlack = 1e-9;

}  // namespace

void EvolutionConfig::validate() const {
    grid.validate();
    params.validate();
    if (!(std::isfinite(dt) && dt >= 0.0)) throw ConfigError("dt", "must be nonnegative (0 = automatic)");
    if (dt > growth_step_bound(params)) {
        throw ConfigError("dt", "exceeds the growth-source stability bound " +
                                    format_short(growth_step_bound(params)));
    }
    if (!(std::isfinite(dt_max) && dt_max > 0.0)) throw ConfigError("dt_max", "must be positive");
    if (!(std::isfinite(dt_min) && dt_min > 0.0 && dt_min < dt_max)) {
        throw ConfigError("dt_min", "must satisfy 0 < dt_min < dt_max");
    }
    if (!(std::isfinite(t_end) && t_end > 0.0)) throw ConfigError("t_end", "must be positive");
    for (double t : snapshot_times) {
        if (!(t >= 0.0 && t <= t_end)) throw ConfigError("snapshot_times", "entries must lie in [0, t_end]");
    }
    if (initial_shape != InitialShape::Full &&
        !(std::isfinite(r0) && r0 > 0.0 && r0 < std::min(grid.Lx, grid.Lz))) {
        throw ConfigError("r0", "must satisfy 0 < r0 < min(Lx, Lz)");
    }
    if (reinit_every < 1) throw ConfigError("reinit_every", "must be at least 1");
    if (!(std::isfinite(heaviside_width) && heaviside_width >= 0.0)) {
        throw ConfigError("heaviside_width", "must be nonnegative");
    }
    if (!(solver_tol > 0.0 && solver_tol < 1e-3)) throw ConfigError("solver_tol", "must lie in (0, 1e-3)");
}

double growth_step_bound(const ModelParams& p) {
    const DerivedConstants d = derived_constants(p);
    return 1.0 / (d.Lg * d.GammaM);
}

double stable_dt(const EvolutionConfig& cfg) {
    if (cfg.dt > 0.0) return cfg.dt;
    return std::min(cfg.dt_max, 0.25 * growth_step_bound(cfg.params));
}

EvolutionState init_state(const EvolutionConfig& cfg) {
    cfg.validate();
    const Grid2D& grid = cfg.grid;
    EvolutionState s;
    s.t = 0.0;
    s.phi = Field2D(grid, cfg.params.phi0);
    s.c = Field2D(grid, 1.0);
    s.psi = Field2D(grid, 0.0);
    const double far = 2.0 * (grid.Lx + grid.Lz);
    for (int j = 0; j < grid.nz; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            const double z = grid.z(j);
            switch (cfg.initial_shape) {
                case InitialShape::QuarterDisk: s.psi(i, j) = std::hypot(x, z) - cfg.r0; break;
                case InitialShape::Stripe: s.psi(i, j) = x - cfg.r0; break;
                case InitialShape::Full: s.psi(i, j) = -far; break;
            }
        }
    }
    return s;
}

VectorField2D cell_velocity(const EvolutionState& state, const ModelParams& p, const Grid2D& grid) {
    const int nx = grid.nx;
    const int nz = grid.nz;
    Field2D pot(grid, 0.0);
    for (std::size_t k = 0; k < pot.size(); ++k) pot[k] = stress_potential(state.phi[k], p);
    VectorField2D v{Field2D(grid, 0.0), Field2D(grid, 0.0)};
    const double hx = grid.hx();
    const double hz = grid.hz();
    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            double gx;
            if (i == 0) {
                gx = 0.0;
            } else if (i == nx - 1) {
                gx = (pot(i, j) - pot(i - 1, j)) / hx;
            } else {
                gx = (pot(i + 1, j) - pot(i - 1, j)) / (2.0 * hx);
            }
            double gz;
            if (j == 0) {
                gz = 0.0;
            } else if (j == nz - 1) {
                gz = (pot(i, j) - pot(i, j - 1)) / hz;
            } else {
                gz = (pot(i, j + 1) - pot(i, j - 1)) / (2.0 * hz);
            }
            v.vx(i, j) = -gx;
            v.vz(i, j) = -gz;
        }
    }
    return v;
}

struct Integrator::Impl {
    EvolutionConfig cfg;
    detail::ReferencePcg nutrient_pcg;
    detail::ReferencePcg cell_pcg;
    double nutrient_dt = -1.0;
    double cell_dt = -1.0;
    long steps = 0;

    explicit Impl(EvolutionConfig c) : cfg(std::move(c)) {}

    bool nutrient_dirichlet(int i, int) const { return i == 0; }
    bool cell_dirichlet(int i, int j) const { return i == cfg.grid.nx - 1 || j == cfg.grid.nz - 1; }

    // Fills the symmetric diffusion couplings with face coefficients D_f,
    // eliminating Dirichlet nodes (their couplings go to the right-hand side).
    template <class FaceCoeff, class IsDirichlet>
    void assemble_diffusion(detail::Stencil5& A, const FaceCoeff& face, const IsDirichlet& dirichlet) const {
        const Grid2D& g = cfg.grid;
        const double hx = g.hx();
        const double hz = g.hz();
        for (int j = 0; j < g.nz; ++j) {
            const double wz = (j == 0 || j == g.nz - 1) ? 0.5 : 1.0;
            for (int i = 0; i < g.nx; ++i) {
                const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
                const std::size_t k = g.index(i, j);
                if (i + 1 < g.nx) {
                    const double T = face(k, k + 1) * wz * hz / hx;
                    const bool dk = dirichlet(i, j);
                    const bool dn = dirichlet(i + 1, j);
                    if (!dk) A.diag[k] += T;
                    if (!dn) A.diag[k + 1] += T;
                    A.east[k] = (dk || dn) ? 0.0 : -T;
                }
                if (j + 1 < g.nz) {
                    const std::size_t q = g.index(i, j + 1);
                    const double T = face(k, q) * wx * hx / hz;
                    const bool dk = dirichlet(i, j);
                    const bool dn = dirichlet(i, j + 1);
                    if (!dk) A.diag[k] += T;
                    if (!dn) A.diag[q] += T;
                    A.north[k] = (dk || dn) ? 0.0 : -T;
                }
            }
        }
    }

    // Right-hand-side contribution T * value from Dirichlet neighbours.
    template <class FaceCoeff, class IsDirichlet, class Value>
    void dirichlet_lift(std::vector<double>& rhs, const FaceCoeff& face, const IsDirichlet& dirichlet,
                        const Value& value, std::vector<double>* coupling = nullptr) const {
        const Grid2D& g = cfg.grid;
        const double hx = g.hx();
        const double hz = g.hz();
        for (int j = 0; j < g.nz; ++j) {
            const double wz = (j == 0 || j == g.nz - 1) ? 0.5 : 1.0;
            for (int i = 0; i < g.nx; ++i) {
                const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
                const std::size_t k = g.index(i, j);
                auto link = [&](std::size_t a, bool da, std::size_t b, bool db, double T) {
                    if (da == db) return;
                    const std::size_t free_node = da ? b : a;
                    const std::size_t fixed_node = da ? a : b;
                    rhs[free_node] += T * value(fixed_node);
                    if (coupling) (*coupling)[free_node] += T;
                };
                if (i + 1 < g.nx) {
                    link(k, dirichlet(i, j), k + 1, dirichlet(i + 1, j), face(k, k + 1) * wz * hz / hx);
                }
                if (j + 1 < g.nz) {
                    const std::size_t q = g.index(i, j + 1);
                    link(k, dirichlet(i, j), q, dirichlet(i, j + 1), face(k, q) * wx * hx / hz);
                }
            }
        }
    }

    void ensure_nutrient_reference(double dt) {
        if (nutrient_pcg.ready() && nutrient_dt == dt) return;
        const Grid2D& g = cfg.grid;
        detail::Stencil5 ref(g);
        const double shift = 1.0 / dt + 0.5 * cfg.params.alpha * cfg.params.phi0;
        auto dir = [this](int i, int j) { return nutrient_dirichlet(i, j); };
        assemble_diffusion(ref, [](std::size_t, std::size_t) { return 1.0; }, dir);
        for (int j = 0; j < g.nz; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                ref.diag[k] = dir(i, j) ? 1.0 : ref.diag[k] + g.volume(i, j) * shift;
            }
        }
        nutrient_pcg.factorize(ref);
        nutrient_dt = dt;
    }

    void ensure_cell_reference(double dt) {
        if (cell_pcg.ready() && cell_dt == dt) return;
        const Grid2D& g = cfg.grid;
        detail::Stencil5 ref(g);
        const double d0 = dF(cfg.params.phi0, cfg.params);
        auto dir = [this](int i, int j) { return cell_dirichlet(i, j); };
        assemble_diffusion(ref, [d0](std::size_t, std::size_t) { return d0; }, dir);
        for (int j = 0; j < g.nz; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                ref.diag[k] = dir(i, j) ? 1.0 : ref.diag[k] + g.volume(i, j) / dt;
            }
        }
        cell_pcg.factorize(ref);
        cell_dt = dt;
    }

    // Backward Euler for c_t - Lap c = -alpha phi c chi, c = 1 on x = 0.
    int nutrient(EvolutionState& s, const Field2D& chi, double dt) {
        ensure_nutrient_reference(dt);
        const Grid2D& g = cfg.grid;
        detail::Stencil5 A(g);
        auto dir = [this](int i, int j) { return nutrient_dirichlet(i, j); };
        auto unit = [](std::size_t, std::size_t) { return 1.0; };
        assemble_diffusion(A, unit, dir);
        std::vector<double> rhs(g.size(), 0.0);
        for (int j = 0; j < g.nz; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                if (dir(i, j)) {
                    A.diag[k] = 1.0;
                    rhs[k] = 1.0;
                    continue;
                }
                const double V = g.volume(i, j);
                A.diag[k] += V * (1.0 / dt + cfg.params.alpha * s.phi[k] * chi[k]);
                rhs[k] = V * s.c[k] / dt;
            }
        }
        dirichlet_lift(rhs, unit, dir, [](std::size_t) { return 1.0; });
        auto& x = s.c.values();
        return nutrient_pcg.solve(A, rhs, x, cfg.solver_tol).iterations;
    }

    // Linearly implicit step of phi_t = div(F'(phi) grad phi) + g Gamma chi
    // with face-averaged F'(phi^n); phi = phi0 on the far edges.
    int cells(EvolutionState& s, const Field2D& chi, double dt, StepReport* report) {
        ensure_cell_reference(dt);
        const Grid2D& g = cfg.grid;
        const ModelParams& p = cfg.params;
        std::vector<double> diffusivity(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) diffusivity[k] = dF(s.phi[k], p);
        auto face = [&](std::size_t a, std::size_t b) { return 0.5 * (diffusivity[a] + diffusivity[b]); };
        auto dir = [this](int i, int j) { return cell_dirichlet(i, j); };

        detail::Stencil5 A(g);
        assemble_diffusion(A, face, dir);
        std::vector<double> rhs(g.size(), 0.0);
        double source = 0.0;
        double mass_before = 0.0;
        for (int j = 0; j < g.nz; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                const double V = g.volume(i, j);
                mass_before += V * s.phi[k];
                if (dir(i, j)) {
                    A.diag[k] = 1.0;
                    rhs[k] = p.phi0;
                    continue;
                }
                const double src = cfg.growth ? g_source(s.phi[k], s.c[k], chi[k]) : 0.0;
                A.diag[k] += V / dt;
                rhs[k] = V * (s.phi[k] / dt + src);
                source += V * src;
            }
        }
        std::vector<double> coupling(g.size(), 0.0);
        dirichlet_lift(rhs, face, dir, [&](std::size_t) { return p.phi0; }, &coupling);
        auto& x = s.phi.values();
        const int iters = cell_pcg.solve(A, rhs, x, cfg.solver_tol).iterations;

        if (report) {
            double mass_after = 0.0;
            double inflow = 0.0;
            for (int j = 0; j < g.nz; ++j) {
                for (int i = 0; i < g.nx; ++i) {
                    const std::size_t k = g.index(i, j);
                    mass_after += g.volume(i, j) * x[k];
                    if (!dir(i, j)) inflow += coupling[k] * (p.phi0 - x[k]);
                }
            }
            report->mass_before = mass_before;
            report->mass_after = mass_after;
            report->source_integral = dt * source;
            report->boundary_flux = dt * inflow;
        }
        return iters;
    }

    double g_source(double phi, double c, double chi) const {
        return g(phi) * growth_regulation(c, cfg.params) * chi;
    }
};

Integrator::Integrator(EvolutionConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
    impl_->cfg.validate();
}
Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

const EvolutionConfig& Integrator::config() const noexcept { return impl_->cfg; }
long Integrator::steps() const noexcept { return impl_->steps; }

int Integrator::advance_nutrient(EvolutionState& state, const Field2D& chi, double dt) {
    return impl_->nutrient(state, chi, dt);
}

int Integrator::advance_cells(EvolutionState& state, const Field2D& chi, double dt, StepReport* report) {
    return impl_->cells(state, chi, dt, report);
}

namespace {

bool in_unit_range(const Field2D& f) {
    return f.min() >= -kRangeSlack && f.max() <= 1.0 + kRangeSlack;
}

}  // namespace

StepReport Integrator::step(EvolutionState& state, double dt) {
    const EvolutionConfig& cfg = impl_->cfg;
    const Grid2D& grid = cfg.grid;
    StepReport report;
    const double width = cfg.heaviside_width * std::max(grid.hx(), grid.hz());
    const Field2D chi = inside_indicator(state.psi, width);

    double trial = dt;
    while (true) {
        if (trial < cfg.dt_min) {
            throw StabilityError("step rejected down to dt = " + format_short(trial) + " at t = " +
                                 format_short(state.t));
        }
        EvolutionState next = state;
        report.nutrient_iterations = impl_->nutrient(next, chi, trial);
        bool cells_ok = false;
        if (in_unit_range(next.c)) {
            try {
                report.cell_iterations = impl_->cells(next, chi, trial, &report);
                cells_ok = in_unit_range(next.phi) && next.phi.min() > 0.0;
            } catch (const DomainError&) {
                // an out-of-range trial iterate; retry with a smaller step
            }
            if (cells_ok) {
                const VectorField2D v = cell_velocity(next, cfg.params, grid);
                report.advection_substeps = advect_level_set(next.psi, v, grid, trial);
                ++impl_->steps;
                if (impl_->steps % cfg.reinit_every == 0) {
                    reinitialize(next.psi, grid);
                    report.reinitialized = true;
                }
                next.t = state.t + trial;
                state = std::move(next);
                report.dt = trial;
                return report;
            }
        }
        ++report.rejections;
        trial *= 0.5;
    }
}

EvolutionState step(const EvolutionState& state, const EvolutionConfig& cfg) {
    Integrator integrator(cfg);
    EvolutionState next = state;
    integrator.step(next, stable_dt(cfg));
    return next;
}

namespace {

Snapshot take_snapshot(const EvolutionState& s, const Grid2D& grid) {
    return {s.t, s.phi, s.c, s.psi, extract_interface(s.psi, grid)};
}

// Distance in cells from the cord to the far edges x = Lx, z = Lz.
int far_field_clearance(const Field2D& psi, const Grid2D& grid) {
    int best = std::max(grid.nx, grid.nz);
    for (int j = 0; j < grid.nz; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (psi(i, j) < 0.0) best = std::min({best, grid.nx - 1 - i, grid.nz - 1 - j});
        }
    }
    return best;
}

}  // namespace

RunResult run(const EvolutionConfig& cfg, const SnapshotSink& sink) {
    Integrator integrator(cfg);
    RunResult result;
    EvolutionState state = init_state(cfg);
    const Grid2D& grid = cfg.grid;

    std::vector<double> pending = cfg.snapshot_times;
    std::sort(pending.begin(), pending.end());
    pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
    std::size_t next_snapshot = 0;

    auto emit = [&](const EvolutionState& s) {
        Snapshot snap = take_snapshot(s, grid);
        if (sink) sink(snap);
        result.snapshots.push_back(std::move(snap));
    };
    auto track = [&](const EvolutionState& s) {
        result.phi_min = std::min(result.phi_min, s.phi.min());
        result.phi_max = std::max(result.phi_max, s.phi.max());
        result.c_min = std::min(result.c_min, s.c.min());
        result.c_max = std::max(result.c_max, s.c.max());
    };
    result.phi_min = result.phi_max = cfg.params.phi0;
    result.c_min = result.c_max = 1.0;
    track(state);
    while (next_snapshot < pending.size() && pending[next_snapshot] <= 0.0) {
        emit(state);
        ++next_snapshot;
    }

    const double dt_nominal = stable_dt(cfg);
    bool warned = false;
    constexpr double kTimeSlack = 1e-9;
    while (state.t < cfg.t_end - kTimeSlack) {
        double target = cfg.t_end;
        if (next_snapshot < pending.size()) target = std::min(target, pending[next_snapshot]);
        double dt = dt_nominal;
        if (state.t + dt > target - kTimeSlack) dt = target - state.t;
        const StepReport rep = integrator.step(state, dt);
        ++result.steps;
        result.rejections += rep.rejections;
        if (std::abs(state.t - target) <= kTimeSlack) state.t = target;
        track(state);
        if (!warned && far_field_clearance(state.psi, grid) < 10) {
            result.warnings.push_back("domain-too-small: cord within 10 cells of the far field at t = " +
                                      format_short(state.t));
            warned = true;
        }
        while (next_snapshot < pending.size() && pending[next_snapshot] <= state.t + kTimeSlack) {
            emit(state);
            ++next_snapshot;
        }
    }
    result.final_state = std::move(state);
    return result;
}

void write_field_csv(const std::string& path, const Field2D& field, const Grid2D& grid, double t) {
    CsvWriter out(path, {"nx", "nz", "hx", "hz", "t"});
    out.text_row({std::to_string(grid.nx), std::to_string(grid.nz), format_real(grid.hx()),
                  format_real(grid.hz()), format_real(t)});
    const auto& v = field.values();
    for (int j = 0; j < grid.nz; ++j) {
        out.row(std::span<const double>(v.data() + grid.index(0, j), static_cast<std::size_t>(grid.nx)));
    }
}

void write_interface_csv(const std::string& path, const std::vector<Polyline>& lines) {
    CsvWriter out(path, {"contour", "x", "z"});
    for (std::size_t c = 0; c < lines.size(); ++c) {
        for (const Point2D& pt : lines[c]) {
            out.text_row({std::to_string(c), format_real(pt.x), format_real(pt.z)});
        }
    }
}

}  // namespace tumorcord
