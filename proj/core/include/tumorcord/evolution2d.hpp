#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tumorcord/constitutive.hpp"
#include "tumorcord/grid2d.hpp"
#include "tumorcord/levelset.hpp"

namespace tumorcord {

enum class InitialShape {
    QuarterDisk,  ///< |(x, z)| < r0
    Stripe,       ///< x < r0 for every z
    Full,         ///< the whole domain is tumor
};

struct EvolutionConfig {
    Grid2D grid;
    ModelParams params;
    double dt = 0.0;          ///< 0 selects stable_dt()
    double dt_max = 0.5;
    double dt_min = 1e-6;
    double t_end = 900.0;
    std::vector<double> snapshot_times{100.0, 325.0, 650.0, 900.0};
    double r0 = 0.5;
    int reinit_every = 20;
    double heaviside_width = 1.5;  ///< in grid cells
    InitialShape initial_shape = InitialShape::QuarterDisk;
    bool growth = true;            ///< false switches the proliferation source off
    double solver_tol = 1e-12;     ///< relative PCG residual

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct EvolutionState {
    double t = 0.0;
    Field2D phi;
    Field2D c;
    Field2D psi;  ///< < 0 inside the cord
};

/// Largest admissible step for the explicit growth source, 1 / (L_g Gamma_M).
double growth_step_bound(const ModelParams& p);
/// Step size used when cfg.dt == 0.
double stable_dt(const EvolutionConfig& cfg);

EvolutionState init_state(const EvolutionConfig& cfg);

/// v = -grad(phi Sigma(phi)) at nodes; zero normal component on x = 0 and z = 0.
VectorField2D cell_velocity(const EvolutionState& state, const ModelParams& p, const Grid2D& grid);

struct StepReport {
    double dt = 0.0;
    int rejections = 0;
    int nutrient_iterations = 0;
    int cell_iterations = 0;
    int advection_substeps = 0;
    bool reinitialized = false;
    double mass_before = 0.0;     ///< sum of V phi over all nodes
    double mass_after = 0.0;
    double source_integral = 0.0; ///< dt * sum of V g(phi) Gamma(c) chi
    double boundary_flux = 0.0;   ///< dt * inflow through the Dirichlet far field
};

/// Stateful stepper: keeps factorised preconditioners between steps.
class Integrator {
public:
    explicit Integrator(EvolutionConfig cfg);
    ~Integrator();
    Integrator(Integrator&&) noexcept;
    Integrator& operator=(Integrator&&) noexcept;

    const EvolutionConfig& config() const noexcept;

    /// Advances by dt, halving on range violation. Throws StabilityError when
    /// dt would drop below dt_min.
    StepReport step(EvolutionState& state, double dt);

    /// Individual stages, exposed for testing. Solve in place.
    int advance_nutrient(EvolutionState& state, const Field2D& chi, double dt);
    int advance_cells(EvolutionState& state, const Field2D& chi, double dt, StepReport* report = nullptr);

    /// Steps taken so far (used for the reinitialisation cadence).
    long steps() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One step with a fresh integrator at stable_dt(cfg).
EvolutionState step(const EvolutionState& state, const EvolutionConfig& cfg);

struct Snapshot {
    double t = 0.0;
    Field2D phi;
    Field2D c;
    Field2D psi;
    std::vector<Polyline> interface;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    EvolutionState final_state;
    long steps = 0;
    long rejections = 0;
    double phi_min = 0.0;  ///< over all accepted steps
    double phi_max = 0.0;
    double c_min = 0.0;
    double c_max = 0.0;
    std::vector<std::string> warnings;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Integrates to t_end. Snapshots are taken exactly at the requested times.
RunResult run(const EvolutionConfig& cfg, const SnapshotSink& sink = {});

/// Field file: header "nx,nz,hx,hz,t", one value row, then nz rows of nx values.
void write_field_csv(const std::string& path, const Field2D& field, const Grid2D& grid, double t);
/// Interface file: columns contour, x, z.
void write_interface_csv(const std::string& path, const std::vector<Polyline>& lines);

}  // namespace tumorcord
