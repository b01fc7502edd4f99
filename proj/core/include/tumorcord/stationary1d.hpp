#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tumorcord/constitutive.hpp"

namespace tumorcord {

using Field1D = std::vector<double>;

/// Uniform grid on [0,1] with n nodes.
class Grid1D {
public:
    explicit Grid1D(int n);

    int size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double x(int i) const noexcept { return i == n_ - 1 ? 1.0 : i * h_; }
    std::vector<double> nodes() const;

private:
    int n_;
    double h_;
};

struct FixedPointOptions {
    double tol = 1e-10;          ///< outer sup-norm update tolerance
    int max_iters = 500;
    double inner_tol = 1e-13;    ///< Picard tolerance inside the cell solve
    int inner_max_iters = 2000;
    double damping = 1.0;        ///< initial Picard damping, halved on residual growth
    double residual_tol = 1e-6;  ///< bound on the reported discrete residuals
    /// Skip the beta*w < 1 gate. Only useful for probing the inadmissible regime.
    bool enforce_admissibility = true;
};

struct StationarySolution {
    double w = 0.0;
    Field1D x;
    Field1D phi;
    Field1D c;
    int iterations = 0;
    double last_update = 0.0;
    double residual_phi = 0.0;
    double residual_c = 0.0;
    double beta_w = 0.0;
    bool admissible = false;
};

/// Solves -c'' + alpha w^2 phi c = 0, c(0) = 1, c'(1) = 0.
Field1D solve_nutrient(const Field1D& phi, double w, const ModelParams& p, const Grid1D& grid);

/// Solves -(F(phi))'' = w^2 g(phi) Gamma(sigma), phi'(0) = 0, phi(1) = phi0
/// by damped Picard iteration on u = F(phi) - F(phi0).
Field1D solve_cell(const Field1D& sigma_field, double w, const ModelParams& p, const Grid1D& grid,
                   const FixedPointOptions& options = {});

/// phi <- A2(A1(phi)) from phi = phi0 until the update drops below tol.
StationarySolution fixed_point(double w, const ModelParams& p, const Grid1D& grid,
                               const FixedPointOptions& options = {});

/// The composed operator A = A2 o A1 evaluated once.
Field1D apply_fixed_point_map(const Field1D& phi, double w, const ModelParams& p,
                              const Grid1D& grid, const FixedPointOptions& options = {});

/// Discrete residual sup-norms of both equations at the given pair.
std::pair<double, double> stationary_residuals(const Field1D& phi, const Field1D& c, double w,
                                               const ModelParams& p, const Grid1D& grid);

/// Solves -u'' + h u = k on [0,1] with either u(0) = 0, u'(1) = 0
/// (DirichletLeft) or u'(0) = 0, u(1) = 0 (DirichletRight).
enum class MixedBoundary { DirichletLeft, DirichletRight };
Field1D solve_linear_mixed(const Field1D& h, const Field1D& k, MixedBoundary bc, const Grid1D& grid);

struct Check {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double bound = 0.0;
    double margin() const noexcept { return bound - observed; }
};

struct DiagnosticsRecord {
    std::vector<Check> checks;
    bool all_pass() const noexcept;
    const Check* find(const std::string& name) const noexcept;
};

/// Theory checks on a solution: distance to phi0, nutrient a priori bound,
/// monotonicity of c, nodewise ranges and boundary values.
DiagnosticsRecord verify_stationary(const StationarySolution& sol, const ModelParams& p);

/// Writes x, phi, c with a header row and 17 significant digits.
void write_stationary_csv(const std::string& path, const StationarySolution& sol);

}  // namespace tumorcord
