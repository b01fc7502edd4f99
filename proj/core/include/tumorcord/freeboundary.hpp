#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tumorcord/constitutive.hpp"
#include "tumorcord/stationary1d.hpp"

namespace tumorcord {

/// Steady cord width and its admissibility data.
struct WidthSolution {
    double w0 = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    double beta_w0 = 0.0;
    bool admissible = false;
    double nu = 0.0;                  ///< (beta2 w0)^2
    std::optional<double> xbar;       ///< viable/necrotic boundary at w0
    int iterations = 0;
};

struct WidthScanOptions {
    double w_seed = 0.25;
    double w_max = 64.0;
    double w_tol = 1e-10;
    double quad_tol = 1e-12;
};

/// Zeroth-order nutrient profile cosh(s(1-x))/cosh(s), s = w sqrt(alpha phi0),
/// evaluated without forming cosh of large arguments.
double c0_closed_form(double x, double w, const ModelParams& p);

/// Depth where c0_w crosses the threshold; empty when c0_w(1) > c0.
std::optional<double> xbar_of_w(double w, const ModelParams& p);

/// Net growth C(w) = integral over [0,1] of Gamma(c0_w(x)).
double capital_C(double w, const ModelParams& p, double abs_tol = 1e-12);

/// First positive root of C by geometric scan from w_seed and bisection.
WidthSolution solve_width_general(const ModelParams& p, const WidthScanOptions& options = {});

/// Root of tanh(s) = c0 s, s = w sqrt(alpha phi0), inside the analytic bracket.
WidthSolution solve_width_linear(const ModelParams& p);

/// Analytic bracket [sqrt(3(1-c0)/(alpha phi0)), 1/(c0 sqrt(alpha phi0))].
std::pair<double, double> linear_width_bracket(const ModelParams& p);

/// First-order perturbation: -phi1'' = g(phi0) Gamma(c0_w) / Gamma_M,
/// phi1'(0) = 0, phi1(1) = 0.
Field1D perturbation_phi1(double w, const ModelParams& p, const Grid1D& grid);

struct Reconstruction {
    double w = 0.0;
    double nu = 0.0;
    Field1D x;
    Field1D c0;
    Field1D phi1;
    Field1D phi_approx;
    Field1D c_approx;
    Field1D E_phi;
    Field1D E_c;
    StationarySolution exact;
    double max_abs_E_phi = 0.0;
    double max_abs_E_c = 0.0;
};

/// Builds phi0 + nu phi1 and c0_w and their relative errors against the
/// fixed-point solution at the same w.
Reconstruction reconstruct_and_errors(double w, const ModelParams& p, const Grid1D& grid,
                                      const FixedPointOptions& options = {});

/// Writes x, c0, phi1, phi_approx, E_phi, E_c.
void write_reconstruction_csv(const std::string& path, const Reconstruction& rec);
/// Single-row summary: w0, bracket_lo, bracket_hi, beta_w0, admissible, nu, xbar.
void write_width_summary_csv(const std::string& path, const WidthSolution& sol);

}  // namespace tumorcord
