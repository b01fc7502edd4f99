#pragma once

#include <optional>
#include <variant>

namespace tumorcord {

/// Gamma(c) = gamma * (c - c0).
struct LinearGrowth {};

/// Growth regulation with a quiescent band (c1, c0):
///   gamma0 (c - c0)  for c >= c0
///   0                for c1 < c < c0
///   gamma1 (c - c1)  for c <= c1
struct TwoThresholdGrowth {
    double gamma0 = 0.7;
    double gamma1 = 0.7;
    double c1 = 0.5;
};

using GrowthLaw = std::variant<LinearGrowth, TwoThresholdGrowth>;

/// Nondimensional parameter record. Defaults are the reference tumor-cord
/// parameters (mu = 3, phi0 = 0.75, gamma = 0.7, c0 = 0.8, alpha = 0.5).
struct ModelParams {
    double mu = 3.0;       ///< porous-medium exponent, F(phi) = phi^mu
    double phi0 = 0.75;    ///< stress-free cell volume ratio
    double gamma = 0.7;    ///< growth-rate coefficient (linear law)
    double c0 = 0.8;       ///< proliferation threshold
    double alpha = 0.5;    ///< nutrient uptake coefficient
    GrowthLaw growth = LinearGrowth{};
    /// Lower admissibility bound; empty means "use the min-max optimum".
    std::optional<double> epsilon;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool is_linear() const noexcept { return std::holds_alternative<LinearGrowth>(growth); }
};

/// Constants entering the existence and perturbation theory.
struct DerivedConstants {
    double epsilon = 0.0;
    double gM = 0.0;       ///< sup |g| on [0,1]
    double Lg = 0.0;       ///< Lipschitz constant of g on [0,1]
    double GammaM = 0.0;   ///< sup |Gamma| on [0,1]
    double LGamma = 0.0;   ///< Lipschitz constant of Gamma on [0,1]
    double Lf_eps = 0.0;   ///< Lipschitz constant of f = F^{-1} on [F(eps), 1]
    double CP = 0.0;       ///< Poincare constant of (0,1) with one-sided Dirichlet data
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta = 0.0;
};

struct EpsilonOptimum {
    double eps_star = 0.0;
    double beta_star = 0.0;
    bool bisection = false;  ///< false when the grid fallback produced the result
};

inline constexpr double kPoincare = 0.63661977236758134308;  // 2/pi

/// Intercellular stress Sigma(phi); logarithmic branch for mu == 1.
double sigma(double phi, const ModelParams& p);

/// phi * Sigma(phi), the potential whose gradient drives the cell velocity.
double stress_potential(double phi, const ModelParams& p);

/// F(phi) = phi^mu on [0,1].
double F(double phi, const ModelParams& p);
/// F'(phi) = mu phi^(mu-1); equals phi (phi Sigma)'.
double dF(double phi, const ModelParams& p);
/// f = F^{-1}, f(u) = u^(1/mu) on [0,1].
double f_inv(double u, const ModelParams& p);

/// Logistic growth g(phi) = phi (1 - phi).
double g(double phi) noexcept;

double growth_regulation(double c, const ModelParams& p) noexcept;

/// beta1(eps), beta2(eps) for the given eps (independent of p.epsilon).
double beta1(double eps, const ModelParams& p);
double beta2(double eps, const ModelParams& p);

/// Evaluates all constants at eps = p.epsilon, or at the optimum when unset.
DerivedConstants derived_constants(const ModelParams& p);
/// Evaluates all constants at an explicit eps.
DerivedConstants derived_constants(const ModelParams& p, double eps);

/// argmin over eps in (0, phi0) of max(beta1, beta2).
EpsilonOptimum optimize_epsilon(const ModelParams& p);

/// p.epsilon if set, else the optimum.
double resolved_epsilon(const ModelParams& p);

}  // namespace tumorcord
