#include "tumorcord/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tumorcord/errors.hpp"

namespace tumorcord {

namespace {

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void ModelParams::validate() const {
    require(finite(mu) && mu >= 1.0, "mu", "must satisfy mu >= 1");
    require(finite(phi0) && phi0 > 0.0 && phi0 < 1.0, "phi0", "must lie in (0, 1)");
    require(finite(c0) && c0 > 0.0 && c0 < 1.0, "c0", "must lie in (0, 1)");
    require(finite(alpha) && alpha > 0.0, "alpha", "must be positive");
    if (const auto* tt = std::get_if<TwoThresholdGrowth>(&growth)) {
        require(finite(tt->gamma0) && tt->gamma0 > 0.0, "gamma0", "must be positive");
        require(finite(tt->gamma1) && tt->gamma1 > 0.0, "gamma1", "must be positive");
        require(finite(tt->c1) && tt->c1 > 0.0 && tt->c1 < c0, "c1", "must satisfy 0 < c1 < c0");
    } else {
        require(finite(gamma) && gamma > 0.0, "gamma", "must be positive");
    }
    if (epsilon) {
        require(finite(*epsilon) && *epsilon > 0.0 && *epsilon < phi0, "epsilon",
                "must satisfy 0 < epsilon < phi0");
    }
}

double sigma(double phi, const ModelParams& p) {
    if (!(phi > 0.0)) throw DomainError("sigma: phi must be positive");
    if (p.mu == 1.0) return std::log(phi / p.phi0) / phi;
    return p.mu / (p.mu - 1.0) * (std::pow(phi, p.mu - 1.0) - std::pow(p.phi0, p.mu - 1.0)) / phi;
}

double stress_potential(double phi, const ModelParams& p) {
    if (!(phi > 0.0)) throw DomainError("stress_potential: phi must be positive");
    if (p.mu == 1.0) return std::log(phi / p.phi0);
    return p.mu / (p.mu - 1.0) * (std::pow(phi, p.mu - 1.0) - std::pow(p.phi0, p.mu - 1.0));
}

double F(double phi, const ModelParams& p) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw DomainError("F: phi must lie in [0, 1]");
    return std::pow(phi, p.mu);
}

double dF(double phi, const ModelParams& p) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw DomainError("dF: phi must lie in [0, 1]");
    if (p.mu == 1.0) return 1.0;
    return p.mu * std::pow(phi, p.mu - 1.0);
}

double f_inv(double u, const ModelParams& p) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("f: u must lie in [0, 1]");
    return std::pow(u, 1.0 / p.mu);
}

double g(double phi) noexcept { return phi * (1.0 - phi); }

double growth_regulation(double c, const ModelParams& p) noexcept {
    if (const auto* tt = std::get_if<TwoThresholdGrowth>(&p.growth)) {
        if (c >= p.c0) return tt->gamma0 * (c - p.c0);
        if (c > tt->c1) return 0.0;
        return tt->gamma1 * (c - tt->c1);
    }
    return p.gamma * (c - p.c0);
}

namespace {

double gamma_sup(const ModelParams& p) {
    if (std::holds_alternative<TwoThresholdGrowth>(p.growth)) {
        return std::max(std::abs(growth_regulation(0.0, p)), growth_regulation(1.0, p));
    }
    return p.gamma * std::max(p.c0, 1.0 - p.c0);
}

double gamma_lipschitz(const ModelParams& p) {
    if (const auto* tt = std::get_if<TwoThresholdGrowth>(&p.growth)) {
        return std::max(tt->gamma0, tt->gamma1);
    }
    return p.gamma;
}

// min of F' on [eps, 1] is attained at eps for mu >= 1.
double lipschitz_f(double eps, const ModelParams& p) {
    if (p.mu == 1.0) return 1.0;
    return 1.0 / (p.mu * std::pow(eps, p.mu - 1.0));
}

constexpr double kGM = 0.25;  // max of phi(1-phi)
constexpr double kLg = 1.0;   // max |1 - 2 phi|

}  // namespace

double beta1(double eps, const ModelParams& p) {
    const double gap = std::pow(p.phi0, p.mu) - std::pow(eps, p.mu);
    if (!(gap > 0.0)) throw DomainError("beta1: epsilon must be below phi0");
    return std::sqrt(kPoincare * kGM * gamma_sup(p) / gap);
}

double beta2(double eps, const ModelParams& p) {
    if (!(eps > 0.0)) throw DomainError("beta2: epsilon must be positive");
    return kPoincare * std::sqrt(kLg * gamma_sup(p) * lipschitz_f(eps, p));
}

DerivedConstants derived_constants(const ModelParams& p, double eps) {
    if (!(eps > 0.0 && eps < p.phi0)) {
        throw DomainError("derived_constants: epsilon must lie in (0, phi0)");
    }
    DerivedConstants d;
    d.epsilon = eps;
    d.gM = kGM;
    d.Lg = kLg;
    d.GammaM = gamma_sup(p);
    d.LGamma = gamma_lipschitz(p);
    d.Lf_eps = lipschitz_f(eps, p);
    d.CP = kPoincare;
    d.beta1 = beta1(eps, p);
    d.beta2 = beta2(eps, p);
    d.beta = std::max(d.beta1, d.beta2);
    return d;
}

DerivedConstants derived_constants(const ModelParams& p) {
    return derived_constants(p, resolved_epsilon(p));
}

namespace {

EpsilonOptimum grid_scan(const ModelParams& p) {
    constexpr int kPoints = 10000;
    EpsilonOptimum best{0.0, std::numeric_limits<double>::infinity(), false};
    for (int k = 1; k <= kPoints; ++k) {
        const double eps = p.phi0 * k / (kPoints + 1.0);
        const double b = std::max(beta1(eps, p), beta2(eps, p));
        if (b < best.beta_star) best = {eps, b, false};
    }
    return best;
}

}  // namespace

EpsilonOptimum optimize_epsilon(const ModelParams& p) {
    if (p.mu > 1.0) {
        double lo = p.phi0 * 1e-9;
        double hi = p.phi0 * (1.0 - 1e-9);
        auto diff = [&](double e) { return beta1(e, p) - beta2(e, p); };
        if (diff(lo) < 0.0 && diff(hi) > 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double dm = diff(mid);
                if (std::abs(dm) < 1e-8) {
                    return {mid, std::max(beta1(mid, p), beta2(mid, p)), true};
                }
                (dm < 0.0 ? lo : hi) = mid;
            }
        }
    }
    // mu == 1: beta2 does not depend on eps and beta1 increases, so the first
    // grid point reaching the minimum (eps -> 0+) is returned.
    return grid_scan(p);
}

double resolved_epsilon(const ModelParams& p) {
    if (p.epsilon) return *p.epsilon;
    return optimize_epsilon(p).eps_star;
}

}  // namespace tumorcord
