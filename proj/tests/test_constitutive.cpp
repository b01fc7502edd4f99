#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tumorcord/constitutive.hpp"
#include "tumorcord/errors.hpp"

using namespace tumorcord;

namespace {

ModelParams reference() { return ModelParams{}; }

ModelParams two_threshold() {
    ModelParams p;
    p.growth = TwoThresholdGrowth{0.7, 0.7, 0.5};
    return p;
}

}  // namespace

TEST(Sigma, VanishesAtStressFreePoint) {
    for (double mu : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        for (double phi0 : {0.1, 0.5, 0.75, 0.95}) {
            ModelParams p;
            p.mu = mu;
            p.phi0 = phi0;
            EXPECT_EQ(sigma(phi0, p), 0.0) << "mu " << mu << " phi0 " << phi0;
        }
    }
}

TEST(Sigma, DirectEvaluationAtFullPacking) {
    EXPECT_NEAR(sigma(1.0, reference()), 0.65625, 1e-15);
}

TEST(Sigma, LogarithmicBranchForUnitExponent) {
    ModelParams p;
    p.mu = 1.0;
    EXPECT_NEAR(sigma(0.9, p), std::log(0.9 / 0.75) / 0.9, 1e-15);
}

TEST(Sigma, SignFollowsCompression) {
    for (double mu : {1.0, 3.0}) {
        ModelParams p;
        p.mu = mu;
        EXPECT_LT(sigma(0.5, p), 0.0);
        EXPECT_GT(sigma(0.9, p), 0.0);
    }
}

TEST(Sigma, RejectsNonpositiveVolumeRatio) {
    EXPECT_THROW(sigma(0.0, reference()), DomainError);
    EXPECT_THROW(sigma(-0.1, reference()), DomainError);
}

TEST(StressPotential, DerivativeIdentity) {
    // F'(phi) = phi (phi Sigma(phi))', checked by central differences.
    const ModelParams p = reference();
    for (double phi : {0.3, 0.6, 0.75, 0.9}) {
        const double h = 1e-6;
        const double d = (stress_potential(phi + h, p) - stress_potential(phi - h, p)) / (2 * h);
        EXPECT_NEAR(dF(phi, p), phi * d, 1e-8);
    }
}

TEST(PorousMediumLaw, EndpointsAndValues) {
    for (double mu : {1.0, 2.0, 3.0, 4.5}) {
        ModelParams p;
        p.mu = mu;
        EXPECT_EQ(F(0.0, p), 0.0);
        EXPECT_EQ(F(1.0, p), 1.0);
    }
    EXPECT_NEAR(F(0.75, reference()), 0.421875, 1e-15);
    EXPECT_NEAR(f_inv(F(0.3, reference()), reference()), 0.3, 1e-15);
}

TEST(PorousMediumLaw, RejectsOutOfRange) {
    EXPECT_THROW(F(1.2, reference()), DomainError);
    EXPECT_THROW(F(-0.2, reference()), DomainError);
    EXPECT_THROW(f_inv(1.5, reference()), DomainError);
}

TEST(PorousMediumLaw, InverseRoundTripAboveEpsilon) {
    const ModelParams p = reference();
    const double eps = resolved_epsilon(p);
    for (int k = 0; k <= 100; ++k) {
        const double phi = eps + (1.0 - eps) * k / 100.0;
        EXPECT_NEAR(f_inv(F(phi, p), p), phi, 1e-14);
    }
}

TEST(PorousMediumLaw, InverseLipschitzOnRandomPairs) {
    const ModelParams p = reference();
    const DerivedConstants d = derived_constants(p);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(F(d.epsilon, p), 1.0);
    for (int k = 0; k < 2000; ++k) {
        const double a = u(rng), b = u(rng);
        EXPECT_LE(std::abs(f_inv(a, p) - f_inv(b, p)), d.Lf_eps * std::abs(a - b) * (1 + 1e-12) + 1e-15);
    }
}

TEST(Growth, LogisticValues) {
    EXPECT_EQ(g(0.0), 0.0);
    EXPECT_EQ(g(1.0), 0.0);
    EXPECT_EQ(g(0.5), 0.25);
}

TEST(Growth, LinearRegulation) {
    const ModelParams p = reference();
    EXPECT_NEAR(growth_regulation(0.8, p), 0.0, 1e-16);
    EXPECT_NEAR(growth_regulation(1.0, p), 0.14, 1e-15);
    EXPECT_NEAR(growth_regulation(0.0, p), -0.56, 1e-15);
}

TEST(Growth, TwoThresholdBands) {
    const ModelParams p = two_threshold();
    EXPECT_NEAR(growth_regulation(1.0, p), 0.14, 1e-15);
    EXPECT_EQ(growth_regulation(0.7, p), 0.0);
    EXPECT_EQ(growth_regulation(0.55, p), 0.0);
    EXPECT_NEAR(growth_regulation(0.3, p), -0.14, 1e-15);
    EXPECT_NEAR(growth_regulation(0.0, p), -0.35, 1e-15);
}

TEST(Growth, RegulationIsNondecreasingWithSignChange) {
    for (const ModelParams& p : {reference(), two_threshold()}) {
        EXPECT_LT(growth_regulation(0.0, p), 0.0);
        EXPECT_GT(growth_regulation(1.0, p), 0.0);
        double prev = growth_regulation(0.0, p);
        for (int k = 1; k <= 1000; ++k) {
            const double v = growth_regulation(k / 1000.0, p);
            EXPECT_GE(v, prev);
            prev = v;
        }
    }
}

TEST(DerivedConstants, ReferenceValuesAtHalf) {
    // Direct evaluation with C_P = 2/pi, g_M = 1/4, Gamma_M = 0.56, Lf = 4/3.
    const DerivedConstants d = derived_constants(reference(), 0.5);
    EXPECT_DOUBLE_EQ(d.gM, 0.25);
    EXPECT_DOUBLE_EQ(d.Lg, 1.0);
    EXPECT_NEAR(d.GammaM, 0.56, 1e-15);
    EXPECT_NEAR(d.LGamma, 0.7, 1e-15);
    EXPECT_NEAR(d.CP, 2.0 / M_PI, 1e-16);
    EXPECT_NEAR(d.Lf_eps, 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.beta1, 0.547920142107431412, 1e-14);
    EXPECT_NEAR(d.beta2, 0.550102355759164282, 1e-14);
    EXPECT_DOUBLE_EQ(d.beta, std::max(d.beta1, d.beta2));
}

TEST(DerivedConstants, UnitExponentHasUnitInverseLipschitz) {
    ModelParams p;
    p.mu = 1.0;
    for (double eps : {0.01, 0.2, 0.7}) EXPECT_DOUBLE_EQ(derived_constants(p, eps).Lf_eps, 1.0);
}

TEST(DerivedConstants, TwoThresholdSupremum) {
    const DerivedConstants d = derived_constants(two_threshold(), 0.5);
    EXPECT_NEAR(d.GammaM, 0.35, 1e-15);
    EXPECT_NEAR(d.LGamma, 0.7, 1e-15);
}

TEST(DerivedConstants, RejectsEpsilonAbovePhi0) {
    EXPECT_THROW(derived_constants(reference(), 0.75), DomainError);
    EXPECT_THROW(derived_constants(reference(), 0.9), DomainError);
}

TEST(DerivedConstants, MonotoneInEpsilon) {
    const ModelParams p = reference();
    double b1 = beta1(0.01, p), b2 = beta2(0.01, p);
    for (int k = 2; k < 75; ++k) {
        const double eps = 0.01 * k;
        EXPECT_GT(beta1(eps, p), b1);
        EXPECT_LT(beta2(eps, p), b2);
        b1 = beta1(eps, p);
        b2 = beta2(eps, p);
    }
}

TEST(OptimizeEpsilon, ReferenceOptimum) {
    const EpsilonOptimum o = optimize_epsilon(reference());
    EXPECT_TRUE(o.bisection);
    EXPECT_NEAR(o.eps_star, 0.501217116857967753, 1e-7);
    EXPECT_NEAR(o.beta_star, 0.548766529770220685, 1e-8);
    EXPECT_LT(std::abs(beta1(o.eps_star, reference()) - beta2(o.eps_star, reference())), 1e-8);
}

TEST(OptimizeEpsilon, AgreesWithBruteForceScan) {
    for (double mu : {1.5, 2.0, 3.0, 4.0}) {
        ModelParams p;
        p.mu = mu;
        double best_eps = 0.0, best = INFINITY;
        for (int k = 1; k < 10000; ++k) {
            const double eps = p.phi0 * k / 10000.0;
            const double b = std::max(beta1(eps, p), beta2(eps, p));
            if (b < best) {
                best = b;
                best_eps = eps;
            }
        }
        const EpsilonOptimum o = optimize_epsilon(p);
        EXPECT_NEAR(o.eps_star, best_eps, 1e-3) << "mu " << mu;
        EXPECT_LE(o.beta_star, best + 1e-9) << "mu " << mu;
        EXPECT_LT(best - o.beta_star, 1e-4) << "mu " << mu;
    }
}

TEST(OptimizeEpsilon, UnitExponentFallsBackToScan) {
    ModelParams p;
    p.mu = 1.0;
    const EpsilonOptimum o = optimize_epsilon(p);
    EXPECT_FALSE(o.bisection);
    EXPECT_GT(o.eps_star, 0.0);
    EXPECT_LT(o.eps_star, p.phi0);
    for (int k = 1; k < 100; ++k) {
        const double eps = p.phi0 * k / 100.0;
        EXPECT_LE(o.beta_star, std::max(beta1(eps, p), beta2(eps, p)) + 1e-12);
    }
}

TEST(ModelParams, ValidationNamesTheField) {
    auto field_of = [](ModelParams p) {
        try {
            p.validate();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string();
    };
    ModelParams p;
    p.phi0 = 1.5;
    EXPECT_EQ(field_of(p), "phi0");
    p = ModelParams{};
    p.mu = 0.5;
    EXPECT_EQ(field_of(p), "mu");
    p = ModelParams{};
    p.c0 = 0.0;
    EXPECT_EQ(field_of(p), "c0");
    p = ModelParams{};
    p.alpha = -1.0;
    EXPECT_EQ(field_of(p), "alpha");
    p = ModelParams{};
    p.epsilon = 0.8;
    EXPECT_EQ(field_of(p), "epsilon");
    p = two_threshold();
    std::get<TwoThresholdGrowth>(p.growth).c1 = 0.85;
    EXPECT_EQ(field_of(p), "c1");
    EXPECT_EQ(field_of(ModelParams{}), "");
}

TEST(ResolvedEpsilon, PrefersConfiguredValue) {
    ModelParams p;
    EXPECT_NEAR(resolved_epsilon(p), optimize_epsilon(p).eps_star, 0.0);
    p.epsilon = 0.3;
    EXPECT_EQ(resolved_epsilon(p), 0.3);
    EXPECT_EQ(derived_constants(p).epsilon, 0.3);
}
