#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "tumorcord/errors.hpp"
#include "tumorcord/freeboundary.hpp"
#include "tumorcord/quadrature.hpp"

using namespace tumorcord;

namespace {

ModelParams two_threshold() {
    ModelParams p;
    p.growth = TwoThresholdGrowth{0.7, 0.7, 0.5};
    return p;
}

double naive_profile(double x, double w, const ModelParams& p) {
    const double s = w * std::sqrt(p.alpha * p.phi0);
    return std::cosh(s * (1.0 - x)) / std::cosh(s);
}

}  // namespace

TEST(Quadrature, PolynomialsAreExact) {
    const auto r = adaptive_simpson([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0);
    EXPECT_NEAR(r.value, 0.0, 1e-14);
    EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0).value, std::exp(1.0) - 1.0,
                1e-12);
}

TEST(Quadrature, KinkedIntegrand) {
    const auto r = adaptive_simpson([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-11);
}

TEST(Quadrature, DepthExhaustionIsReported) {
    EXPECT_THROW(adaptive_simpson([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, 1e-15, 8),
                 NumericalError);
}

TEST(NutrientProfile, BoundaryAndTrivialCases) {
    const ModelParams p;
    for (double w : {0.0, 0.3, 1.45, 10.0, 1000.0}) EXPECT_NEAR(c0_closed_form(0.0, w, p), 1.0, 1e-15);
    for (double x : {0.0, 0.4, 1.0}) EXPECT_EQ(c0_closed_form(x, 0.0, p), 1.0);
}

TEST(NutrientProfile, ReferenceValue) {
    EXPECT_NEAR(c0_closed_form(1.0, 1.45, ModelParams{}), 0.703823605841365524, 1e-14);
}

TEST(NutrientProfile, AgreesWithCoshRatioAndSurvivesLargeWidths) {
    const ModelParams p;
    for (double w : {0.5, 1.45, 5.0, 30.0}) {
        for (double x : {0.0, 0.25, 0.5, 0.9, 1.0}) {
            EXPECT_NEAR(c0_closed_form(x, w, p), naive_profile(x, w, p), 1e-13) << w << " " << x;
        }
    }
    const double far = c0_closed_form(0.5, 5000.0, p);
    EXPECT_TRUE(std::isfinite(far));
    EXPECT_GE(far, 0.0);
    EXPECT_TRUE(std::isfinite(c0_closed_form(1.0, 5000.0, p)));
}

TEST(NutrientProfile, NonincreasingInWidthAndDecaying) {
    const ModelParams p;
    for (int k = 1; k <= 20; ++k) {
        const double x = k / 20.0;
        double prev = 1.0;
        for (double w = 0.0; w <= 12.0; w += 0.25) {
            const double v = c0_closed_form(x, w, p);
            EXPECT_LE(v, prev + 1e-15);
            prev = v;
        }
        const double a = c0_closed_form(x, 1.0, p), b = c0_closed_form(x, 10.0, p), c = c0_closed_form(x, 100.0, p);
        EXPECT_GT(a, b);
        EXPECT_GT(b, c);
        if (x >= 0.1) {
            EXPECT_LT(c, 1e-2);
        }
    }
}

TEST(NetGrowth, ValuesAtZeroAndLargeWidth) {
    const ModelParams p;
    EXPECT_NEAR(capital_C(0.0, p), 0.14, 1e-14);
    EXPECT_NEAR(capital_C(1.0, p), 0.0638956075087524115, 1e-12);
    EXPECT_NEAR(capital_C(10.0, p), -0.445691575428405197, 1e-12);
}

TEST(NetGrowth, LipschitzInSquaredWidth) {
    const ModelParams p;
    const double bound = derived_constants(p).LGamma * p.alpha * p.phi0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    for (int k = 0; k < 200; ++k) {
        const double a = u(rng), b = u(rng);
        EXPECT_LE(std::abs(capital_C(a, p) - capital_C(b, p)), bound * std::abs(a * a - b * b) + 1e-11);
    }
}

TEST(WidthGeneral, ReferenceRoot) {
    const WidthSolution s = solve_width_general(ModelParams{});
    EXPECT_NEAR(s.w0, 1.45012198067153534, 1e-9);
    EXPECT_NEAR(s.beta_w0, 0.795778407, 1e-7);
    EXPECT_TRUE(s.admissible);
    EXPECT_LE(s.bracket.first, s.w0);
    EXPECT_GE(s.bracket.second, s.w0);
    EXPECT_GT(capital_C(s.bracket.first, ModelParams{}), 0.0);
    EXPECT_LT(capital_C(s.bracket.second, ModelParams{}), 0.0);
}

TEST(WidthGeneral, NoRootBelowCap) {
    WidthScanOptions o;
    o.w_max = 1.0;
    try {
        solve_width_general(ModelParams{}, o);
        FAIL() << "expected a no-root error";
    } catch (const NoRootError& e) {
        EXPECT_EQ(e.scanned().size(), 4u);  // w = 0, 0.25, 0.5, 1
        for (const auto& [w, c] : e.scanned()) EXPECT_GT(c, 0.0) << "w " << w;
    }
}

TEST(WidthGeneral, TwoThresholdRoot) {
    const ModelParams p = two_threshold();
    const WidthSolution s = solve_width_general(p);
    EXPECT_NEAR(s.w0, 2.41368601675226748, 1e-9);
    EXPECT_NEAR(s.beta_w0, derived_constants(p).beta * s.w0, 1e-15);
    EXPECT_EQ(s.admissible, s.beta_w0 < 1.0);
    EXPECT_THROW(solve_width_linear(p), DomainError);
}

TEST(WidthLinear, ReferenceRootAndBracket) {
    const ModelParams p;
    const WidthSolution s = solve_width_linear(p);
    EXPECT_NEAR(s.bracket.first, 1.26491106406735173, 1e-14);
    EXPECT_NEAR(s.bracket.second, 2.04124145231931508, 1e-14);
    EXPECT_NEAR(s.w0, 1.45012198067153534, 1e-12);
    const double k = std::sqrt(p.alpha * p.phi0);
    EXPECT_LT(std::abs(std::tanh(s.w0 * k) - p.c0 * s.w0 * k), 1e-12);
    EXPECT_NEAR(s.nu, 0.6332632731694, 1e-7);
    ASSERT_TRUE(s.xbar.has_value());
    EXPECT_NEAR(*s.xbar, 0.417675765192212147, 1e-10);
}

TEST(WidthLinear, AgreesWithGeneralSolver) {
    for (double c0 : {0.6, 0.7, 0.8, 0.9, 0.95}) {
        for (double alpha : {0.25, 0.5, 1.0}) {
            ModelParams p;
            p.c0 = c0;
            p.alpha = alpha;
            EXPECT_NEAR(solve_width_linear(p).w0, solve_width_general(p).w0, 1e-8) << c0 << " " << alpha;
        }
    }
}

TEST(WidthLinear, BracketCollapsesAsThresholdApproachesOne) {
    double prev = INFINITY;
    for (double c0 : {0.9, 0.99, 0.999, 0.9999}) {
        ModelParams p;
        p.c0 = c0;
        const WidthSolution s = solve_width_linear(p);
        EXPECT_LT(s.w0, prev);
        EXPECT_GE(s.w0, s.bracket.first);
        EXPECT_LE(s.w0, s.bracket.second);
        prev = s.w0;
    }
    EXPECT_LT(prev, 0.05);
}

TEST(WidthLinear, DecreasingInThreshold) {
    double prev = INFINITY;
    for (double c0 : {0.7, 0.8, 0.9}) {
        ModelParams p;
        p.c0 = c0;
        const double w0 = solve_width_linear(p).w0;
        EXPECT_LT(w0, prev);
        prev = w0;
    }
}

TEST(WidthLinear, AdmissibilityFlagMatchesProduct) {
    for (double c0 : {0.3, 0.5, 0.8}) {
        ModelParams p;
        p.c0 = c0;
        const WidthSolution s = solve_width_linear(p);
        EXPECT_NEAR(s.beta_w0, derived_constants(p).beta * s.w0, 1e-15);
        EXPECT_EQ(s.admissible, s.beta_w0 < 1.0);
    }
    ModelParams low;
    low.c0 = 0.3;
    EXPECT_FALSE(solve_width_linear(low).admissible);
}

TEST(ViableDepth, ClosedFormValues) {
    const ModelParams p;
    ASSERT_TRUE(xbar_of_w(1.45, p).has_value());
    EXPECT_NEAR(*xbar_of_w(1.45, p), 0.417752478677693974, 1e-12);
    EXPECT_FALSE(xbar_of_w(0.1, p).has_value());
    // w_* = acosh(1/c0) / sqrt(alpha phi0) is where c0_w(1) = c0.
    EXPECT_FALSE(xbar_of_w(1.13190460601 - 1e-6, p).has_value());
    ASSERT_TRUE(xbar_of_w(1.13190460601 + 1e-6, p).has_value());
    EXPECT_NEAR(*xbar_of_w(1.13190460601 + 1e-6, p), 1.0, 1e-2);
}

TEST(ViableDepth, UniqueDecreasingAndVanishing) {
    const ModelParams p;
    double prev = 1.0 + 1e-12;
    for (double w = 1.14; w <= 10.0; w += 0.1) {
        const auto xb = xbar_of_w(w, p);
        ASSERT_TRUE(xb.has_value()) << "w " << w;
        EXPECT_LT(*xb, prev);
        EXPECT_NEAR(c0_closed_form(*xb, w, p), p.c0, 1e-12);
        // unique crossing: profile above c0 before, below after
        EXPECT_GT(c0_closed_form(*xb * 0.99, w, p), p.c0);
        EXPECT_LT(c0_closed_form(std::min(1.0, *xb * 1.01 + 1e-9), w, p), p.c0);
        prev = *xb;
    }
    ASSERT_TRUE(xbar_of_w(100.0, p).has_value());
    EXPECT_LT(*xbar_of_w(100.0, p), 0.05);
}

TEST(Perturbation, ClosedFormAtZeroWidth) {
    // Gamma(c0_0) = Gamma(1), so -phi1'' = k with k = g(phi0) Gamma(1) / Gamma_M.
    const ModelParams p;
    const Grid1D g(101);
    const double k = 0.1875 * 0.14 / 0.56;
    const Field1D v = perturbation_phi1(0.0, p, g);
    for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(v[i], 0.5 * k * (1.0 - g.x(i) * g.x(i)), 1e-12);
}

TEST(Perturbation, CompatibilityAndSignAtRoot) {
    const ModelParams p;
    const double w0 = solve_width_linear(p).w0;
    const Grid1D g(4001);
    const Field1D v = perturbation_phi1(w0, p, g);
    const double h = g.spacing();
    const double slope_right = (3.0 * v[4000] - 4.0 * v[3999] + v[3998]) / (2.0 * h);
    EXPECT_LT(std::abs(slope_right), 1e-5);
    // phi1(0) = integral of (1 - t) g(phi0) Gamma(c0_w(t)) / Gamma_M
    EXPECT_NEAR(v.front(), 0.00571078778227235863, 1e-8);
    EXPECT_EQ(*std::max_element(v.begin(), v.end()), v.front());
    for (double x : v) EXPECT_GE(x, -1e-12);
    EXPECT_EQ(v.back(), 0.0);
}

TEST(Perturbation, SecondOrderConvergence) {
    const ModelParams p;
    const double w0 = solve_width_linear(p).w0;
    const Field1D ref = perturbation_phi1(w0, p, Grid1D(3201));
    double prev = 0.0;
    for (int n : {101, 201, 401, 801}) {
        const Field1D v = perturbation_phi1(w0, p, Grid1D(n));
        const std::size_t step = 3200 / (n - 1);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(v[i] - ref[i * step]));
        if (prev > 0.0) {
            EXPECT_GT(std::log2(prev / err), 1.8) << "n " << n;
        }
        prev = err;
    }
}

TEST(Reconstruction, ReferenceErrorsAreSmall) {
    const ModelParams p;
    const double w0 = solve_width_linear(p).w0;
    const Reconstruction rec = reconstruct_and_errors(w0, p, Grid1D(2001));
    EXPECT_LT(rec.max_abs_E_phi, 1e-2);
    EXPECT_LT(rec.max_abs_E_c, 1e-2);
    EXPECT_GT(rec.max_abs_E_phi, 1e-5);
    EXPECT_NEAR(rec.nu, solve_width_linear(p).nu, 1e-12);
}

TEST(Reconstruction, ExactAtZeroWidth) {
    const Reconstruction rec = reconstruct_and_errors(0.0, ModelParams{}, Grid1D(51));
    EXPECT_EQ(rec.nu, 0.0);
    for (std::size_t i = 0; i < rec.x.size(); ++i) {
        EXPECT_NEAR(rec.E_phi[i], 0.0, 1e-12);
        EXPECT_NEAR(rec.E_c[i], 0.0, 1e-12);
    }
}

TEST(Reconstruction, SmallerGrowthRateImprovesAccuracy) {
    ModelParams p;
    const double w0 = solve_width_linear(p).w0;
    const double full = reconstruct_and_errors(w0, p, Grid1D(1001)).max_abs_E_phi;
    p.gamma *= 0.5;
    const double half = reconstruct_and_errors(w0, p, Grid1D(1001)).max_abs_E_phi;
    EXPECT_LT(half, full);
}

TEST(WidthCsv, SummaryRow) {
    const auto path = std::filesystem::temp_directory_path() / "tumorcord_width_test.csv";
    write_width_summary_csv(path.string(), solve_width_linear(ModelParams{}));
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "w0,bracket_lo,bracket_hi,beta_w0,admissible,nu,xbar");
    EXPECT_EQ(row.rfind("1.450121980671", 0), 0u) << row;
    std::filesystem::remove(path);
}
