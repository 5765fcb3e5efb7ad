#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "volint/integration.hpp"

using namespace volint;

TEST(DynamicWeight, Cases) {
    EXPECT_DOUBLE_EQ(dynamic_weight(1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(dynamic_weight(1.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(dynamic_weight(0.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(dynamic_weight(2.0, 6.0), 0.75);
    EXPECT_DOUBLE_EQ(dynamic_weight(0.0, 0.0), 0.5);
    EXPECT_THROW(dynamic_weight(-1.0, 1.0), std::invalid_argument);
}

TEST(DynamicWeight, DegenerateTieIsFlagged) {
    const IntegratedEstimate e = integrate_dynamic(0.02, 0.0, 0.04, 0.0);
    EXPECT_TRUE(e.degenerate_weight);
    EXPECT_DOUBLE_EQ(e.w_time, 0.5);
    EXPECT_FALSE(integrate_dynamic(0.02, 1.0, 0.04, 1.0).degenerate_weight);
}

TEST(Integrate, EndpointsAndArithmetic) {
    EXPECT_EQ(integrate(0.02, 0.04, 1.0).sigma2_hat, 0.02);
    EXPECT_EQ(integrate(0.02, 0.04, 0.0).sigma2_hat, 0.04);
    EXPECT_NEAR(integrate(0.02, 0.04, 0.25).sigma2_hat, 0.035, 1e-16);
    EXPECT_THROW(integrate(0.02, 0.04, 1.5), std::invalid_argument);
    EXPECT_THROW(integrate(-0.02, 0.04, 0.5), std::invalid_argument);
}

TEST(Integrate, AlwaysBetweenInputs) {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(eng) * 1e-3, b = u(eng) * 10.0, w = u(eng);
        const double v = integrate(a, b, w).sigma2_hat;
        EXPECT_GE(v, std::min(a, b));
        EXPECT_LE(v, std::max(a, b));
    }
}

TEST(IgPosterior, Updates) {
    const IgPrior zero = ig_posterior({2.5, 0.1}, std::vector<double>{0.0});
    EXPECT_DOUBLE_EQ(zero.a, 3.0);
    EXPECT_DOUBLE_EQ(zero.b, 0.1);
    const IgPrior p = ig_posterior({2.5, 0.015}, std::vector<double>{0.1, 0.1, 0.1, 0.1});
    EXPECT_DOUBLE_EQ(p.a, 4.5);
    EXPECT_NEAR(p.b, 0.035, 1e-16);
    EXPECT_THROW(ig_posterior({2.5, 0.1}, std::vector<double>{}), std::invalid_argument);
}

TEST(IgPosterior, MeanEqualsBayesCombination) {
    const std::vector<double> y{0.3, -0.1, 0.2, 0.05, -0.4};
    const IgPrior prior{2.5, 0.02};
    const IgPrior post = ig_posterior(prior, y);
    double ss = 0.0;
    for (double v : y) ss += v * v;
    const double ma = ss / y.size();
    EXPECT_NEAR(post.mean(), bayes_ma(ma, prior.mean(), 5, prior.a), 1e-15);
}

TEST(BayesMa, Weights) {
    EXPECT_NEAR(bayes_ma(1.0, 0.0, 1000000000, 2.5), 1.0, 1e-8);
    EXPECT_DOUBLE_EQ(bayes_ma(1.0, 3.0, 3, 2.5), 2.0);
    EXPECT_DOUBLE_EQ(bayes_ma(0.2, 0.4, 4, 3.0), 0.3);
    EXPECT_THROW(bayes_ma(1.0, 1.0, 0, 2.5), std::invalid_argument);
    EXPECT_THROW(bayes_ma(1.0, 1.0, 3, 1.0), std::invalid_argument);
}

TEST(EffectiveN, Values) {
    EXPECT_EQ(effective_n(1.0, 52), 52.0);
    EXPECT_DOUBLE_EQ(effective_n(0.5, 3), 1.75);
    EXPECT_NEAR(effective_n(0.94, 52), (1 - std::pow(0.94, 52)) / 0.06, 1e-12);
}

TEST(BayesEs, LambdaOneIsBayesMa) {
    for (int n : {1, 12, 52}) {
        EXPECT_EQ(bayes_es(0.013, 0.021, 1.0, n, 2.5), bayes_ma(0.013, 0.021, n, 2.5));
    }
}

TEST(BayesEs, WeightOnTimeEstimate) {
    const double ns = effective_n(0.94, 52);
    const double w = ns / (ns + 3.0);
    EXPECT_NEAR(bayes_es(1.0, 0.0, 0.94, 52, 2.5), w, 1e-15);
    EXPECT_NEAR(bayes_es(0.7, 0.2, 0.94, 52, 1.0 + 1e-12), 0.7, 1e-9);
}

TEST(MatchHyperparams, Moments) {
    const IgPrior p = match_hyperparams(0.01);
    EXPECT_DOUBLE_EQ(p.a, 2.5);
    EXPECT_DOUBLE_EQ(p.b, 0.015);
    EXPECT_NEAR(p.mean(), 0.01, 1e-17);
    EXPECT_NEAR(p.variance(), 2.0 * 0.01 * 0.01, 1e-18);
    const IgPrior z = match_hyperparams(0.0);
    EXPECT_EQ(z.b, 0.0);
}

TEST(NonBay, StateWeight) {
    EXPECT_NEAR(nonbayes_state_weight(0.94, 52), 0.18 / (1 - std::pow(0.94, 52) + 0.18), 1e-15);
    EXPECT_EQ(nonbayes_state_weight(1.0, 52), 0.0);
    // Approaching one the weight tends to 3 / (n + 3); lambda = 1 itself is pure ES.
    EXPECT_NEAR(nonbayes_state_weight(1.0 - 1e-9, 52), 3.0 / 55.0, 1e-6);
    EXPECT_EQ(nonbayes_static(0.02, 0.05, 1.0, 52), 0.02);
    const double ws = nonbayes_state_weight(0.94, 52);
    EXPECT_NEAR(nonbayes_static(0.02, 0.05, 0.94, 52), (1 - ws) * 0.02 + ws * 0.05, 1e-17);
}

TEST(Efficiency, Cases) {
    const EfficiencyRatios sym = efficiency_ratios(1.0, 2.0, 2.0);
    EXPECT_DOUBLE_EQ(sym.vs_state, 2.0);
    EXPECT_DOUBLE_EQ(sym.vs_time, 2.0);
    const EfficiencyRatios hand = efficiency_ratios(0.5, 1.0, 4.0);
    EXPECT_DOUBLE_EQ(hand.vs_state, 3.0);
    EXPECT_DOUBLE_EQ(hand.vs_time, 1.5);
    std::mt19937_64 eng(1);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const EfficiencyRatios e = efficiency_ratios(u(eng), u(eng), u(eng));
        EXPECT_GT(e.vs_state, 1.0);
        EXPECT_GT(e.vs_time, 1.0);
        EXPECT_NEAR((e.vs_state - 1.0) * (e.vs_time - 1.0), 1.0, 1e-12);
    }
    EXPECT_THROW(efficiency_ratios(0.0, 1.0, 1.0), std::invalid_argument);
}
