#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "volint/errors.hpp"
#include "volint/time_domain.hpp"

using namespace volint;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> y(n);
    for (double& v : y) v = d(eng);
    return y;
}

// c_t with rho = 0 by summing the squared weights one by one.
double brute_force_c_iid(double lambda, int n) {
    double norm = 0.0;
    for (int i = 1; i <= n; ++i) norm += std::pow(lambda, i - 1);
    double c = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double w = std::pow(lambda, i - 1) / norm;
        c += w * w;
    }
    return c;
}

// c_t from the double sum sum_i sum_j w_i w_j rho(|i-j|).
double brute_force_c(double lambda, int n, const std::vector<double>& rho) {
    const auto w = es_weights({lambda, n});
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int k = std::abs(i - j);
            const double r = k == 0 ? 1.0 : (k <= static_cast<int>(rho.size()) ? rho[k - 1] : 0.0);
            c += w[i] * w[j] * r;
        }
    }
    return c;
}

} // namespace

TEST(MovingAverage, ConstantCase) {
    const std::vector<double> y{1, 1, 1, 1};
    EXPECT_DOUBLE_EQ(moving_average(y, 4, 4), 1.0);
}

TEST(MovingAverage, HandArithmetic) {
    const std::vector<double> y{0.1, -0.2, 0.3};
    EXPECT_NEAR(moving_average(y, 3, 3), 0.14 / 3.0, 1e-15);
}

TEST(MovingAverage, InsufficientHistory) {
    const std::vector<double> y{0.1, 0.2};
    EXPECT_THROW(moving_average(y, 2, 3), InsufficientHistory);
    EXPECT_THROW(moving_average(y, 1, 2), InsufficientHistory);
}

TEST(ExpSmooth, LambdaOneIsMovingAverage) {
    const auto y = gaussian(400, 1);
    for (std::size_t t : {52u, 100u, 399u}) {
        for (int n : {1, 5, 52}) {
            EXPECT_EQ(exp_smooth(y, t, {1.0, n}), moving_average(y, t, n));
        }
    }
}

TEST(ExpSmooth, HandArithmetic) {
    const std::vector<double> y{0.1, 0.2};
    EXPECT_NEAR(exp_smooth(y, 2, {0.5, 2}), 0.03, 1e-15);
}

TEST(ExpSmooth, WeightsSumToOne) {
    for (double lambda : {0.5, 0.9, 0.94, 0.97, 1.0}) {
        const auto w = es_weights({lambda, 52});
        EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-14);
        for (std::size_t i = 1; i < w.size(); ++i) {
            EXPECT_LE(w[i], w[i - 1]);
        }
    }
}

TEST(ExpSmooth, RecursionAgrees) {
    const auto y = gaussian(300, 2);
    for (std::size_t t : {60u, 200u, 300u}) {
        EXPECT_NEAR(exp_smooth_recursive(y, t, {0.94, 52}), exp_smooth(y, t, {0.94, 52}), 1e-14);
    }
}

TEST(ExpSmooth, RejectsBadConfig) {
    const std::vector<double> y(10, 1.0);
    EXPECT_THROW(exp_smooth(y, 10, {0.0, 5}), std::invalid_argument);
    EXPECT_THROW(exp_smooth(y, 10, {1.1, 5}), std::invalid_argument);
    EXPECT_THROW(exp_smooth(y, 10, {0.9, 0}), std::invalid_argument);
    EXPECT_THROW(exp_smooth(y, 4, {0.9, 5}), InsufficientHistory);
}

TEST(Autocorr, WhiteNoiseIsSmall) {
    const auto y = gaussian(5000, 3);
    const auto rho = autocorr_sq(y, y.size());
    ASSERT_EQ(rho.size(), 30u);
    for (double r : rho) {
        EXPECT_LT(std::abs(r), 4.0 / std::sqrt(5000.0));
    }
}

TEST(Autocorr, AlternatingSquaresApproachMinusOne) {
    std::vector<double> y(4000);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 2 == 0 ? 1.0 : 2.0;
    const auto rho = autocorr_sq(y, y.size(), 4);
    EXPECT_NEAR(rho[0], -1.0, 1e-3);
    EXPECT_NEAR(rho[1], 1.0, 1e-3);
    for (double r : rho) {
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
    }
}

TEST(Autocorr, DegenerateAndShort) {
    const std::vector<double> flat(100, 0.5);
    EXPECT_THROW(autocorr_sq(flat, 100), DegenerateSeries);
    const auto y = gaussian(31, 4);
    EXPECT_THROW(autocorr_sq(y, 31), InsufficientHistory);
    EXPECT_NO_THROW(autocorr_sq(y, 31, 29));
}

TEST(EsVariance, IidClosedForm) {
    for (double lambda : {0.5, 0.9, 0.94, 0.97}) {
        for (int n : {2, 12, 52}) {
            const double ln = std::pow(lambda, n);
            const double closed = 2.0 * (1 - lambda) * (1 + ln) / ((1 + lambda) * (1 - ln));
            const TimeVarianceEstimate e = es_variance(1.0, {lambda, n}, {});
            EXPECT_NEAR(e.var_hat, closed, 1e-12 * closed);
            EXPECT_NEAR(e.c_t, brute_force_c_iid(lambda, n), 1e-14);
            EXPECT_FALSE(e.clamped);
        }
    }
}

TEST(EsVariance, LambdaOneIidIsTwoOverN) {
    const TimeVarianceEstimate e = es_variance(1.0, {1.0, 52}, {});
    EXPECT_NEAR(e.var_hat, 2.0 / 52.0, 1e-15);
}

TEST(EsVariance, ScalesWithSigmaToTheFourth) {
    const TimeVarianceEstimate a = es_variance(1.0, {0.94, 52}, {});
    const TimeVarianceEstimate b = es_variance(0.3, {0.94, 52}, {});
    EXPECT_NEAR(b.var_hat, 0.09 * a.var_hat, 1e-15);
}

TEST(EsVariance, MatchesDoubleSumWithCorrelation) {
    std::vector<double> rho(30);
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = 0.6 * std::pow(0.85, k);
    for (double lambda : {0.9, 0.94, 1.0}) {
        for (int n : {12, 52}) {
            const TimeVarianceEstimate e = es_variance(1.0, {lambda, n}, rho);
            EXPECT_NEAR(e.c_t, brute_force_c(lambda, n, rho), 1e-12);
        }
    }
}

TEST(EsVariance, WildCorrelationIsFloored) {
    const std::vector<double> rho(30, -1.0);
    const TimeVarianceEstimate e = es_variance(1.0, {0.94, 52}, rho);
    EXPECT_TRUE(e.clamped);
    EXPECT_GT(e.c_t, 0.0);
    EXPECT_NEAR(e.c_t, 1e-2 * es_correction_iid({0.94, 52}), 1e-18);
}

TEST(S1Squared, SmallCLimit) {
    EXPECT_DOUBLE_EQ(s1_squared(1.0, 0.0), 2.0);
    EXPECT_NEAR(s1_squared(1.0, 1e-8), 2.0, 1e-12);
}

TEST(S1Squared, DirectEvaluation) {
    const double c = 52 * (1 - 0.94);
    EXPECT_NEAR(c, 3.12, 1e-12);
    EXPECT_NEAR(s1_squared(2.0, c), 4.0 * c * (std::exp(c) + 1) / (std::exp(c) - 1), 1e-12);
}

TEST(S1Squared, LimitOfScaledFiniteVariance) {
    const double c = 3.12;
    double prev_gap = 1e9;
    for (int n : {52, 520, 5200, 52000}) {
        const double lambda = 1.0 - c / n;
        const double scaled = n * es_variance(1.0, {lambda, n}, {}).var_hat;
        const double gap = std::abs(scaled - s1_squared(1.0, c));
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-3);
}
