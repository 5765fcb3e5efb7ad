#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "volint/errors.hpp"
#include "volint/evaluation.hpp"

using namespace volint;

TEST(ExceedanceRatio, TrueVolatilityIsCalibrated) {
    std::mt19937_64 eng(12);
    std::normal_distribution<double> z;
    const std::size_t m = 100000;
    std::vector<double> y(m), s2(m);
    for (std::size_t i = 0; i < m; ++i) {
        s2[i] = 0.5 + (i % 7) * 0.1;
        y[i] = std::sqrt(s2[i]) * z(eng);
    }
    const double er = exceedance_ratio(y, s2, normal_quantile(0.05));
    EXPECT_NEAR(er, 0.05, 4.0 * std::sqrt(0.05 * 0.95 / m));
}

TEST(ExceedanceRatio, InfiniteBandAndHandCase) {
    const std::vector<double> y{-3.0, -1.0, 2.0};
    const std::vector<double> huge(3, 1e300);
    EXPECT_EQ(exceedance_ratio(y, huge, normal_quantile(0.05)), 0.0);
    EXPECT_EQ(exceedance_ratio(std::vector<double>{-1.0, 1.0}, std::vector<double>{0.0, 0.0}, -1.645),
              0.5);
    EXPECT_THROW(exceedance_ratio(y, std::vector<double>{1.0}, -1.0), std::invalid_argument);
}

TEST(ExceedanceRatio, UnresolvableQuantileIsAnError) {
    QuantileSource q;
    q.kind = QuantileKind::EmpiricalResidual;
    q.window = 250;
    q.residuals.assign(100, 0.0);
    ForecastTrack t{"x", {1.0}};
    EXPECT_THROW(exceedance_ratio(std::vector<double>{0.0}, t, q), InsufficientHistory);
}

TEST(Made, Cases) {
    const std::vector<double> y{1.0, -2.0};
    EXPECT_EQ(made(y, std::vector<double>{1.0, 4.0}), 0.0);
    EXPECT_DOUBLE_EQ(made(y, std::vector<double>{2.0, 2.0}), 1.5);
}

TEST(Pe, HandCase) {
    const std::vector<double> y{1.0, -2.0};
    EXPECT_DOUBLE_EQ(pe(y, std::vector<double>{2.0, 2.0}), (1.0 + 4.0) / 2.0);
}

TEST(Rade, Cases) {
    const double c = std::sqrt(2.0 / std::numbers::pi);
    EXPECT_NEAR(c, 0.7979, 1e-4);
    EXPECT_NEAR(rade(std::vector<double>{c * 2.0}, std::vector<double>{4.0}), 0.0, 1e-15);
    EXPECT_NEAR(rade(std::vector<double>{1.0, -0.5}, std::vector<double>{1.0, 4.0}),
                (std::abs(1.0 - c) + std::abs(0.5 - 2.0 * c)) / 2.0, 1e-15);
}

TEST(Imade, Cases) {
    EXPECT_EQ(imade(std::vector<double>{0.1, 0.2}, std::vector<double>{0.1, 0.2}), 0.0);
    EXPECT_NEAR(imade(std::vector<double>{0.1, 0.2}, std::vector<double>{0.3, 0.1}), 0.15, 1e-16);
    EXPECT_THROW(imade(std::vector<double>{}, std::vector<double>{0.1}), NotApplicable);
}

TEST(Score, Cases) {
    const MeasureMatrix best{{1, 2, 3}, {1, 5, 6}};
    EXPECT_EQ(score(best), (std::vector<double>{1.0, 0.0, 0.0}));
    const MeasureMatrix tie{{2, 2, 2}, {1, 1, 1}};
    EXPECT_EQ(score(tie), (std::vector<double>{0.0, 0.0, 0.0}));
    // row means 2, 3, 4
    const MeasureMatrix hand{{1, 3}, {4, 2}, {3, 5}};
    EXPECT_EQ(score(hand), (std::vector<double>{2.0 / 3.0, 1.0 / 3.0}));
}

TEST(RelativeLoss, Cases) {
    EXPECT_EQ(relative_loss(std::vector<double>{0.5, 0.5}, 0), (std::vector<double>{0.0, 0.0}));
    const auto r = relative_loss(std::vector<double>{0.2, 0.1}, 1);
    EXPECT_DOUBLE_EQ(r[0], 1.0);
    EXPECT_EQ(r[1], 0.0);
}

TEST(TrimmedMean, Cases) {
    std::vector<double> xs(100);
    std::iota(xs.begin(), xs.end(), 1.0);
    EXPECT_DOUBLE_EQ(trimmed_mean(xs, 0.0), 50.5);
    EXPECT_DOUBLE_EQ(trimmed_mean(xs, 0.05), 48.0);
    std::reverse(xs.begin(), xs.end());
    EXPECT_DOUBLE_EQ(trimmed_mean(xs, 0.05), 48.0);
}

TEST(EmpiricalQuantile, OrderStatistic) {
    std::vector<double> xs(250);
    std::iota(xs.begin(), xs.end(), 1.0);
    std::shuffle(xs.begin(), xs.end(), std::mt19937_64(4));
    EXPECT_EQ(empirical_quantile(xs, 0.05, 250), 13.0);
    EXPECT_THROW(empirical_quantile(xs, 0.05, 251), InsufficientHistory);
}

TEST(EmpiricalQuantile, GaussianAndSymmetric) {
    std::mt19937_64 eng(8);
    std::normal_distribution<double> z;
    std::vector<double> xs(200000);
    for (double& v : xs) v = z(eng);
    EXPECT_NEAR(empirical_quantile(xs, 0.05, xs.size()), normal_quantile(0.05), 0.02);
    std::vector<double> sym;
    for (int i = -100; i <= 100; ++i) sym.push_back(i);
    EXPECT_NEAR(empirical_quantile(sym, 0.5, sym.size()), 0.0, 1.0);
}

TEST(Summarize, RecomputableFromTable) {
    MeasureTable t;
    t.estimator_ids = {"A", "B", "C"};
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int r = 0; r < 40; ++r) {
        for (Measure m : kAllMeasures) {
            t.get(m).push_back({u(eng), u(eng), u(eng)});
        }
    }
    const MeasureReport rep = summarize(t, 2, 0.05);
    ASSERT_EQ(rep.estimators.size(), 3u);
    EXPECT_EQ(rep.n_reps, 40u);
    for (Measure m : kAllMeasures) {
        const auto sc = score(t.get(m));
        std::vector<double> means(3), tmeans(3);
        for (std::size_t e = 0; e < 3; ++e) {
            std::vector<double> col;
            for (const auto& row : t.get(m)) col.push_back(row[e]);
            means[e] = mean(col);
            tmeans[e] = trimmed_mean(col, 0.05);
            const MeasureSummary& s = rep.estimators[e].get(m);
            EXPECT_TRUE(s.available);
            EXPECT_EQ(s.mean, means[e]);
            EXPECT_EQ(s.std, stddev(col));
            EXPECT_EQ(s.trimmed_mean, tmeans[e]);
            EXPECT_EQ(s.score, sc[e]);
        }
        if (m == Measure::ER) {
            continue;
        }
        const auto rl = relative_loss(means, 2);
        const auto trl = relative_loss(tmeans, 2);
        for (std::size_t e = 0; e < 3; ++e) {
            EXPECT_EQ(rep.estimators[e].get(m).rel_loss, rl[e]);
            EXPECT_EQ(rep.estimators[e].get(m).trimmed_rel_loss, trl[e]);
        }
    }
}

TEST(Summarize, MissingMeasureIsUnavailable) {
    MeasureTable t;
    t.estimator_ids = {"A", "B"};
    t.made = {{1.0, 2.0}};
    t.rade = {{1.0, 2.0}};
    t.er = {{0.05, 0.04}};
    t.pe = {{1.0, 2.0}};
    const MeasureReport rep = summarize(t, 1, 0.0);
    EXPECT_FALSE(rep.find("A").imade.available);
    EXPECT_TRUE(rep.find("A").made.available);
    std::ostringstream csv, txt;
    write_report_csv(csv, rep);
    write_report_table(txt, rep, "fixture");
    EXPECT_EQ(csv.str().find("IMADE"), std::string::npos);
    EXPECT_EQ(csv.str().rfind("estimator,measure,statistic,value\n", 0), 0u);
    EXPECT_NE(txt.str().find("MADE"), std::string::npos);
}
