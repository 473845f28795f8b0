#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "arrayaudit/signature.hpp"
#include "arrayaudit/stats.hpp"
#include "arrayaudit/synth.hpp"

using namespace arrayaudit;
using namespace arrayaudit::signature;

namespace {

// n per group, first `k_informative` genes shifted by `effect` in the Sensitive group.
LabeledMatrix two_groups(std::uint64_t seed, std::size_t nf, std::size_t n, std::size_t k_informative, double effect) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    LabeledMatrix m;
    for (std::size_t f = 0; f < nf; ++f) m.feature_ids.push_back("g" + std::to_string(f));
    for (std::size_t s = 0; s < 2 * n; ++s) {
        m.sample_ids.push_back("s" + std::to_string(s));
        m.labels[m.sample_ids.back()] = s < n ? GroupLabel::Sensitive : GroupLabel::Resistant;
    }
    for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t s = 0; s < 2 * n; ++s) m.values.push_back(z(rng) + (f < k_informative && s < n ? effect : 0));
    }
    return m;
}

}  // namespace

TEST(SelectTopGenes, PlantedGenesAreChosen) {
    const auto m = two_groups(31, 300, 10, 12, 5.0);
    const auto sig = select_top_genes(m, 12);
    std::set<std::string> got(sig.feature_ids.begin(), sig.feature_ids.end());
    std::set<std::string> want(m.feature_ids.begin(), m.feature_ids.begin() + 12);
    EXPECT_EQ(got, want);
    for (const auto& [id, d] : sig.directions) EXPECT_EQ(d, Direction::UpInSensitive) << id;
}

TEST(SelectTopGenes, OrderMatchesAbsT) {
    const auto m = two_groups(32, 40, 6, 5, 2.0);
    const auto sig = select_top_genes(m, 40);
    const auto t = abs_t_statistics(m);
    ASSERT_EQ(sig.size(), 40u);
    for (std::size_t i = 1; i < sig.size(); ++i) {
        const auto a = std::stoul(sig.feature_ids[i - 1].substr(1)), b = std::stoul(sig.feature_ids[i].substr(1));
        EXPECT_TRUE(t[a] > t[b] || (t[a] == t[b] && a < b));
    }
}

TEST(SelectTopGenes, TiesGoToLowerRowIndex) {
    LabeledMatrix m({"x", "y", "z"}, {"a", "b", "c", "d"}, {1, 2, 3, 5, 1, 2, 3, 5, 0, 0, 1, 0},
                    {{"a", GroupLabel::Sensitive}, {"b", GroupLabel::Sensitive},
                     {"c", GroupLabel::Resistant}, {"d", GroupLabel::Resistant}});
    const auto sig = select_top_genes(m, 2);
    EXPECT_EQ(sig.feature_ids, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(sig.directions[0].second, Direction::UpInResistant);
}

TEST(SelectTopGenes, SwappingGroupsFlipsDirectionsOnly) {
    auto m = two_groups(33, 60, 8, 6, 3.0);
    const auto a = select_top_genes(m, 10);
    for (auto& [id, l] : m.labels) l = l == GroupLabel::Sensitive ? GroupLabel::Resistant : GroupLabel::Sensitive;
    const auto b = select_top_genes(m, 10);
    EXPECT_EQ(a.feature_ids, b.feature_ids);
    for (std::size_t i = 0; i < a.directions.size(); ++i) EXPECT_NE(a.directions[i].second, b.directions[i].second);
}

TEST(SelectTopGenes, Errors) {
    const auto m = two_groups(34, 10, 3, 2, 1.0);
    EXPECT_THROW(select_top_genes(m, 0), Error);
    EXPECT_THROW(select_top_genes(m, 11), Error);
    auto one = m;
    for (auto& [id, l] : one.labels) l = GroupLabel::Sensitive;
    EXPECT_THROW(select_top_genes(one, 2), Error);
}

TEST(Metagene, RankOneMatrix) {
    const std::vector<double> u{1, -2, 0.5, 3}, v{0.3, -1.2, 2.0, 0.1, -0.7};
    LabeledMatrix m;
    for (std::size_t i = 0; i < u.size(); ++i) m.feature_ids.push_back("g" + std::to_string(i));
    for (std::size_t j = 0; j < v.size(); ++j) m.sample_ids.push_back("s" + std::to_string(j));
    double vmean = 0;
    for (double x : v) vmean += x / static_cast<double>(v.size());
    for (double a : u) {
        for (double b : v) m.values.push_back(a * b);
    }
    const auto s = metagene_scores(m).scores;
    std::vector<double> vc;
    for (double b : v) vc.push_back(b - vmean);
    const double cosine = stats::dot(s, vc) / std::sqrt(stats::dot(s, s) * stats::dot(vc, vc));
    EXPECT_GE(std::abs(cosine), 1 - 1e-8);
}

TEST(Metagene, RowShiftInvariance) {
    synth::Rng rng(35);
    auto m = synth::random_matrix(rng, 45, 30);
    const auto a = metagene_scores(m);
    for (std::size_t j = 0; j < 30; ++j) m.at(7, j) += 100.0;
    const auto b = metagene_scores(m);
    for (std::size_t j = 0; j < 30; ++j) EXPECT_NEAR(a.scores[j], b.scores[j], 1e-8);
}

TEST(Metagene, ProjectReproducesTrainingScores) {
    synth::Rng rng(36);
    const auto m = synth::random_matrix(rng, 20, 12);
    const auto fit = metagene_scores(m);
    const auto p = project(fit.model, m);
    for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(p[j], fit.scores[j], 1e-9);
    // Largest-magnitude loading is positive.
    double best = 0;
    for (double l : fit.model.loadings) best = std::abs(l) > std::abs(best) ? l : best;
    EXPECT_GT(best, 0);
}

TEST(Metagene, DegenerateAndAmbiguous) {
    LabeledMatrix flat({"a", "b"}, {"x", "y", "z"}, {1, 1, 1, 2, 2, 2});
    EXPECT_THROW(metagene_scores(flat), DegenerateDataError);
    // Two orthogonal directions of equal strength.
    LabeledMatrix tie({"a", "b"}, {"w", "x", "y", "z"}, {1, -1, 0, 0, 0, 0, 1, -1});
    bool flagged = false;
    try {
        flagged = fit_metagene(tie).ambiguous;
    } catch (const ConvergenceError&) {
        flagged = true;
    }
    EXPECT_TRUE(flagged);
}

TEST(Probit, SeparationIsDetected) {
    const std::vector<double> s{-1, 1};
    const std::vector<int> y{0, 1};
    const auto m = fit_probit(s, y);
    EXPECT_TRUE(m.separated);
    EXPECT_FALSE(m.converged);
    ASSERT_TRUE(m.separating_threshold.has_value());
    EXPECT_EQ(*m.separating_threshold, 0.0);
    EXPECT_THROW(predict_prob(m, s), Error);
}

TEST(Probit, RecoversSimulatedCoefficients) {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> z;
    std::vector<double> s(2000);
    std::vector<int> y(2000);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = z(rng);
        y[i] = z(rng) < 2.0 * s[i];
    }
    const auto m = fit_probit(s, y);
    ASSERT_TRUE(m.converged);
    EXPECT_NEAR(m.intercept, 0.0, 0.15);
    EXPECT_NEAR(m.slope, 2.0, 0.15);
    const auto g = probit_gradient(m.intercept, m.slope, s, y);
    EXPECT_LT(std::hypot(g[0], g[1]), 1e-6);
}

TEST(Probit, ScoreScalingRescalesSlope) {
    std::mt19937_64 rng(38);
    std::normal_distribution<double> z;
    std::vector<double> s(300), s3(300);
    std::vector<int> y(300);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = z(rng);
        s3[i] = 3 * s[i];
        y[i] = z(rng) < 0.5 + s[i];
    }
    const auto a = fit_probit(s, y), b = fit_probit(s3, y);
    EXPECT_NEAR(b.slope, a.slope / 3, 1e-7);
    const auto pa = predict_prob(a, s), pb = predict_prob(b, s3);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(pa[i], pb[i], 1e-8);
}

TEST(Probit, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(39);
    std::normal_distribution<double> z;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> s(30);
        std::vector<int> y(30);
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = z(rng);
            y[i] = static_cast<int>(rng() % 2);
        }
        const double a = z(rng), b = z(rng), h = 1e-5;
        const auto g = probit_gradient(a, b, s, y);
        const double da = (probit_log_likelihood(a + h, b, s, y) - probit_log_likelihood(a - h, b, s, y)) / (2 * h);
        const double db = (probit_log_likelihood(a, b + h, s, y) - probit_log_likelihood(a, b - h, s, y)) / (2 * h);
        EXPECT_LE(std::hypot(g[0] - da, g[1] - db) / std::max(1.0, std::hypot(da, db)), 1e-5);
    }
}

TEST(Probit, SingleClassIsAnError) {
    const std::vector<double> s{1, 2, 3};
    const std::vector<int> y{1, 1, 1};
    EXPECT_THROW(fit_probit(s, y), Error);
}

TEST(PredictProb, KnownValuesAndMonotone) {
    ProbitModel m;
    m.converged = true;
    m.slope = 1;
    const std::vector<double> s{0.0, 1.6449, -1, 0.5};
    const auto p = predict_prob(m, s);
    EXPECT_EQ(p[0], 0.5);
    EXPECT_NEAR(p[1], 0.95, 1e-4);
    EXPECT_LT(p[2], p[3]);
    ProbitModel raw;
    EXPECT_THROW(predict_prob(raw, s), Error);
    EXPECT_NO_THROW(predict_prob(raw, s, true));
}

TEST(Auc, Examples) {
    const std::vector<int> y{1, 1, 0, 0};
    EXPECT_EQ(auc(std::vector<double>{0.9, 0.8, 0.4, 0.3}, y), 1.0);
    EXPECT_EQ(auc(std::vector<double>{0.9, 0.35, 0.4, 0.3}, y), 0.75);
    const std::vector<int> inv{0, 0, 1, 1};
    EXPECT_EQ(auc(std::vector<double>{0.9, 0.35, 0.4, 0.3}, inv), 0.25);
    const auto f = auc_fraction(std::vector<double>{1, 1, 0, 0}, std::vector<int>{1, 0, 1, 0});
    EXPECT_EQ(f.numerator * 2, f.denominator);  // ties count 1/2
}

TEST(Roc, CurveShape) {
    const std::vector<double> s{0.9, 0.8, 0.8, 0.1};
    const std::vector<int> y{1, 0, 1, 0};
    const auto c = roc_curve(s, y);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c.front().fpr, 0);
    EXPECT_EQ(c.front().tpr, 0);
    EXPECT_EQ(c.back().fpr, 1);
    EXPECT_EQ(c.back().tpr, 1);
    EXPECT_THROW(roc_curve(s, std::vector<int>{1, 1, 1, 1}), Error);
}
