#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arrayaudit/stats.hpp"
#include "arrayaudit/synth.hpp"
#include "arrayaudit/transform.hpp"

using namespace arrayaudit;
using namespace arrayaudit::transform;

TEST(Pipeline, ParseAndPrint) {
    const auto p = parse_pipeline("log:e|zscore:n-1|exp:e|round:2");
    EXPECT_EQ(p.step_count(), 4);
    EXPECT_EQ(to_string(p), "log:e|zscore:n-1|exp:e|round:2");
    EXPECT_TRUE(parse_pipeline("").empty());
    EXPECT_TRUE(parse_pipeline("identity").empty());
    EXPECT_EQ(to_string(TransformPipeline{}), "identity");
    EXPECT_THROW(parse_pipeline("exp:e|log:e"), Error);
    EXPECT_THROW(parse_pipeline("log:e|log:2"), Error);
    EXPECT_THROW(parse_pipeline("log:3"), Error);
    EXPECT_THROW(parse_pipeline("scale:2"), Error);
}

TEST(ApplyPipeline, WorkedRow) {
    LabeledMatrix m({"r"}, {"a", "b", "c"}, {1, std::exp(1.0), std::exp(2.0)});
    const auto out = apply_pipeline(m, parse_pipeline("log:e|zscore:n-1|exp:e|round:2"));
    EXPECT_EQ(out.values, (std::vector<double>{0.37, 1.00, 2.72}));
    EXPECT_EQ(out.feature_ids, m.feature_ids);
}

TEST(ApplyPipeline, ConstantRowUnderZScoreNamesTheRow) {
    LabeledMatrix m({"flat"}, {"a", "b", "c"}, {5, 5, 5});
    try {
        apply_pipeline(m, parse_pipeline("zscore:n"));
        FAIL() << "expected DegenerateDataError";
    } catch (const DegenerateDataError& e) {
        EXPECT_EQ(e.subject(), "flat");
    }
}

TEST(ApplyPipeline, NonPositiveUnderLogNamesTheCell) {
    LabeledMatrix m({"r"}, {"a", "b"}, {1, 0});
    try {
        apply_pipeline(m, parse_pipeline("log:2"));
        FAIL() << "expected DegenerateDataError";
    } catch (const DegenerateDataError& e) {
        EXPECT_EQ(e.subject(), "r/b");
    }
}

TEST(ApplyPipeline, IdentityAndMissing) {
    synth::Rng rng(1);
    auto m = synth::random_matrix(rng, 5, 6);
    EXPECT_EQ(apply_pipeline(m, {}).values, m.values);
    m.at(0, 0) = kMissing;
    const auto out = apply_pipeline(m, parse_pipeline("log:10|zscore:n-1"));
    EXPECT_TRUE(is_missing(out.at(0, 0)));
    EXPECT_FALSE(is_missing(out.at(0, 1)));
}

TEST(ApplyPipeline, ZScoreCorrelatesPerfectlyWithItsInput) {
    synth::Rng rng(2);
    const auto m = synth::random_matrix(rng, 30, 12);
    const auto z = apply_pipeline(m, parse_pipeline("zscore:n"));
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        EXPECT_NEAR(stats::pearson(m.row(r), z.row(r)), 1.0, 1e-12);
    }
}

TEST(ApplyPipeline, RoundingMovesValuesByAtMostHalfAUnit) {
    synth::Rng rng(3);
    const auto m = synth::random_matrix(rng, 50, 10);
    const auto r = apply_pipeline(m, parse_pipeline("round:2"));
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        EXPECT_LE(std::abs(r.values[i] - m.values[i]), 0.005 + 1e-12);
    }
}

TEST(DefaultCandidates, TwelvePipelines) {
    const auto c = default_candidates();
    EXPECT_EQ(c.size(), 12u);
    std::set<std::string> names;
    for (const auto& p : c) names.insert(to_string(p));
    EXPECT_EQ(names.size(), 12u);
}

TEST(InferPipeline, IdentityWhenQueryEqualsReference) {
    synth::Rng rng(4);
    const auto m = synth::random_matrix(rng, 40, 10);
    auto cands = default_candidates();
    cands.push_back({});
    const auto fit = infer_pipeline(m, m, cands);
    EXPECT_TRUE(fit.best.empty());
    EXPECT_NEAR(fit.fit, 1.0, 1e-12);
    EXPECT_EQ(fit.residual, 0.0);
}

TEST(InferPipeline, RowPermutedQueryFitsPoorly) {
    synth::Rng rng(5);
    const auto m = synth::random_matrix(rng, 100, 20);
    std::vector<std::size_t> perm(100);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    LabeledMatrix q = m;
    for (std::size_t r = 0; r < 100; ++r) {
        std::copy(m.row(perm[r]).begin(), m.row(perm[r]).end(), q.row(r).begin());
    }
    auto cands = default_candidates();
    cands.push_back({});
    EXPECT_LT(infer_pipeline(q, m, cands).fit, 0.5);
}

TEST(InferPipeline, RecoversEveryGridPipeline) {
    const auto grid = default_candidates();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        synth::Rng rng(50 + i);
        const auto ref = synth::random_matrix(rng, 200, 20);
        const auto fit = infer_pipeline(apply_pipeline(ref, grid[i]), ref, grid);
        EXPECT_EQ(fit.best, grid[i]) << to_string(grid[i]);
        EXPECT_EQ(fit.best_index, i);
        if (grid[i].round_digits) {
            EXPECT_GE(fit.fit, 0.999);
        } else {
            EXPECT_NEAR(fit.fit, 1.0, 1e-12);
        }
    }
}

TEST(InferPipeline, Errors) {
    synth::Rng rng(6);
    const auto a = synth::random_matrix(rng, 5, 4), b = synth::random_matrix(rng, 6, 4);
    EXPECT_THROW(infer_pipeline(a, a, {}), Error);
    EXPECT_THROW(infer_pipeline(a, b, default_candidates()), Error);
}
