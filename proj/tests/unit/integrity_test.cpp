#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "arrayaudit/integrity.hpp"
#include "arrayaudit/synth.hpp"

using namespace arrayaudit;
using namespace arrayaudit::integrity;

namespace {

SampleMeta at_day(const std::string& id, int day) {
    SampleMeta m;
    m.sample_id = id;
    m.run_timestamp = std::chrono::sys_seconds{std::chrono::days{20000 + day}};
    return m;
}

LabelMap collapse_labels(const LabelRoster& roster) {
    LabelMap out;
    for (const auto& e : roster.entries) out.emplace(e.sample_id, e.label);
    return out;
}

}  // namespace

TEST(Gather, OnlyLabeledLinesOfTheDrug) {
    const std::vector<SensitivityRecord> recs{{"A", "d", Measure::GI50, 5},
                                              {"B", "d", Measure::GI50, 6},
                                              {"C", "d", Measure::GI50, 7},
                                              {"A", "d", Measure::TGI, 9},
                                              {"A", "other", Measure::GI50, 1}};
    const LabelMap labels{{"A", GroupLabel::Sensitive}, {"B", GroupLabel::Resistant}, {"C", GroupLabel::Unknown}};
    const auto v = gather(recs, labels, "d", Measure::GI50);
    EXPECT_EQ(v.sensitive, (std::vector<double>{5}));
    EXPECT_EQ(v.resistant, (std::vector<double>{6}));
    EXPECT_EQ(gather_all(recs, "d", Measure::GI50).size(), 3u);
}

TEST(CheckSeparation, Examples) {
    const auto clean = check_separation({{7, 8, 9}, {4, 5}});
    EXPECT_EQ(clean.misfit_count, 0u);
    EXPECT_FALSE(clean.overlap);
    EXPECT_EQ(clean.best_threshold, 6.0);

    const auto one = check_separation({{7, 8, 4.5}, {4, 5}});
    EXPECT_EQ(one.misfit_count, 1u);
    EXPECT_TRUE(one.overlap);

    const auto backwards = check_separation({{1, 2}, {8, 9}});
    EXPECT_EQ(backwards.misfit_count, 2u);
    const auto autod = check_separation({{1, 2}, {8, 9}}, Orientation::Auto);
    EXPECT_EQ(autod.misfit_count, 0u);
    EXPECT_TRUE(autod.reversed_orientation);

    EXPECT_THROW(check_separation({{}, {1}}), Error);
}

TEST(CheckSeparation, MatchesExhaustiveScan) {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> z;
    for (int t = 0; t < 200; ++t) {
        LabeledValues v;
        for (int i = 0; i < 6; ++i) v.sensitive.push_back(std::round(z(rng) * 4) / 4 + 0.5);
        for (int i = 0; i < 5; ++i) v.resistant.push_back(std::round(z(rng) * 4) / 4);
        std::size_t best = v.sensitive.size() + v.resistant.size();
        std::vector<double> cuts{-1e9, 1e9};
        for (double x : v.sensitive) cuts.push_back(x);
        for (double x : v.resistant) cuts.push_back(x);
        for (double c : cuts) {
            for (double t2 : {c, std::nextafter(c, 1e10)}) {
                std::size_t miss = 0;
                for (double x : v.sensitive) miss += x < t2;
                for (double x : v.resistant) miss += x >= t2;
                best = std::min(best, miss);
            }
        }
        EXPECT_EQ(check_separation(v).misfit_count, best);
    }
}

TEST(CheckReversal, Verdicts) {
    EXPECT_EQ(check_reversal({{1, 2}, {8, 9}}).verdict, Verdict::Reversed);
    EXPECT_EQ(check_reversal({{8, 9}, {1, 2}}).verdict, Verdict::Consistent);
    const auto mid = check_reversal({{1, 9}, {2, 8}});
    EXPECT_EQ(mid.verdict, Verdict::Unknown);
    EXPECT_EQ(mid.auc, 0.5);
    EXPECT_THROW(check_reversal({{1}, {2, 3}}), Error);
    EXPECT_EQ(to_string(Verdict::Reversed), "Reversed");
}

TEST(CheckReversal, PemetrexedStructure) {
    const auto rev = synth::pemetrexed_dose(4, true);
    const auto labels = collapse_labels(rev.labels);
    const auto r = check_reversal(gather(rev.records, labels, rev.drug, Measure::GI50));
    EXPECT_TRUE(r.reversed);
    const auto ok = synth::pemetrexed_dose(4, false);
    EXPECT_EQ(check_reversal(gather(ok.records, collapse_labels(ok.labels), ok.drug, Measure::GI50)).verdict,
              Verdict::Consistent);
}

TEST(CheckFlatResponse, FlatAndSpread) {
    std::vector<double> flat;
    for (const auto& r : synth::flat_dose(5)) flat.push_back(r.value);
    EXPECT_TRUE(check_flat_response(flat).flat);
    std::vector<double> spread;
    for (const auto& r : synth::spread_dose(5, "x")) spread.push_back(r.value);
    EXPECT_FALSE(check_flat_response(spread).flat);
    EXPECT_EQ(check_flat_response({1, 2, 3, 4, 5}).range, 4.0);
    EXPECT_THROW(check_flat_response({1, 2, 3, 4}), Error);
}

TEST(Sentinel, Outcomes) {
    const std::vector<Sentinel> s{{"NCI/ADR-RES", GroupLabel::Resistant, "selected"}};
    EXPECT_TRUE(sentinel_check({{"NCI/ADR-RES", GroupLabel::Resistant}}, s).empty());
    const auto bad = sentinel_check({{"NCI/ADR-RES", GroupLabel::Sensitive}}, s);
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0].severity, Severity::Critical);
    EXPECT_EQ(bad[0].observed, GroupLabel::Sensitive);
    const auto absent = sentinel_check({}, s);
    ASSERT_EQ(absent.size(), 1u);
    EXPECT_EQ(absent[0].severity, Severity::Info);
    EXPECT_FALSE(absent[0].observed.has_value());
}

TEST(InferBatches, GapsAndOrder) {
    const std::vector<SampleMeta> m{at_day("a", 0), at_day("b", 2), at_day("c", 30), at_day("d", 31),
                                    at_day("e", 100)};
    EXPECT_EQ(infer_batches(m), (std::vector<int>{1, 1, 2, 2, 3}));
    EXPECT_EQ(infer_batches(m, std::chrono::days{365}), (std::vector<int>{1, 1, 1, 1, 1}));
    EXPECT_THROW(infer_batches({}), Error);
}

TEST(InferBatches, PermutationInvariant) {
    const auto metas = synth::balanced_meta(62, 60, 4);
    const auto base = infer_batches(metas);
    std::vector<std::size_t> idx(metas.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(62);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<SampleMeta> shuffled;
    for (auto i : idx) shuffled.push_back(metas[i]);
    const auto b = infer_batches(shuffled);
    for (std::size_t k = 0; k < idx.size(); ++k) EXPECT_EQ(b[k], base[idx[k]]);
    EXPECT_EQ(*std::max_element(base.begin(), base.end()), 4);
}

TEST(DetectBlocks, PlantedBlocks) {
    const auto m = synth::block_matrix(63, {5, 4, 6});
    auto blocks = detect_blocks(m);
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    ASSERT_EQ(blocks.size(), 3u);
    EXPECT_EQ(blocks[0].size(), 6u);
    EXPECT_EQ(blocks[1].size(), 5u);
    EXPECT_EQ(blocks[2].size(), 4u);

    synth::Rng rng(63);
    const auto indep = synth::random_matrix(rng, 300, 10);
    EXPECT_EQ(detect_blocks(indep).size(), 10u);
    EXPECT_EQ(detect_blocks(synth::block_matrix(64, {8})).size(), 1u);
}

TEST(TestConfounding, DiagonalIsPerfect) {
    const std::vector<std::string> batch{"1", "1", "2", "2"}, arm{"FEC", "FEC", "TET", "TET"};
    const auto r = test_confounding(batch, arm);
    EXPECT_TRUE(r.perfect);
    EXPECT_NEAR(r.cramers_v, 1.0, 1e-12);
    EXPECT_EQ(r.table.row_levels, (std::vector<std::string>{"FEC", "TET"}));
    EXPECT_EQ(r.table.counts, (std::vector<std::vector<std::size_t>>{{2, 0}, {0, 2}}));
}

TEST(TestConfounding, BalancedIsNearZero) {
    const std::vector<std::string> batch{"1", "1", "2", "2"}, arm{"A", "B", "A", "B"};
    const auto r = test_confounding(batch, arm);
    EXPECT_FALSE(r.perfect);
    EXPECT_EQ(r.cramers_v, 0.0);
    EXPECT_THROW(test_confounding({"1", "1"}, {"A", "B"}), Error);
    EXPECT_THROW(test_confounding({"1"}, {"A", "B"}), Error);
}

TEST(TestConfounding, FecTetStructure) {
    std::vector<SampleMeta> included;
    for (const auto& m : synth::fec_tet_meta(65)) {
        if (m.included) included.push_back(m);
    }
    const auto b = infer_batches(included);
    std::vector<std::string> batches, arms;
    for (std::size_t i = 0; i < included.size(); ++i) {
        batches.push_back(std::to_string(b[i]));
        arms.push_back(included[i].treatment_arm);
    }
    EXPECT_TRUE(test_confounding(batches, arms).perfect);
}

TEST(Combination, Rules) {
    EXPECT_EQ(combine_probabilities({{"T", .5}, {"F", .5}, {"A", .5}, {"C", .5}}, CombinationRule::SumMinusProduct).raw,
              1.9375);
    EXPECT_EQ(combine_probabilities({{"E", .3}, {"T", .8}}, CombinationRule::Max).score, 0.8);
    EXPECT_NEAR(combine_probabilities({{"F", .2}, {"E", .4}, {"C", .6}}, CombinationRule::AffineMean).score, 0.5,
                1e-15);
    EXPECT_EQ(combine_probabilities({{"F", 0}, {"E", 0}, {"C", 0}}, CombinationRule::AffineMean).score, 0.0);
    EXPECT_THROW(combine_probabilities({{"E", .3}}, CombinationRule::Max), Error);
    EXPECT_THROW(combine_probabilities({{"E", 1.3}, {"T", 0}}, CombinationRule::Max), Error);
}

TEST(Combination, BatchNormalization) {
    const std::vector<std::map<std::string, double>> batch{{{"T", .1}, {"F", .2}, {"A", .3}, {"C", .4}},
                                                            {{"T", .9}, {"F", .8}, {"A", .7}, {"C", .6}},
                                                            {{"T", .5}, {"F", .5}, {"A", .5}, {"C", .5}}};
    const auto s = combine_batch(batch, CombinationRule::SumMinusProduct);
    const double lo = s[0].raw, hi = s[1].raw;
    for (const auto& c : s) EXPECT_NEAR(c.score, (c.raw - lo) / (hi - lo), 1e-15);
    EXPECT_EQ(s[0].score, 0.0);
    EXPECT_EQ(s[1].score, 1.0);
    const std::vector<std::map<std::string, double>> same(3, batch[2]);
    EXPECT_THROW(combine_batch(same, CombinationRule::SumMinusProduct), DegenerateDataError);
}

TEST(Combination, RuleNames) {
    EXPECT_EQ(parse_rule("tfac"), CombinationRule::SumMinusProduct);
    EXPECT_EQ(parse_rule("tet"), CombinationRule::Max);
    EXPECT_EQ(parse_rule("fec"), CombinationRule::AffineMean);
    EXPECT_FALSE(parse_rule("xyz").has_value());
    EXPECT_EQ(required_keys(CombinationRule::Max), (std::vector<std::string>{"E", "T"}));
}
