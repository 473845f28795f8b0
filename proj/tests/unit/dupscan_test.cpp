#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "arrayaudit/dupscan.hpp"
#include "arrayaudit/stats.hpp"
#include "arrayaudit/synth.hpp"

using namespace arrayaudit;
using namespace arrayaudit::dupscan;

namespace {

// Union-find over all column pairs, written independently of the library.
std::size_t brute_distinct(const LabeledMatrix& m, double threshold) {
    const std::size_t n = m.n_samples();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto a = m.column(i), b = m.column(j);
            if (a == b || stats::pearson(a, b) >= threshold) parent[find(i)] = find(j);
        }
    }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) roots.insert(find(i));
    return roots.size();
}

}  // namespace

TEST(FindDuplicates, MultiplicityProfile) {
    const auto fix = synth::doxorubicin_test_set(11);
    const auto d = find_duplicate_columns(fix.matrix);
    EXPECT_EQ(d.n_distinct, 84u);
    EXPECT_EQ(d.multiplicity_histogram, (std::map<std::size_t, std::size_t>{{1, 60}, {2, 14}, {3, 6}, {4, 4}}));
    EXPECT_EQ(d.components.size(), 24u);
}

TEST(FindDuplicates, AllDistinctRandomColumns) {
    synth::Rng rng(12);
    const auto m = synth::random_matrix(rng, 100, 50);
    const auto d = find_duplicate_columns(m);
    EXPECT_TRUE(d.components.empty());
    EXPECT_EQ(d.n_distinct, 50u);
    EXPECT_EQ(brute_distinct(m, 0.9999), 50u);
}

TEST(FindDuplicates, BitwiseCopy) {
    LabeledMatrix m({"a", "b", "c", "d"}, {"c1", "c2", "c3"}, {1, 1, 5, 2, 2, 1, 3, 3, 9, 4, 4, 2});
    const auto d = find_duplicate_columns(m);
    ASSERT_EQ(d.components.size(), 1u);
    EXPECT_EQ(d.components[0], (Component{"c1", "c2"}));
    EXPECT_EQ(d.n_distinct, 2u);
    DupScanConfig exact;
    exact.corr_threshold = 1.0;
    EXPECT_EQ(find_duplicate_columns(m, exact).n_distinct, 2u);
}

TEST(FindDuplicates, ZeroVarianceColumnIsReportedNotLinked) {
    LabeledMatrix m({"a", "b", "c"}, {"x", "flat", "y"}, {1, 7, 1, 2, 7, 2, 3, 7, 3});
    const auto d = find_duplicate_columns(m);
    EXPECT_EQ(d.degenerate, (std::vector<std::string>{"flat"}));
    EXPECT_EQ(d.n_distinct, 2u);
}

TEST(FindDuplicates, Preconditions) {
    LabeledMatrix one({"a", "b", "c"}, {"x"}, {1, 2, 3});
    EXPECT_THROW(find_duplicate_columns(one), Error);
    LabeledMatrix two_rows({"a", "b"}, {"x", "y"}, {1, 2, 3, 4});
    EXPECT_THROW(find_duplicate_columns(two_rows), Error);
    DupScanConfig bad;
    bad.corr_threshold = 0;
    synth::Rng rng(1);
    EXPECT_THROW(find_duplicate_columns(synth::random_matrix(rng, 5, 5), bad), Error);
}

TEST(FindDuplicates, LogComparisonAndMissingPolicy) {
    auto fix = synth::planted_duplicates(13, 60, {{1, 5}, {2, 3}});
    DupScanConfig log_cfg;
    log_cfg.compare_on = CompareOn::Log;
    EXPECT_EQ(find_duplicate_columns(fix.matrix, log_cfg).n_distinct, 8u);
    fix.matrix.at(0, 0) = kMissing;
    EXPECT_EQ(find_duplicate_columns(fix.matrix).n_distinct, 8u);
    DupScanConfig strict;
    strict.missing_policy = MissingPolicy::Fail;
    EXPECT_THROW(find_duplicate_columns(fix.matrix, strict), Error);
}

TEST(FindDuplicates, PropertiesOnPlantedFixtures) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto fix = synth::planted_duplicates(seed, 40, {{1, 6}, {2, 3}, {3, 2}, {5, 1}});
        const auto& m = fix.matrix;
        const auto d = find_duplicate_columns(m);
        // n_distinct formula and brute-force agreement.
        std::size_t collapsed = 0;
        std::set<std::string> seen;
        for (const auto& c : d.components) {
            collapsed += c.size() - 1;
            for (const auto& id : c) EXPECT_TRUE(seen.insert(id).second) << "components overlap";
        }
        EXPECT_EQ(d.n_distinct, m.n_samples() - collapsed);
        EXPECT_EQ(d.n_distinct, brute_distinct(m, 0.9999));
        EXPECT_EQ(d.n_distinct, 12u);
        // Column permutation leaves the components unchanged as sets.
        std::vector<std::string> order = m.sample_ids;
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        const auto p = find_duplicate_columns(select_samples(m, order));
        auto as_sets = [](const DupComponents& x) {
            std::set<std::set<std::string>> s;
            for (const auto& c : x.components) s.insert(std::set<std::string>(c.begin(), c.end()));
            return s;
        };
        EXPECT_EQ(as_sets(p), as_sets(d));
    }
}

TEST(ClassifyLabels, Rules) {
    DupComponents d;
    d.components = {{"c32", "c66", "c89", "c117"}, {"a", "b"}, {"u", "v"}};
    const LabelMap labels{{"c32", GroupLabel::Sensitive}, {"c66", GroupLabel::Resistant},
                          {"c89", GroupLabel::Resistant}, {"c117", GroupLabel::Resistant},
                          {"a", GroupLabel::Resistant},   {"b", GroupLabel::Resistant},
                          {"u", GroupLabel::Resistant}};
    const auto r = classify_duplicate_labels(d, labels);
    ASSERT_EQ(r.inconsistent.size(), 1u);
    EXPECT_EQ(r.inconsistent[0].labels.at(GroupLabel::Sensitive), 1u);
    EXPECT_EQ(r.inconsistent[0].labels.at(GroupLabel::Resistant), 3u);
    EXPECT_EQ(r.consistent.size(), 2u);  // {R,R} and {R,Unknown}
}

TEST(RosterDuplicates, Examples) {
    const auto fix = synth::doxorubicin_roster(2);
    const auto r = roster_duplicates(fix.roster);
    EXPECT_EQ(r.n_distinct, 80u);
    EXPECT_EQ(r.duplicated_ids.size(), 15u);
    EXPECT_EQ(r.inconsistent_ids.size(), 6u);

    LabelRoster same{{{"GSM9653", GroupLabel::Resistant, "", {}}, {"GSM9653", GroupLabel::Resistant, "", {}}}};
    const auto s = roster_duplicates(same);
    EXPECT_EQ(s.duplicated_ids, (std::vector<std::string>{"GSM9653"}));
    EXPECT_TRUE(s.inconsistent_ids.empty());

    const auto clean = roster_duplicates(synth::clean_roster(2).roster);
    EXPECT_EQ(clean.n_distinct, 80u);
    EXPECT_TRUE(clean.duplicated_ids.empty());
}

TEST(CrossTabulate, PairedLabelingTable) {
    const auto fix = synth::doxorubicin_roster(3);
    const auto t = cross_tabulate(collapse_roster(fix.roster), collapse_roster(fix.reference));
    EXPECT_EQ(t.row_levels, (std::vector<Call>{Call::Sensitive, Call::Resistant, Call::Both}));
    EXPECT_EQ(t.col_levels, (std::vector<Call>{Call::Sensitive, Call::Intermediate, Call::Resistant}));
    EXPECT_EQ(t.counts, (std::vector<std::vector<std::size_t>>{{13, 0, 0}, {29, 10, 22}, {6, 0, 0}}));
    EXPECT_EQ(t.row_margins, (std::vector<std::size_t>{13, 61, 6}));
    EXPECT_EQ(t.total, 80u);
}

TEST(CrossTabulate, DiagonalAndDisjoint) {
    CallMap a;
    for (int i = 0; i < 10; ++i) a["s" + std::to_string(i)] = i % 2 ? Call::Sensitive : Call::Resistant;
    const auto t = cross_tabulate(a, a);
    EXPECT_EQ(t.counts, (std::vector<std::vector<std::size_t>>{{5, 0}, {0, 5}}));
    EXPECT_THROW(cross_tabulate(a, CallMap{{"zz", Call::Sensitive}}), Error);
}

TEST(Fingerprint, IdenticalAndChanged) {
    synth::Rng rng(14);
    const auto m = synth::random_matrix(rng, 45, 24);
    EXPECT_TRUE(matrices_identical(m, m));
    auto changed = m;
    changed.at(3, 3) += 0.1;
    EXPECT_FALSE(matrices_identical(m, changed));
    auto renamed = synth::rounded(m, 2);
    renamed.sample_ids[0] = "other";
    EXPECT_TRUE(matrices_identical(m, renamed));
    EXPECT_EQ(fingerprint_matrix(m).size(), 64u);
    EXPECT_FALSE(matrices_identical(m, m.transposed()));
}

TEST(CompareLabelings, Examples) {
    const std::vector<LabelingSource> two{{"a", "drug", {{"MCF7", GroupLabel::Sensitive}}},
                                          {"b", "drug", {{"MCF7", GroupLabel::Resistant}}}};
    const auto r = compare_labelings(two);
    EXPECT_TRUE(r.drug_flipped.at("drug"));
    ASSERT_EQ(r.entities.size(), 1u);
    EXPECT_EQ(r.entities[0].entity, "MCF7");
    EXPECT_TRUE(r.entities[0].flipped);

    const auto one = compare_labelings({two[0]});
    EXPECT_FALSE(one.drug_flipped.at("drug"));
    EXPECT_THROW(compare_labelings({}), Error);
}

TEST(CompareLabelings, EveryMultiSourceDrugFlips) {
    const auto sources = synth::multi_source_labelings(5, true);
    EXPECT_EQ(sources.size(), 12u);
    const auto r = compare_labelings(sources);
    for (const auto& [drug, n] : r.sources_per_drug) {
        EXPECT_EQ(r.drug_flipped.at(drug), n > 1) << drug;
    }
    const auto agree = compare_labelings(synth::multi_source_labelings(5, false));
    for (const auto& [drug, flipped] : agree.drug_flipped) EXPECT_FALSE(flipped) << drug;
}

TEST(SignatureDirections, Conflicts) {
    const auto c = check_signature_directions(synth::direction_signature(true));
    EXPECT_EQ(c, (std::vector<std::string>{"RRAGD", "SFN", "SLC43A3"}));
    EXPECT_TRUE(check_signature_directions(synth::direction_signature(false)).empty());
    SignatureList bare;
    bare.feature_ids = {"a", "b"};
    EXPECT_TRUE(check_signature_directions(bare).empty());
}
