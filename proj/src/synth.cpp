#include "arrayaudit/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_set>

#include "arrayaudit/signature.hpp"

namespace arrayaudit::synth {

namespace {

std::string numbered(const std::string& prefix, std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, i);
    return prefix + buf;
}

int width_for(std::size_t n) {
    return std::max(2, static_cast<int>(std::to_string(n).size()));
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    // Fisher-Yates with our own index draw, so the order does not depend on
    // the library's std::shuffle.
    for (std::size_t i = v.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(v[i - 1], v[pick(rng)]);
    }
}

std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    shuffle(all, rng);
    all.resize(k);
    return all;
}

std::chrono::sys_seconds day(int y, unsigned m, unsigned d) {
    return std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

}  // namespace

const std::vector<std::string>& panel_lines() {
    static const std::vector<std::string> lines{
        "BT-549",     "HS 578T",    "MCF7",       "MDA-MB-231", "MDA-MB-435", "NCI/ADR-RES", "T-47D",
        "SF-268",     "SF-295",     "SF-539",     "SNB-19",     "SNB-75",     "U251",        "COLO 205",
        "HCC-2998",   "HCT-116",    "HCT-15",     "HT29",       "KM12",       "SW-620",      "CCRF-CEM",
        "HL-60(TB)",  "K-562",      "MOLT-4",     "RPMI-8226",  "SR",         "LOX IMVI",    "MALME-3M",
        "M14",        "SK-MEL-2",   "SK-MEL-28",  "SK-MEL-5",   "UACC-257",   "UACC-62",     "A549/ATCC",
        "EKVX",       "HOP-62",     "HOP-92",     "NCI-H226",   "NCI-H23",    "NCI-H322M",   "NCI-H460",
        "NCI-H522",   "IGROV1",     "OVCAR-3",    "OVCAR-4",    "OVCAR-5",    "OVCAR-8",     "SK-OV-3",
        "786-0",      "A498",       "ACHN",       "CAKI-1",     "RXF 393",    "SN12C",       "TK-10",
        "UO-31",      "PC-3",       "DU-145",     "MDA-N",
    };
    return lines;
}

LabeledMatrix random_matrix(Rng& rng, std::size_t n_features, std::size_t n_samples, double mu, double sigma,
                            const std::string& feature_prefix, const std::string& sample_prefix) {
    LabeledMatrix m;
    const int fw = width_for(n_features), sw = width_for(n_samples);
    for (std::size_t r = 0; r < n_features; ++r) {
        m.feature_ids.push_back(numbered(feature_prefix, r + 1, fw));
    }
    for (std::size_t c = 0; c < n_samples; ++c) {
        m.sample_ids.push_back(numbered(sample_prefix, c + 1, sw));
    }
    std::normal_distribution<double> z(mu, sigma);
    m.values.resize(n_features * n_samples);
    for (auto& v : m.values) {
        v = std::exp(z(rng));
    }
    return m;
}

namespace {

// Builds columns from the distinct-sample order `sources` (column -> source index).
LabeledMatrix copy_columns(Rng& rng, std::size_t n_features, const std::vector<std::size_t>& sources,
                           std::size_t n_distinct, double copy_noise) {
    auto base = random_matrix(rng, n_features, n_distinct);
    LabeledMatrix m;
    m.feature_ids = base.feature_ids;
    const int sw = width_for(sources.size());
    for (std::size_t c = 0; c < sources.size(); ++c) {
        m.sample_ids.push_back(numbered("T", c + 1, std::max(sw, 3)));
    }
    m.values.resize(n_features * sources.size());
    std::normal_distribution<double> noise(0.0, copy_noise);
    std::vector<bool> used(n_distinct, false);
    for (std::size_t c = 0; c < sources.size(); ++c) {
        const auto s = sources[c];
        const bool first = !used[s];
        used[s] = true;
        for (std::size_t r = 0; r < n_features; ++r) {
            const double v = base.at(r, s);
            m.at(r, c) = first ? v : v * (1.0 + noise(rng));
        }
    }
    return m;
}

}  // namespace

DuplicateFixture planted_duplicates(std::uint64_t seed, std::size_t n_features,
                                    const std::map<std::size_t, std::size_t>& multiplicities, double copy_noise) {
    Rng rng(seed);
    std::vector<std::size_t> sources;
    std::size_t n_distinct = 0;
    for (const auto& [copies, count] : multiplicities) {
        for (std::size_t i = 0; i < count; ++i, ++n_distinct) {
            sources.insert(sources.end(), copies, n_distinct);
        }
    }
    shuffle(sources, rng);
    DuplicateFixture out;
    out.matrix = copy_columns(rng, n_features, sources, n_distinct, copy_noise);
    std::map<std::size_t, std::vector<std::size_t>> by_source;
    for (std::size_t c = 0; c < sources.size(); ++c) {
        by_source[sources[c]].push_back(c);
    }
    for (auto& [s, cols] : by_source) {
        out.groups.push_back(cols);
    }
    std::sort(out.groups.begin(), out.groups.end());
    return out;
}

DuplicateFixture doxorubicin_test_set(std::uint64_t seed, std::size_t n_features) {
    Rng rng(seed);
    using L = GroupLabel;
    const auto S = L::Sensitive, R = L::Resistant;

    // Groups with their member labels. The first one is pinned to columns 32, 66, 89, 117.
    std::vector<std::vector<L>> groups;
    groups.push_back({S, R, R, R});
    for (int i = 0; i < 3; ++i) groups.push_back({R, R, R, R});
    groups.push_back({S, S, R});
    for (int i = 0; i < 5; ++i) groups.push_back({R, R, R});
    groups.push_back({S, R});
    for (int i = 0; i < 3; ++i) groups.push_back({S, S});
    for (int i = 0; i < 10; ++i) groups.push_back({R, R});
    for (int i = 0; i < 13; ++i) groups.push_back({S});
    for (int i = 0; i < 47; ++i) groups.push_back({R});

    const std::vector<std::size_t> pinned{31, 65, 88, 116};
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < 122; ++c) {
        if (std::find(pinned.begin(), pinned.end(), c) == pinned.end()) {
            free_cols.push_back(c);
        }
    }
    shuffle(free_cols, rng);

    std::vector<std::size_t> sources(122);
    std::vector<L> labels(122);
    std::vector<std::vector<std::size_t>> planted;
    std::size_t next = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<std::size_t> cols;
        if (g == 0) {
            cols = pinned;
        } else {
            for (std::size_t i = 0; i < groups[g].size(); ++i) {
                cols.push_back(free_cols[next++]);
            }
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
            sources[cols[i]] = g;
            labels[cols[i]] = groups[g][i];
        }
        std::sort(cols.begin(), cols.end());
        planted.push_back(cols);
    }
    std::sort(planted.begin(), planted.end());

    DuplicateFixture out;
    out.matrix = copy_columns(rng, n_features, sources, groups.size(), 1e-5);
    for (std::size_t c = 0; c < 122; ++c) {
        out.matrix.labels[out.matrix.sample_ids[c]] = labels[c];
    }
    out.groups = std::move(planted);
    return out;
}

LabeledMatrix distinct_test_set(std::uint64_t seed, std::size_t n_features) {
    Rng rng(seed);
    auto m = random_matrix(rng, n_features, 122, 6.0, 1.0, "g", "T");
    std::vector<std::size_t> idx = sample_indices(rng, 122, 23);
    std::set<std::size_t> sens(idx.begin(), idx.end());
    for (std::size_t c = 0; c < 122; ++c) {
        m.sample_ids[c] = numbered("T", c + 1, 3);
    }
    for (std::size_t c = 0; c < 122; ++c) {
        m.labels[m.sample_ids[c]] = sens.count(c) ? GroupLabel::Sensitive : GroupLabel::Resistant;
    }
    return m;
}

namespace {

struct RosterPlan {
    std::vector<RosterEntry> head;
    std::vector<RosterEntry> tail;
    std::vector<std::string> ids;  // distinct ids, first-appearance order before shuffling
    std::map<std::string, dupscan::Call> calls;
};

RosterPlan roster_plan(Rng& rng) {
    using L = GroupLabel;
    const std::string src = "roster_a";
    RosterPlan plan;
    const std::vector<std::pair<std::string, L>> head{
        {"GSM44303", L::Resistant}, {"GSM44304", L::Resistant}, {"GSM9653", L::Resistant},
        {"GSM9653", L::Resistant},  {"GSM9654", L::Resistant},  {"GSM9655", L::Resistant},
        {"GSM9656", L::Resistant},  {"GSM9657", L::Resistant},  {"GSM9658", L::Sensitive},
        {"GSM9658", L::Sensitive},  {"GSM9694", L::Resistant},  {"GSM9695", L::Resistant},
        {"GSM9696", L::Resistant},  {"GSM9698", L::Resistant},  {"GSM9699", L::Sensitive},
        {"GSM9701", L::Resistant},  {"GSM9708", L::Resistant},  {"GSM9708", L::Sensitive},
        {"GSM9709", L::Resistant},  {"GSM9711", L::Resistant},
    };
    for (const auto& [id, label] : head) {
        plan.head.push_back({id, label, src, std::nullopt});
        if (std::find(plan.ids.begin(), plan.ids.end(), id) == plan.ids.end()) {
            plan.ids.push_back(id);
        }
    }

    // 11 Sensitive-only, 47 Resistant-only and 5 conflicting ids follow; 2 + 5
    // of the single-label ones are listed twice.
    std::size_t next = 9712;
    auto fresh = [&] { return "GSM" + std::to_string(next++); };
    for (int i = 0; i < 11; ++i) {
        auto id = fresh();
        plan.ids.push_back(id);
        plan.tail.push_back({id, L::Sensitive, src, std::nullopt});
        if (i < 2) plan.tail.push_back({id, L::Sensitive, src, std::nullopt});
    }
    for (int i = 0; i < 47; ++i) {
        auto id = fresh();
        plan.ids.push_back(id);
        plan.tail.push_back({id, L::Resistant, src, std::nullopt});
        if (i < 5) plan.tail.push_back({id, L::Resistant, src, std::nullopt});
    }
    for (int i = 0; i < 5; ++i) {
        auto id = fresh();
        plan.ids.push_back(id);
        plan.tail.push_back({id, L::Resistant, src, std::nullopt});
        plan.tail.push_back({id, L::Sensitive, src, std::nullopt});
    }
    shuffle(plan.tail, rng);

    LabelRoster all;
    all.entries = plan.head;
    all.entries.insert(all.entries.end(), plan.tail.begin(), plan.tail.end());
    plan.calls = dupscan::collapse_roster(all);
    return plan;
}

LabelRoster reference_calls(Rng& rng, const RosterPlan& plan) {
    using C = dupscan::Call;
    std::vector<std::string> resistant;
    for (const auto& id : plan.ids) {
        if (plan.calls.at(id) == C::Resistant) {
            resistant.push_back(id);
        }
    }
    shuffle(resistant, rng);
    std::map<std::string, GroupLabel> ref;
    for (std::size_t i = 0; i < resistant.size(); ++i) {
        ref[resistant[i]] = i < 29 ? GroupLabel::Sensitive : i < 39 ? GroupLabel::Intermediate : GroupLabel::Resistant;
    }
    LabelRoster out;
    for (const auto& id : plan.ids) {
        const auto it = ref.find(id);
        out.entries.push_back({id, it == ref.end() ? GroupLabel::Sensitive : it->second, "reference", std::nullopt});
    }
    return out;
}

}  // namespace

RosterFixture doxorubicin_roster(std::uint64_t seed) {
    Rng rng(seed);
    auto plan = roster_plan(rng);
    RosterFixture out;
    out.roster.entries = plan.head;
    out.roster.entries.insert(out.roster.entries.end(), plan.tail.begin(), plan.tail.end());
    out.reference = reference_calls(rng, plan);
    return out;
}

RosterFixture clean_roster(std::uint64_t seed) {
    Rng rng(seed);
    auto plan = roster_plan(rng);
    RosterFixture out;
    out.reference = reference_calls(rng, plan);
    for (const auto& id : plan.ids) {
        const auto call = plan.calls.at(id);
        out.roster.entries.push_back(
            {id, call == dupscan::Call::Resistant ? GroupLabel::Resistant : GroupLabel::Sensitive, "roster_a",
             std::nullopt});
    }
    return out;
}

LabeledMatrix training_panel(std::uint64_t seed, bool reversed, std::size_t n_features) {
    static const std::vector<std::string> first{"SF-539",   "SNB-75",   "MDA-MB-435", "NCI-H23",  "M14",
                                                "MALME-3M", "SK-MEL-2", "SK-MEL-28",  "SK-MEL-5", "UACC-62"};
    static const std::vector<std::string> second{"NCI/ADR-RES", "HCT-15",  "HT29",    "EKVX",
                                                 "NCI-H322M",   "IGROV1",  "OVCAR-3", "OVCAR-4",
                                                 "OVCAR-5",     "OVCAR-8", "SK-OV-3", "CAKI-1"};
    Rng rng(seed);
    auto m = random_matrix(rng, n_features, first.size() + second.size(), 6.0, 1.0, "g", "line");
    m.sample_ids = first;
    m.sample_ids.insert(m.sample_ids.end(), second.begin(), second.end());
    for (std::size_t c = 0; c < m.n_samples(); ++c) {
        const bool in_first = c < first.size();
        m.labels[m.sample_ids[c]] = (in_first == reversed) ? GroupLabel::Resistant : GroupLabel::Sensitive;
    }
    return m;
}

namespace {

std::string probe_id(std::size_t number) {
    return std::to_string(number) + (number % 5 == 0 ? "_s_at" : "_at");
}

// Draws `k` positions in [lo, hi) at least `spacing` apart from each other and from `avoid`.
std::vector<std::size_t> spaced_positions(Rng& rng, std::size_t lo, std::size_t hi, std::size_t k,
                                          std::size_t spacing, const std::vector<std::size_t>& avoid) {
    std::vector<std::size_t> taken(avoid);
    std::vector<std::size_t> out;
    std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
    while (out.size() < k) {
        const auto p = pick(rng);
        const bool clash = std::any_of(taken.begin(), taken.end(), [&](std::size_t t) {
            return (p > t ? p - t : t - p) < spacing;
        });
        if (!clash) {
            taken.push_back(p);
            out.push_back(p);
        }
    }
    return out;
}

SignatureList list_of(const std::vector<std::string>& ids) {
    SignatureList s;
    s.feature_ids = ids;
    return s;
}

}  // namespace

OffsetFixture planted_offset(std::uint64_t seed, int shift, std::size_t n_annotation, std::size_t n_signature,
                             double contamination) {
    Rng rng(seed);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n_annotation; ++i) {
        ids.push_back(numbered("P", i, 5));
    }
    OffsetFixture out;
    out.annotation = AnnotationIndex("synthetic", ids);
    out.shift = shift;
    const std::size_t margin = 8;
    const auto pos = sample_indices(rng, n_annotation - 2 * margin, n_signature);
    std::vector<std::string> generated, reported;
    for (auto p : pos) {
        const auto g = p + margin;
        generated.push_back(ids[g]);
        reported.push_back(ids[static_cast<std::size_t>(static_cast<long>(g) - shift)]);
    }
    const auto n_foreign = static_cast<std::size_t>(std::lround(contamination * static_cast<double>(n_signature)));
    for (std::size_t i : sample_indices(rng, n_signature, n_foreign)) {
        reported[i] = numbered("FOREIGN", i, 3);
    }
    for (const auto& r : reported) {
        if (r.rfind("FOREIGN", 0) == 0) {
            out.outliers.push_back(r);
            out.absent.push_back(r);
        }
    }
    out.reported = list_of(reported);
    out.generated = list_of(generated);
    return out;
}

OffsetFixture cisplatin_signature(std::uint64_t seed, bool offset) {
    Rng rng(seed);
    constexpr std::size_t first = 200000, last = 222384;
    std::vector<std::string> ids;
    for (std::size_t n = first; n <= last; ++n) {
        ids.push_back(probe_id(n));
    }
    OffsetFixture out;
    out.annotation = AnnotationIndex("HG-U133A", ids);

    const std::vector<std::string> on_platform_outliers{"203719_at", "210158_at"};
    const std::vector<std::string> off_platform{"228131_at", "231971_at"};
    std::vector<std::size_t> avoid;
    for (const auto& id : on_platform_outliers) {
        avoid.push_back(*out.annotation.position(id));
    }
    const auto pos = spaced_positions(rng, 10, ids.size() - 10, 45, 8, avoid);

    std::vector<std::string> generated, reported;
    for (auto p : pos) {
        generated.push_back(ids[p]);
    }
    if (!offset) {
        out.reported = list_of(generated);
        out.generated = list_of(generated);
        return out;
    }
    out.shift = 1;
    for (std::size_t i = 0; i < 41; ++i) {
        reported.push_back(ids[pos[i] - 1]);
    }
    reported.insert(reported.end(), on_platform_outliers.begin(), on_platform_outliers.end());
    reported.insert(reported.end(), off_platform.begin(), off_platform.end());
    shuffle(reported, rng);
    for (const auto& r : reported) {
        if (std::find(on_platform_outliers.begin(), on_platform_outliers.end(), r) != on_platform_outliers.end() ||
            std::find(off_platform.begin(), off_platform.end(), r) != off_platform.end()) {
            out.outliers.push_back(r);
        }
        if (std::find(off_platform.begin(), off_platform.end(), r) != off_platform.end()) {
            out.absent.push_back(r);
        }
    }
    out.reported = list_of(reported);
    out.generated = list_of(generated);
    return out;
}

LabeledMatrix expression_for(std::uint64_t seed, const std::vector<std::string>& features, std::size_t n_samples,
                             const std::string& sample_prefix) {
    Rng rng(seed);
    auto m = random_matrix(rng, features.size(), n_samples, 6.0, 1.0, "g", sample_prefix);
    m.feature_ids = features;
    return m;
}

LabeledMatrix rounded(const LabeledMatrix& m, int digits) {
    auto out = m;
    const double scale = std::pow(10.0, digits);
    for (auto& v : out.values) {
        if (!is_missing(v)) {
            v = std::round(v * scale) / scale;
        }
    }
    return out;
}

SignatureList direction_signature(bool conflicting) {
    const std::vector<std::string> genes{"RRAGD", "SFN",  "SLC43A3", "MGMT",  "EGFR",   "CD44", "VIM",
                                         "TOP2A", "MKI67", "CDK4",   "MDM2",  "PTEN",   "SOX2", "OLIG2",
                                         "GFAP",  "NES",  "PDGFRA",  "IDH1",  "ATRX",   "TP53"};
    SignatureList s;
    s.feature_ids = genes;
    for (std::size_t i = 0; i < genes.size(); ++i) {
        s.directions.emplace_back(genes[i], i % 2 == 0 ? Direction::UpInResistant : Direction::UpInSensitive);
    }
    if (conflicting) {
        for (std::size_t i = 0; i < 3; ++i) {
            s.directions.emplace_back(genes[i], i % 2 == 0 ? Direction::UpInSensitive : Direction::UpInResistant);
        }
    }
    return s;
}

PanelFixture planted_panel(std::uint64_t seed, std::size_t n_lines, double effect, std::size_t n_genes,
                           std::size_t n_core, std::size_t k) {
    if (n_lines > panel_lines().size() || n_lines < 6) {
        throw Error("planted_panel supports 6 to 60 lines");
    }
    Rng rng(seed);
    PanelFixture out;
    out.k = k;
    out.planted.assign(n_lines, groupsearch::LineState::Unused);
    auto order = sample_indices(rng, n_lines, n_lines);
    const std::size_t third = n_lines / 3;
    for (std::size_t i = 0; i < 2 * third; ++i) {
        out.planted[order[i]] = i < third ? groupsearch::LineState::Sensitive : groupsearch::LineState::Resistant;
    }

    auto& m = out.panel;
    m.sample_ids.assign(panel_lines().begin(), panel_lines().begin() + static_cast<long>(n_lines));
    const int gw = width_for(n_genes);
    for (std::size_t g = 0; g < n_genes; ++g) {
        m.feature_ids.push_back(numbered("gene", g + 1, gw));
    }
    const auto core = sample_indices(rng, n_genes, n_core);
    std::vector<double> shift(n_genes, 0.0);
    std::bernoulli_distribution coin(0.5);
    for (auto g : core) {
        shift[g] = coin(rng) ? effect / 2 : -effect / 2;
    }
    std::normal_distribution<double> z(0.0, 1.0);
    m.values.resize(n_genes * n_lines);
    for (std::size_t g = 0; g < n_genes; ++g) {
        for (std::size_t c = 0; c < n_lines; ++c) {
            const double sign = out.planted[c] == groupsearch::LineState::Sensitive   ? 1.0
                                : out.planted[c] == groupsearch::LineState::Resistant ? -1.0
                                                                                      : 0.0;
            m.at(g, c) = 8.0 + sign * shift[g] + z(rng);
        }
    }
    auto training = m;
    training.labels = groupsearch::assignment_to_labels(m, out.planted);
    std::erase_if(training.labels, [](const auto& kv) { return kv.second == GroupLabel::Unused; });
    std::vector<std::string> used;
    for (std::size_t c = 0; c < n_lines; ++c) {
        if (out.planted[c] != groupsearch::LineState::Unused) {
            used.push_back(m.sample_ids[c]);
        }
    }
    auto sub = select_samples(training, used);
    out.target = signature::select_top_genes(sub, k);
    return out;
}

std::vector<SampleMeta> fec_tet_meta(std::uint64_t seed, bool confounded) {
    Rng rng(seed);
    std::uniform_int_distribution<int> step(0, 2), hour(8, 17);
    std::bernoulli_distribution coin(0.5);
    std::vector<SampleMeta> out;
    struct Block {
        std::chrono::sys_seconds start;
        std::size_t n;
        std::string arm;
        std::string scanner;
    };
    const std::vector<Block> blocks{{day(2004, 2, 2), 40, "FEC", "scanner_A"},
                                    {day(2004, 8, 2), 32, "FEC", "scanner_A"},
                                    {day(2005, 5, 2), 28, "TET", "scanner_B"}};
    std::size_t id = 0;
    for (const auto& b : blocks) {
        auto t = b.start;
        for (std::size_t i = 0; i < b.n; ++i) {
            t += std::chrono::days{step(rng)};
            SampleMeta m;
            m.sample_id = numbered("ARR", ++id, 3);
            m.run_timestamp = t + std::chrono::hours{hour(rng)};
            m.scanner_id = b.scanner;
            m.treatment_arm = confounded ? b.arm : (coin(rng) ? "FEC" : "TET");
            m.included = true;
            out.push_back(std::move(m));
        }
    }
    // Arrays that failed QC; they carry an arm but are not part of the analysis.
    for (std::size_t i : {std::size_t{5}, std::size_t{50}, std::size_t{90}}) {
        out[i].included = false;
    }
    if (!confounded) {
        // Guarantee both arms in every block.
        out[0].treatment_arm = "FEC";
        out[1].treatment_arm = "TET";
        out[40].treatment_arm = "FEC";
        out[41].treatment_arm = "TET";
        out[72].treatment_arm = "FEC";
        out[73].treatment_arm = "TET";
    }
    return out;
}

std::vector<SampleMeta> balanced_meta(std::uint64_t seed, std::size_t n, std::size_t n_batches) {
    Rng rng(seed);
    std::uniform_int_distribution<int> step(0, 2), hour(8, 17);
    std::bernoulli_distribution coin(0.5);
    std::vector<SampleMeta> out;
    std::size_t id = 0;
    for (std::size_t b = 0; b < n_batches; ++b) {
        const std::size_t size = n / n_batches + (b < n % n_batches ? 1 : 0);
        std::vector<std::string> arms;
        for (std::size_t i = 0; i < size; ++i) {
            arms.push_back(i % 2 == 0 ? "A" : "B");
        }
        shuffle(arms, rng);
        auto t = day(2010, 1, 4) + std::chrono::days{90 * static_cast<int>(b)};
        for (std::size_t i = 0; i < size; ++i) {
            t += std::chrono::hours{6 * step(rng)};
            SampleMeta m;
            m.sample_id = numbered("S", ++id, 3);
            m.run_timestamp = t + std::chrono::hours{hour(rng)};
            m.scanner_id = coin(rng) ? "scanner_A" : "scanner_B";
            m.treatment_arm = arms[i];
            out.push_back(std::move(m));
        }
    }
    return out;
}

LabeledMatrix block_matrix(std::uint64_t seed, const std::vector<std::size_t>& block_sizes, std::size_t n_features) {
    Rng rng(seed);
    const std::size_t n = std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
    auto m = random_matrix(rng, n_features, n, 0.0, 1.0, "g", "s");
    std::normal_distribution<double> z(0.0, 1.0), e(0.0, 0.23);
    std::size_t c0 = 0;
    for (auto size : block_sizes) {
        std::vector<double> latent(n_features);
        for (auto& v : latent) {
            v = z(rng);
        }
        for (std::size_t c = c0; c < c0 + size; ++c) {
            for (std::size_t r = 0; r < n_features; ++r) {
                m.at(r, c) = 8.0 + latent[r] + e(rng);
            }
        }
        c0 += size;
    }
    return m;
}

DoseFixture pemetrexed_dose(std::uint64_t seed, bool reversed) {
    Rng rng(seed);
    DoseFixture out;
    out.drug = "pemetrexed";
    const auto& lines = panel_lines();
    auto order = sample_indices(rng, lines.size(), lines.size());
    std::normal_distribution<double> potent(7.0, 0.3), weak(5.0, 0.3);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& line = lines[order[i]];
        bool high;
        if (i < 10) {
            high = !reversed;
            out.labels.entries.push_back({line, GroupLabel::Sensitive, "pemetrexed_groups", std::nullopt});
        } else if (i < 18) {
            high = reversed;
            out.labels.entries.push_back({line, GroupLabel::Resistant, "pemetrexed_groups", std::nullopt});
        } else {
            high = coin(rng);
        }
        out.records.push_back({line, out.drug, Measure::GI50, high ? potent(rng) : weak(rng)});
    }
    std::sort(out.records.begin(), out.records.end(),
              [](const auto& a, const auto& b) { return a.cell_line < b.cell_line; });
    return out;
}

std::vector<SensitivityRecord> flat_dose(std::uint64_t seed, const std::string& drug) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    std::vector<SensitivityRecord> out;
    for (const auto& line : panel_lines()) {
        out.push_back({line, drug, Measure::GI50, 3.5 + u(rng)});
    }
    return out;
}

std::vector<SensitivityRecord> spread_dose(std::uint64_t seed, const std::string& drug) {
    Rng rng(seed);
    std::normal_distribution<double> z(5.5, 0.8);
    std::vector<SensitivityRecord> out;
    for (const auto& line : panel_lines()) {
        out.push_back({line, drug, Measure::GI50, z(rng)});
    }
    return out;
}

std::vector<dupscan::LabelingSource> multi_source_labelings(std::uint64_t seed, bool flips) {
    Rng rng(seed);
    const std::vector<std::pair<std::string, std::size_t>> drugs{
        {"docetaxel", 3}, {"paclitaxel", 2}, {"doxorubicin", 2}, {"etoposide", 2},
        {"topotecan", 1}, {"fluorouracil", 1}, {"cyclophosphamide", 1}};
    const auto& lines = panel_lines();
    std::vector<dupscan::LabelingSource> out;
    for (const auto& [drug, n_sources] : drugs) {
        // 24 lines with a fixed truth for this drug; each source reports 14 of them.
        const auto pool = sample_indices(rng, lines.size(), 24);
        std::map<std::string, GroupLabel> truth;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            truth[lines[pool[i]]] = i < 12 ? GroupLabel::Sensitive : GroupLabel::Resistant;
        }
        std::vector<std::string> shared;
        for (std::size_t s = 0; s < n_sources; ++s) {
            dupscan::LabelingSource src;
            src.source_id = drug + "_" + std::to_string(s + 1);
            src.drug_id = drug;
            std::vector<std::string> chosen;
            if (s == 0) {
                for (auto i : sample_indices(rng, pool.size(), 14)) {
                    chosen.push_back(lines[pool[i]]);
                }
                shared = chosen;
            } else {
                // Overlap with the first source on at least 6 lines.
                std::vector<std::string> rest;
                for (auto i : pool) {
                    if (std::find(shared.begin(), shared.end(), lines[i]) == shared.end()) rest.push_back(lines[i]);
                }
                shuffle(rest, rng);
                chosen.assign(shared.begin(), shared.begin() + 6);
                chosen.insert(chosen.end(), rest.begin(), rest.begin() + 8);
            }
            for (const auto& line : chosen) {
                src.labels[line] = truth.at(line);
            }
            if (flips && s > 0) {
                // Reverse this source's call on one line it shares with the first source.
                const auto& line = shared[s - 1];
                src.labels[line] = truth.at(line) == GroupLabel::Sensitive ? GroupLabel::Resistant : GroupLabel::Sensitive;
            }
            out.push_back(std::move(src));
        }
    }
    return out;
}

LabelRoster to_roster(const dupscan::LabelingSource& source) {
    LabelRoster out;
    for (const auto& [line, label] : source.labels) {
        out.entries.push_back({line, label, source.source_id, std::nullopt});
    }
    return out;
}

}  // namespace arrayaudit::synth
