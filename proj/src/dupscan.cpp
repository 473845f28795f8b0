#include "arrayaudit/dupscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_map>

#include "arrayaudit/digest.hpp"
#include "arrayaudit/stats.hpp"

namespace arrayaudit::dupscan {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Keeps the smaller index as root so roots are the first member.
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (b < a) {
            std::swap(a, b);
        }
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) != std::isnan(b[i])) {
            return false;
        }
        if (!std::isnan(a[i]) && a[i] != b[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

SampleGraph correlation_components(const LabeledMatrix& m, double threshold, MissingPolicy missing_policy) {
    const std::size_t n = m.n_samples();
    const bool missing = m.has_missing();
    if (missing && missing_policy == MissingPolicy::Fail) {
        throw Error("matrix has missing values and the missing-value policy is 'fail'");
    }

    std::vector<std::vector<double>> cols(n);
    std::vector<std::vector<double>> unit(n);
    std::vector<bool> degenerate(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        cols[c] = m.column(c);
        auto mom = stats::moments(cols[c]);
        if (mom.n < 2 || !(mom.sum_sq > 0)) {
            degenerate[c] = true;
            continue;
        }
        if (!missing) {
            unit[c] = stats::unit_centered(cols[c]);
        }
    }

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (degenerate[i]) {
            continue;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (degenerate[j]) {
                continue;
            }
            const double r = missing ? stats::pearson(cols[i], cols[j]) : stats::dot(unit[i], unit[j]);
            if (r >= threshold || bitwise_equal(cols[i], cols[j])) {
                sets.unite(i, j);
            }
        }
    }

    SampleGraph out;
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t c = 0; c < n; ++c) {
        groups[sets.find(c)].push_back(c);
        if (degenerate[c]) {
            out.degenerate.push_back(m.sample_ids[c]);
        }
    }
    for (const auto& g : groups) {
        if (g.empty()) {
            continue;
        }
        Component comp;
        for (auto c : g) {
            comp.push_back(m.sample_ids[c]);
        }
        out.components.push_back(std::move(comp));
    }
    return out;
}

DupComponents find_duplicate_columns(const LabeledMatrix& m, const DupScanConfig& cfg) {
    if (!(cfg.corr_threshold > 0 && cfg.corr_threshold <= 1)) {
        throw Error("duplicate threshold must lie in (0, 1]");
    }
    if (m.n_samples() < 2 || m.n_features() < 3) {
        throw Error("duplicate scan needs at least 2 samples and 3 features");
    }

    LabeledMatrix compared;
    const LabeledMatrix* source = &m;
    if (cfg.compare_on == CompareOn::Log) {
        compared = m;
        for (std::size_t i = 0; i < compared.values.size(); ++i) {
            auto& v = compared.values[i];
            if (is_missing(v)) {
                continue;
            }
            if (!(v > 0)) {
                throw DegenerateDataError(m.feature_ids[i / m.n_samples()] + "/" + m.sample_ids[i % m.n_samples()],
                                          "log comparison needs positive values");
            }
            v = std::log(v);
        }
        source = &compared;
    }

    auto graph = correlation_components(*source, cfg.corr_threshold, cfg.missing_policy);

    DupComponents out;
    out.degenerate = std::move(graph.degenerate);
    std::size_t in_components = 0;
    for (auto& comp : graph.components) {
        if (comp.size() >= 2) {
            ++out.multiplicity_histogram[comp.size()];
            in_components += comp.size();
            out.components.push_back(std::move(comp));
        }
    }
    const std::size_t singletons = m.n_samples() - in_components;
    if (singletons) {
        out.multiplicity_histogram[1] = singletons;
    }
    out.n_distinct = singletons + out.components.size();
    return out;
}

LabelConsistency classify_duplicate_labels(const DupComponents& comps, const LabelMap& labels) {
    LabelConsistency out;
    for (const auto& comp : comps.components) {
        LabeledComponent lc{comp, {}};
        std::set<GroupLabel> distinct;
        for (const auto& id : comp) {
            auto it = labels.find(id);
            auto label = it == labels.end() ? GroupLabel::Unknown : it->second;
            ++lc.labels[label];
            if (label != GroupLabel::Unknown) {
                distinct.insert(label);
            }
        }
        (distinct.size() >= 2 ? out.inconsistent : out.consistent).push_back(std::move(lc));
    }
    return out;
}

RosterDuplicates roster_duplicates(const LabelRoster& roster) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::pair<std::size_t, std::set<GroupLabel>>> seen;
    for (const auto& e : roster.entries) {
        auto [it, inserted] = seen.try_emplace(e.sample_id);
        if (inserted) {
            order.push_back(e.sample_id);
        }
        ++it->second.first;
        if (e.label != GroupLabel::Unknown) {
            it->second.second.insert(e.label);
        }
    }

    RosterDuplicates out;
    out.n_distinct = order.size();
    for (const auto& id : order) {
        const auto& [count, labels] = seen.at(id);
        if (count >= 2) {
            out.duplicated_ids.push_back(id);
            if (labels.size() >= 2) {
                out.inconsistent_ids.push_back(id);
            }
        }
    }
    return out;
}

std::string_view to_string(Call call) {
    switch (call) {
        case Call::Sensitive: return "Sensitive";
        case Call::Intermediate: return "Intermediate";
        case Call::Resistant: return "Resistant";
        case Call::Both: return "Both";
        case Call::Unused: return "Unused";
        case Call::Unknown: return "Unknown";
    }
    return "Unknown";
}

namespace {

Call to_call(GroupLabel label) {
    switch (label) {
        case GroupLabel::Sensitive: return Call::Sensitive;
        case GroupLabel::Resistant: return Call::Resistant;
        case GroupLabel::Intermediate: return Call::Intermediate;
        case GroupLabel::Unused: return Call::Unused;
        case GroupLabel::Unknown: return Call::Unknown;
    }
    return Call::Unknown;
}

}  // namespace

CallMap collapse_roster(const LabelRoster& roster) {
    std::map<std::string, std::vector<GroupLabel>> by_id;
    for (const auto& e : roster.entries) {
        by_id[e.sample_id].push_back(e.label);
    }
    CallMap out;
    for (const auto& [id, labels] : by_id) {
        const bool s = std::count(labels.begin(), labels.end(), GroupLabel::Sensitive) > 0;
        const bool r = std::count(labels.begin(), labels.end(), GroupLabel::Resistant) > 0;
        if (s && r) {
            out[id] = Call::Both;
            continue;
        }
        auto first = std::find_if(labels.begin(), labels.end(), [](GroupLabel l) { return l != GroupLabel::Unknown; });
        out[id] = first == labels.end() ? Call::Unknown : to_call(*first);
    }
    return out;
}

ContingencyTable cross_tabulate(const CallMap& a, const CallMap& b) {
    ContingencyTable t;
    std::set<Call> rows, cols;
    std::vector<std::pair<Call, Call>> pairs;
    for (const auto& [id, call] : a) {
        auto it = b.find(id);
        if (it == b.end()) {
            t.only_in_a.push_back(id);
            continue;
        }
        rows.insert(call);
        cols.insert(it->second);
        pairs.emplace_back(call, it->second);
    }
    for (const auto& [id, call] : b) {
        if (!a.count(id)) {
            t.only_in_b.push_back(id);
        }
    }
    if (pairs.empty()) {
        throw Error("cross_tabulate: the two labelings share no samples");
    }

    t.row_levels.assign(rows.begin(), rows.end());
    t.col_levels.assign(cols.begin(), cols.end());
    t.counts.assign(t.row_levels.size(), std::vector<std::size_t>(t.col_levels.size(), 0));
    t.row_margins.assign(t.row_levels.size(), 0);
    t.col_margins.assign(t.col_levels.size(), 0);
    auto index_of = [](const std::vector<Call>& levels, Call c) {
        return static_cast<std::size_t>(std::find(levels.begin(), levels.end(), c) - levels.begin());
    };
    for (auto [ra, cb] : pairs) {
        auto i = index_of(t.row_levels, ra), j = index_of(t.col_levels, cb);
        ++t.counts[i][j];
        ++t.row_margins[i];
        ++t.col_margins[j];
        ++t.total;
    }
    return t;
}

std::string fingerprint_matrix(const LabeledMatrix& m, int digits) {
    if (digits < 0 || digits > 15) {
        throw Error("fingerprint digits must be between 0 and 15");
    }
    std::string canonical = "arrayaudit-matrix-v1;rows=" + std::to_string(m.n_features()) +
                            ";cols=" + std::to_string(m.n_samples()) + ";digits=" + std::to_string(digits) + "\n";
    char buf[64];
    const double scale = std::pow(10.0, digits);
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        for (std::size_t c = 0; c < m.n_samples(); ++c) {
            double v = m.at(r, c);
            if (is_missing(v)) {
                canonical += "NA";
            } else {
                v = std::round(v * scale) / scale;
                if (v == 0) {
                    v = 0;  // folds -0
                }
                std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
                canonical += buf;
            }
            canonical += c + 1 == m.n_samples() ? '\n' : '\t';
        }
    }
    return sha256_hex(canonical);
}

bool matrices_identical(const LabeledMatrix& a, const LabeledMatrix& b, int digits) {
    return a.n_features() == b.n_features() && a.n_samples() == b.n_samples() &&
           fingerprint_matrix(a, digits) == fingerprint_matrix(b, digits);
}

FlipReport compare_labelings(const std::vector<LabelingSource>& sources) {
    if (sources.empty()) {
        throw Error("compare_labelings needs at least one source");
    }
    FlipReport out;
    std::map<std::pair<std::string, std::string>, EntityHistory> histories;
    for (const auto& src : sources) {
        ++out.sources_per_drug[src.drug_id];
        out.drug_flipped.try_emplace(src.drug_id, false);
        for (const auto& [entity, label] : src.labels) {
            auto& h = histories[{src.drug_id, entity}];
            h.drug_id = src.drug_id;
            h.entity = entity;
            h.labels.emplace_back(src.source_id, label);
        }
    }
    for (auto& [key, h] : histories) {
        bool s = false, r = false;
        for (const auto& [source, label] : h.labels) {
            s = s || label == GroupLabel::Sensitive;
            r = r || label == GroupLabel::Resistant;
        }
        h.flipped = s && r;
        if (h.flipped) {
            out.drug_flipped[h.drug_id] = true;
        }
        out.entities.push_back(std::move(h));
    }
    return out;
}

std::vector<std::string> check_signature_directions(const SignatureList& sig) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::set<Direction>> seen;
    for (const auto& [id, dir] : sig.directions) {
        auto [it, inserted] = seen.try_emplace(id);
        if (inserted) {
            order.push_back(id);
        }
        it->second.insert(dir);
    }
    std::vector<std::string> out;
    for (const auto& id : order) {
        if (seen.at(id).size() >= 2) {
            out.push_back(id);
        }
    }
    return out;
}

}  // namespace arrayaudit::dupscan
