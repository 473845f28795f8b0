#include "arrayaudit/integrity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "arrayaudit/stats.hpp"

namespace arrayaudit::integrity {

LabeledValues gather(const std::vector<SensitivityRecord>& records, const LabelMap& labels, const std::string& drug,
                     Measure measure) {
    LabeledValues out;
    for (const auto& rec : records) {
        if (rec.drug_id != drug || rec.measure != measure) {
            continue;
        }
        auto it = labels.find(rec.cell_line);
        if (it == labels.end()) {
            continue;
        }
        if (it->second == GroupLabel::Sensitive) {
            out.sensitive.push_back(rec.value);
        } else if (it->second == GroupLabel::Resistant) {
            out.resistant.push_back(rec.value);
        }
    }
    return out;
}

std::vector<double> gather_all(const std::vector<SensitivityRecord>& records, const std::string& drug,
                               Measure measure) {
    std::vector<double> out;
    for (const auto& rec : records) {
        if (rec.drug_id == drug && rec.measure == measure) {
            out.push_back(rec.value);
        }
    }
    return out;
}

namespace {

struct Scan {
    double threshold;
    std::size_t misfits;
};

// Rule "value >= t => Sensitive", over t = -inf, each midpoint, +inf.
Scan scan_thresholds(const std::vector<double>& sensitive, const std::vector<double>& resistant) {
    std::vector<double> all(sensitive);
    all.insert(all.end(), resistant.begin(), resistant.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    std::vector<double> thresholds{-std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        thresholds.push_back(0.5 * (all[i] + all[i + 1]));
    }
    thresholds.push_back(std::numeric_limits<double>::infinity());

    Scan best{0, std::numeric_limits<std::size_t>::max()};
    for (double t : thresholds) {
        std::size_t misfits = 0;
        for (double v : sensitive) {
            misfits += v < t ? 1 : 0;
        }
        for (double v : resistant) {
            misfits += v >= t ? 1 : 0;
        }
        if (misfits < best.misfits) {
            best = {t, misfits};
        }
    }
    return best;
}

}  // namespace

SeparationResult check_separation(const LabeledValues& values, Orientation orientation) {
    if (values.sensitive.empty() || values.resistant.empty()) {
        throw Error("check_separation needs both Sensitive and Resistant lines");
    }
    auto forward = scan_thresholds(values.sensitive, values.resistant);
    SeparationResult out{forward.threshold, forward.misfits, forward.misfits > 0, false};
    if (orientation == Orientation::Auto) {
        // The reversed rule is the forward rule with the groups swapped.
        auto backward = scan_thresholds(values.resistant, values.sensitive);
        if (backward.misfits < forward.misfits) {
            out = {backward.threshold, backward.misfits, backward.misfits > 0, true};
        }
    }
    return out;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "Consistent";
        case Verdict::Reversed: return "Reversed";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

ReversalResult check_reversal(const LabeledValues& values, double margin) {
    if (values.sensitive.size() < 2 || values.resistant.size() < 2) {
        throw Error("check_reversal needs at least 2 Sensitive and 2 Resistant lines");
    }
    double wins = 0;
    for (double s : values.sensitive) {
        for (double r : values.resistant) {
            wins += s > r ? 1.0 : (s == r ? 0.5 : 0.0);
        }
    }
    ReversalResult out;
    out.auc = wins / static_cast<double>(values.sensitive.size() * values.resistant.size());
    if (out.auc < 0.5 - margin) {
        out.verdict = Verdict::Reversed;
    } else if (out.auc > 0.5 + margin) {
        out.verdict = Verdict::Consistent;
    }
    out.reversed = out.verdict == Verdict::Reversed;
    return out;
}

FlatResult check_flat_response(const std::vector<double>& values, double epsilon) {
    if (values.size() < 5) {
        throw Error("check_flat_response needs at least 5 values");
    }
    FlatResult out;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    out.range = *hi - *lo;
    out.iqr = stats::quantile(values, 0.75) - stats::quantile(values, 0.25);
    out.flat = out.iqr < epsilon;
    return out;
}

std::vector<SentinelResult> sentinel_check(const LabelMap& labels, const std::vector<Sentinel>& sentinels) {
    std::vector<SentinelResult> out;
    for (const auto& s : sentinels) {
        auto it = labels.find(s.sample_id);
        if (it == labels.end()) {
            out.push_back({s.sample_id, s.expected, std::nullopt, Severity::Info,
                           "sentinel '" + s.sample_id + "' is not present"});
            continue;
        }
        if (it->second == s.expected) {
            continue;
        }
        if (it->second == GroupLabel::Unknown) {
            out.push_back({s.sample_id, s.expected, it->second, Severity::Info,
                           "sentinel '" + s.sample_id + "' carries no label"});
            continue;
        }
        std::string msg = "sentinel '" + s.sample_id + "' is labeled " + std::string(to_string(it->second)) +
                          " but is expected to be " + std::string(to_string(s.expected));
        if (!s.reason.empty()) {
            msg += " (" + s.reason + ")";
        }
        out.push_back({s.sample_id, s.expected, it->second, Severity::Critical, std::move(msg)});
    }
    return out;
}

std::vector<int> infer_batches(const std::vector<SampleMeta>& metas, std::chrono::seconds gap) {
    if (metas.empty()) {
        throw Error("infer_batches: no samples");
    }
    std::vector<std::size_t> order(metas.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (metas[a].run_timestamp != metas[b].run_timestamp) {
            return metas[a].run_timestamp < metas[b].run_timestamp;
        }
        return metas[a].sample_id < metas[b].sample_id;
    });

    std::vector<int> batch(metas.size(), 0);
    int current = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && metas[order[i]].run_timestamp - metas[order[i - 1]].run_timestamp > gap) {
            ++current;
        }
        batch[order[i]] = current;
    }
    return batch;
}

std::vector<dupscan::Component> detect_blocks(const LabeledMatrix& m, double corr_threshold) {
    if (m.n_samples() < 2) {
        throw Error("detect_blocks needs at least 2 samples");
    }
    return dupscan::correlation_components(m, corr_threshold).components;
}

ConfoundResult test_confounding(const std::vector<std::string>& batches, const std::vector<std::string>& treatments) {
    if (batches.size() != treatments.size()) {
        throw Error("test_confounding: batch and treatment vectors differ in length");
    }
    std::set<std::string> bset(batches.begin(), batches.end()), tset(treatments.begin(), treatments.end());
    if (bset.size() < 2 || tset.size() < 2) {
        throw Error("test_confounding needs at least 2 batches and 2 treatments");
    }

    ConfoundResult out;
    auto& t = out.table;
    t.row_levels.assign(tset.begin(), tset.end());
    t.col_levels.assign(bset.begin(), bset.end());
    t.counts.assign(t.row_levels.size(), std::vector<std::size_t>(t.col_levels.size(), 0));
    auto idx = [](const std::vector<std::string>& levels, const std::string& v) {
        return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), v) - levels.begin());
    };
    for (std::size_t i = 0; i < batches.size(); ++i) {
        ++t.counts[idx(t.row_levels, treatments[i])][idx(t.col_levels, batches[i])];
    }
    t.total = batches.size();

    const std::size_t nr = t.row_levels.size(), nc = t.col_levels.size();
    std::vector<double> rsum(nr, 0), csum(nc, 0);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            rsum[i] += static_cast<double>(t.counts[i][j]);
            csum[j] += static_cast<double>(t.counts[i][j]);
        }
    }
    const double n = static_cast<double>(t.total);
    double chi2 = 0;
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            const double e = rsum[i] * csum[j] / n;
            const double d = static_cast<double>(t.counts[i][j]) - e;
            chi2 += d * d / e;
        }
    }
    out.chi_square = chi2;
    const double k = static_cast<double>(std::min(nr, nc)) - 1.0;
    out.cramers_v = std::min(1.0, std::sqrt(chi2 / (n * k)));

    // Perfect: no batch holds more than one treatment.
    out.perfect = true;
    for (std::size_t j = 0; j < nc && out.perfect; ++j) {
        std::size_t occupied = 0;
        for (std::size_t i = 0; i < nr; ++i) {
            occupied += t.counts[i][j] > 0 ? 1 : 0;
        }
        out.perfect = occupied <= 1;
    }
    return out;
}

std::string_view to_string(CombinationRule rule) {
    switch (rule) {
        case CombinationRule::SumMinusProduct: return "tfac";
        case CombinationRule::Max: return "tet";
        case CombinationRule::AffineMean: return "fec";
    }
    return "tfac";
}

std::optional<CombinationRule> parse_rule(std::string_view name) {
    for (auto r : {CombinationRule::SumMinusProduct, CombinationRule::Max, CombinationRule::AffineMean}) {
        if (name == to_string(r)) {
            return r;
        }
    }
    return std::nullopt;
}

std::vector<std::string> required_keys(CombinationRule rule) {
    switch (rule) {
        case CombinationRule::SumMinusProduct: return {"T", "F", "A", "C"};
        case CombinationRule::Max: return {"E", "T"};
        case CombinationRule::AffineMean: return {"F", "E", "C"};
    }
    return {};
}

CombinedScore combine_probabilities(const std::map<std::string, double>& inputs, CombinationRule rule) {
    auto get = [&](const std::string& key) {
        auto it = inputs.find(key);
        if (it == inputs.end()) {
            throw Error("combination rule '" + std::string(to_string(rule)) + "' needs P(" + key + ")");
        }
        if (!(it->second >= 0 && it->second <= 1)) {
            throw Error("P(" + key + ") = " + std::to_string(it->second) + " is outside [0, 1]");
        }
        return it->second;
    };

    CombinedScore out;
    switch (rule) {
        case CombinationRule::SumMinusProduct: {
            const double t = get("T"), f = get("F"), a = get("A"), c = get("C");
            out.raw = t + f + a + c - t * f * a * c;
            out.score = out.raw;
            break;
        }
        case CombinationRule::Max: {
            out.raw = std::max(get("E"), get("T"));
            out.score = out.raw;
            break;
        }
        case CombinationRule::AffineMean: {
            out.raw = 5.0 / 8.0 * (get("F") + get("E") + get("C")) - 0.25;
            out.score = std::clamp(out.raw, 0.0, 1.0);
            break;
        }
    }
    return out;
}

std::vector<CombinedScore> combine_batch(const std::vector<std::map<std::string, double>>& batch,
                                         CombinationRule rule) {
    std::vector<CombinedScore> out;
    out.reserve(batch.size());
    for (const auto& inputs : batch) {
        out.push_back(combine_probabilities(inputs, rule));
    }
    if (rule != CombinationRule::SumMinusProduct || out.empty()) {
        return out;
    }
    auto [lo, hi] = std::minmax_element(out.begin(), out.end(),
                                        [](const CombinedScore& a, const CombinedScore& b) { return a.raw < b.raw; });
    const double min = lo->raw, max = hi->raw;
    if (!(max > min)) {
        throw DegenerateDataError("batch", "cannot rescale a batch whose raw scores are all equal");
    }
    for (auto& s : out) {
        s.score = s.raw == max ? 1.0 : (s.raw - min) / (max - min);
    }
    return out;
}

}  // namespace arrayaudit::integrity
