#include "arrayaudit/matchscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_set>

#include "arrayaudit/stats.hpp"

namespace arrayaudit::matchscan {

namespace {

// Rows are compared in blocks of reference rows so the query row and a
// block of reference rows stay in cache together.
constexpr std::size_t kBlock = 64;

}  // namespace

MatchResult match_rows(const LabeledMatrix& query, const LabeledMatrix& reference, double min_corr) {
    if (query.n_samples() != reference.n_samples()) {
        throw Error("match: query has " + std::to_string(query.n_samples()) + " columns but reference has " +
                    std::to_string(reference.n_samples()));
    }
    if (query.n_samples() < 3) {
        throw Error("match: at least 3 shared columns are needed");
    }

    const bool missing = query.has_missing() || reference.has_missing();
    const std::size_t nq = query.n_features(), nr = reference.n_features();

    std::vector<std::vector<double>> q_unit(nq), r_unit(nr);
    std::vector<bool> q_degenerate(nq), r_degenerate(nr);
    for (std::size_t i = 0; i < nq; ++i) {
        auto m = stats::moments(query.row(i));
        q_degenerate[i] = m.n < 2 || !(m.sum_sq > 0);
        if (!missing && !q_degenerate[i]) {
            q_unit[i] = stats::unit_centered(query.row(i));
        }
    }
    for (std::size_t j = 0; j < nr; ++j) {
        auto m = stats::moments(reference.row(j));
        r_degenerate[j] = m.n < 2 || !(m.sum_sq > 0);
        if (!missing && !r_degenerate[j]) {
            r_unit[j] = stats::unit_centered(reference.row(j));
        }
    }

    MatchResult out;
    out.mapping.assign(nq, std::nullopt);
    out.hits.assign(nq, {});
    for (std::size_t i = 0; i < nq; ++i) {
        if (q_degenerate[i]) {
            out.degenerate.push_back(i);
            continue;
        }
        for (std::size_t start = 0; start < nr; start += kBlock) {
            const std::size_t stop = std::min(nr, start + kBlock);
            for (std::size_t j = start; j < stop; ++j) {
                if (r_degenerate[j]) {
                    continue;
                }
                const double r = missing ? stats::pearson(query.row(i), reference.row(j))
                                         : stats::dot(q_unit[i], r_unit[j]);
                if (r >= min_corr) {
                    out.hits[i].push_back(j);
                }
            }
        }
    }

    for (std::size_t i = 0; i < nq; ++i) {
        if (out.hits[i].size() == 1) {
            out.mapping[i] = out.hits[i].front();
            ++out.stats.matched;
        } else if (out.hits[i].size() >= 2) {
            out.ambiguous.push_back(i);
            ++out.stats.ambiguous;
        } else {
            out.unmatched.push_back(i);
            ++out.stats.unmatched;
        }
    }
    out.stats.degenerate = out.degenerate.size();
    return out;
}

MatchResult match_columns(const LabeledMatrix& query, const LabeledMatrix& reference, double min_corr) {
    if (query.n_features() != reference.n_features()) {
        throw Error("match: query has " + std::to_string(query.n_features()) + " rows but reference has " +
                    std::to_string(reference.n_features()));
    }
    return match_rows(query.transposed(), reference.transposed(), min_corr);
}

OffsetResult detect_offset(const SignatureList& reported, const AnnotationIndex& ann, const SignatureList& generated,
                           int max_shift) {
    if (reported.feature_ids.empty()) {
        throw Error("detect_offset: empty reported signature");
    }
    if (max_shift < 0) {
        throw Error("detect_offset: max_shift must be non-negative");
    }
    std::unordered_set<std::string> target(generated.feature_ids.begin(), generated.feature_ids.end());

    std::vector<std::optional<std::size_t>> positions;
    positions.reserve(reported.size());
    for (const auto& id : reported.feature_ids) {
        positions.push_back(ann.position(id));
    }

    auto shifted_hit = [&](std::size_t k, int s) -> bool {
        if (!positions[k]) {
            return false;
        }
        const auto p = static_cast<long long>(*positions[k]) + s;
        if (p < 0 || p >= static_cast<long long>(ann.size())) {
            return false;
        }
        return target.count(ann.feature_ids()[static_cast<std::size_t>(p)]) > 0;
    };

    OffsetResult out;
    bool have_best = false;
    for (int s = -max_shift; s <= max_shift; ++s) {
        std::size_t overlap = 0;
        for (std::size_t k = 0; k < positions.size(); ++k) {
            overlap += shifted_hit(k, s) ? 1 : 0;
        }
        out.overlap_by_shift[s] = overlap;

        bool better = !have_best || overlap > out.overlap_at_best;
        if (have_best && overlap == out.overlap_at_best) {
            const int a = std::abs(s), b = std::abs(out.best_shift);
            better = a < b || (a == b && s < out.best_shift);
        }
        if (better) {
            have_best = true;
            out.best_shift = s;
            out.overlap_at_best = overlap;
        }
    }

    for (std::size_t k = 0; k < positions.size(); ++k) {
        if (!shifted_hit(k, out.best_shift)) {
            out.outliers.push_back(reported.feature_ids[k]);
        }
    }
    return out;
}

std::vector<std::string> check_platform_membership(const SignatureList& sig, const AnnotationIndex& ann) {
    std::vector<std::string> out;
    for (const auto& id : sig.feature_ids) {
        if (!ann.contains(id)) {
            out.push_back(id);
        }
    }
    return out;
}

double separation_score(const LabeledMatrix& m, const SignatureList& sig, const LabelMap& labels) {
    std::vector<std::size_t> sens, res;
    for (std::size_t c = 0; c < m.n_samples(); ++c) {
        auto it = labels.find(m.sample_ids[c]);
        if (it == labels.end()) {
            continue;
        }
        if (it->second == GroupLabel::Sensitive) {
            sens.push_back(c);
        } else if (it->second == GroupLabel::Resistant) {
            res.push_back(c);
        }
    }
    if (sens.size() < 2 || res.size() < 2) {
        throw Error("separation_score needs at least 2 Sensitive and 2 Resistant samples");
    }

    std::unordered_set<std::string> wanted(sig.feature_ids.begin(), sig.feature_ids.end());
    double total = 0;
    std::size_t genes = 0;
    std::vector<double> a, b;
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        if (!wanted.count(m.feature_ids[r])) {
            continue;
        }
        a.clear();
        b.clear();
        for (auto c : sens) {
            a.push_back(m.at(r, c));
        }
        for (auto c : res) {
            b.push_back(m.at(r, c));
        }
        const double t = stats::pooled_t(a, b);
        if (std::isnan(t)) {
            continue;
        }
        const auto na = stats::moments(a).n, nb = stats::moments(b).n;
        const double nu = static_cast<double>(na + nb) - 2.0;
        total += std::isinf(t) ? 1.0 : std::abs(t) / std::sqrt(t * t + nu);
        ++genes;
    }
    if (genes == 0) {
        throw Error("separation_score: no signature gene is present in the matrix");
    }
    return total / static_cast<double>(genes);
}

}  // namespace arrayaudit::matchscan
