#include "arrayaudit/groupsearch.hpp"

#include <unordered_set>

#include "arrayaudit/signature.hpp"

namespace arrayaudit::groupsearch {

std::string_view to_string(LineState state) {
    switch (state) {
        case LineState::Resistant: return "Resistant";
        case LineState::Sensitive: return "Sensitive";
        case LineState::Unused: return "Unused";
    }
    return "Unused";
}

Assignment assignment_from_labels(const LabeledMatrix& panel, const LabelMap& labels) {
    Assignment a(panel.n_samples(), LineState::Unused);
    for (std::size_t c = 0; c < panel.n_samples(); ++c) {
        auto it = labels.find(panel.sample_ids[c]);
        if (it == labels.end()) {
            continue;
        }
        if (it->second == GroupLabel::Sensitive) {
            a[c] = LineState::Sensitive;
        } else if (it->second == GroupLabel::Resistant) {
            a[c] = LineState::Resistant;
        }
    }
    return a;
}

LabelMap assignment_to_labels(const LabeledMatrix& panel, const Assignment& a) {
    LabelMap out;
    for (std::size_t c = 0; c < panel.n_samples(); ++c) {
        out[panel.sample_ids[c]] = a[c] == LineState::Sensitive   ? GroupLabel::Sensitive
                                   : a[c] == LineState::Resistant ? GroupLabel::Resistant
                                                                  : GroupLabel::Unused;
    }
    return out;
}

Generator default_generator() {
    return [](const LabeledMatrix& m, std::size_t k) { return signature::select_top_genes(m, k); };
}

std::optional<std::size_t> score_assignment(const Assignment& a, const LabeledMatrix& panel,
                                            const SignatureList& target, std::size_t k, const Generator& generator) {
    if (a.size() != panel.n_samples()) {
        throw Error("assignment has " + std::to_string(a.size()) + " entries but the panel has " +
                    std::to_string(panel.n_samples()) + " lines");
    }
    std::size_t s = 0, r = 0;
    std::vector<std::string> used;
    for (std::size_t c = 0; c < a.size(); ++c) {
        if (a[c] == LineState::Sensitive) {
            ++s;
        } else if (a[c] == LineState::Resistant) {
            ++r;
        } else {
            continue;
        }
        used.push_back(panel.sample_ids[c]);
    }
    if (s < 2 || r < 2) {
        return std::nullopt;
    }

    auto training = select_samples(panel, used);
    training.labels = assignment_to_labels(panel, a);
    std::erase_if(training.labels, [](const auto& kv) { return kv.second == GroupLabel::Unused; });

    SignatureList generated;
    try {
        generated = generator(training, k);
    } catch (const Error&) {
        return std::nullopt;
    }
    std::unordered_set<std::string> wanted(target.feature_ids.begin(), target.feature_ids.end());
    std::size_t score = 0;
    for (const auto& id : generated.feature_ids) {
        score += wanted.count(id);
    }
    return score;
}

SearchResult steepest_ascent(const Assignment& start, const LabeledMatrix& panel, const SignatureList& target,
                             std::size_t k, const Generator& generator) {
    auto start_score = score_assignment(start, panel, target, k, generator);
    if (!start_score) {
        throw Error("steepest_ascent: the start assignment needs at least 2 Sensitive and 2 Resistant lines");
    }

    SearchResult out;
    out.final_assignment = start;
    out.start_score = *start_score;
    long long current = static_cast<long long>(*start_score);
    const std::size_t n = panel.n_samples();
    const std::size_t budget = 10 * n;

    while (true) {
        std::optional<Move> best;
        long long best_score = current;
        std::size_t evaluated = 0;
        for (std::size_t line = 0; line < n; ++line) {
            for (auto state : {LineState::Resistant, LineState::Sensitive, LineState::Unused}) {
                if (state == out.final_assignment[line]) {
                    continue;
                }
                auto neighbor = out.final_assignment;
                neighbor[line] = state;
                auto s = score_assignment(neighbor, panel, target, k, generator);
                ++evaluated;
                const long long value = s ? static_cast<long long>(*s) : -1;
                if (value > best_score) {
                    best_score = value;
                    best = Move{line, panel.sample_ids[line], out.final_assignment[line], state,
                                static_cast<std::size_t>(value)};
                }
            }
        }
        out.neighbors_per_step.push_back(evaluated);
        if (!best) {
            break;
        }
        if (out.trajectory.size() >= budget) {
            out.budget_exceeded = true;
            break;
        }
        out.final_assignment[best->line] = best->to;
        current = best_score;
        out.trajectory.push_back(*best);
    }
    out.final_score = static_cast<std::size_t>(current);
    return out;
}

}  // namespace arrayaudit::groupsearch
