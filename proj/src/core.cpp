#include "arrayaudit/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace arrayaudit {

std::string_view to_string(GroupLabel label) {
    switch (label) {
        case GroupLabel::Sensitive: return "Sensitive";
        case GroupLabel::Resistant: return "Resistant";
        case GroupLabel::Intermediate: return "Intermediate";
        case GroupLabel::Unused: return "Unused";
        case GroupLabel::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<GroupLabel> parse_group_label(std::string_view name) {
    for (auto label : {GroupLabel::Sensitive, GroupLabel::Resistant, GroupLabel::Intermediate,
                       GroupLabel::Unused, GroupLabel::Unknown}) {
        if (name == to_string(label)) {
            return label;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Severity severity) {
    switch (severity) {
        case Severity::Info: return "Info";
        case Severity::Warning: return "Warning";
        case Severity::Critical: return "Critical";
    }
    return "Info";
}

std::string_view to_string(Direction direction) {
    return direction == Direction::UpInResistant ? "UpInResistant" : "UpInSensitive";
}

std::string_view to_string(Measure measure) {
    switch (measure) {
        case Measure::GI50: return "GI50";
        case Measure::TGI: return "TGI";
        case Measure::LC50: return "LC50";
    }
    return "GI50";
}

std::optional<Measure> parse_measure(std::string_view name) {
    for (auto m : {Measure::GI50, Measure::TGI, Measure::LC50}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

std::vector<double> LabeledMatrix::column(std::size_t sample) const {
    std::vector<double> out(n_features());
    for (std::size_t r = 0; r < n_features(); ++r) {
        out[r] = at(r, sample);
    }
    return out;
}

GroupLabel LabeledMatrix::label_of(const std::string& sample_id) const {
    auto it = labels.find(sample_id);
    return it == labels.end() ? GroupLabel::Unknown : it->second;
}

bool LabeledMatrix::has_missing() const {
    return std::any_of(values.begin(), values.end(), [](double x) { return is_missing(x); });
}

LabeledMatrix LabeledMatrix::transposed() const {
    LabeledMatrix out;
    out.feature_ids = sample_ids;
    out.sample_ids = feature_ids;
    out.values.resize(values.size());
    const auto nr = n_features(), nc = n_samples();
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            out.values[c * nr + r] = values[r * nc + c];
        }
    }
    return out;
}

namespace {

void check_unique(const std::vector<std::string>& ids, const char* field, std::vector<Violation>& out) {
    std::unordered_set<std::string> seen;
    std::unordered_set<std::string> reported;
    for (const auto& id : ids) {
        if (!seen.insert(id).second && reported.insert(id).second) {
            out.push_back({field, id, "duplicated id '" + id + "' in " + field});
        }
    }
}

}  // namespace

std::vector<Violation> validate(const LabeledMatrix& m) {
    std::vector<Violation> out;
    check_unique(m.feature_ids, "feature_ids", out);
    check_unique(m.sample_ids, "sample_ids", out);

    if (m.values.size() != m.n_features() * m.n_samples()) {
        out.push_back({"values", "",
                       "expected " + std::to_string(m.n_features() * m.n_samples()) + " values, found " +
                           std::to_string(m.values.size())});
    } else {
        for (std::size_t i = 0; i < m.values.size(); ++i) {
            if (std::isinf(m.values[i])) {
                const auto r = i / m.n_samples(), c = i % m.n_samples();
                out.push_back({"values", m.feature_ids[r] + "/" + m.sample_ids[c], "infinite value"});
            }
        }
    }

    std::unordered_set<std::string> samples(m.sample_ids.begin(), m.sample_ids.end());
    for (const auto& [id, label] : m.labels) {
        if (!samples.count(id)) {
            out.push_back({"labels", id, "label given for unknown sample '" + id + "'"});
        }
    }
    return out;
}

void require_valid(const LabeledMatrix& m) {
    auto violations = validate(m);
    if (!violations.empty()) {
        throw Error("invalid matrix: " + violations.front().message);
    }
}

bool SignatureList::contains(const std::string& id) const {
    return std::find(feature_ids.begin(), feature_ids.end(), id) != feature_ids.end();
}

AnnotationIndex::AnnotationIndex(std::string platform_id, std::vector<std::string> feature_ids)
    : platform_id_(std::move(platform_id)), feature_ids_(std::move(feature_ids)) {
    index_.reserve(feature_ids_.size());
    for (std::size_t i = 0; i < feature_ids_.size(); ++i) {
        if (!index_.emplace(feature_ids_[i], i).second) {
            throw Error("duplicated feature id '" + feature_ids_[i] + "' in annotation for platform '" +
                        platform_id_ + "'");
        }
    }
}

std::optional<std::size_t> AnnotationIndex::position(const std::string& feature_id) const {
    auto it = index_.find(feature_id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Submatrix extract_submatrix(const LabeledMatrix& m, const SignatureList& sig,
                            const std::optional<std::set<GroupLabel>>& sample_filter) {
    std::unordered_map<std::string, std::size_t> rows;
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        rows.emplace(m.feature_ids[r], r);
    }

    std::vector<std::size_t> keep_cols;
    for (std::size_t c = 0; c < m.n_samples(); ++c) {
        if (!sample_filter || sample_filter->count(m.label_of(m.sample_ids[c]))) {
            keep_cols.push_back(c);
        }
    }

    Submatrix out;
    std::vector<std::size_t> keep_rows;
    for (const auto& id : sig.feature_ids) {
        auto it = rows.find(id);
        if (it == rows.end()) {
            out.absent.push_back(id);
        } else {
            keep_rows.push_back(it->second);
        }
    }
    if (keep_rows.empty()) {
        throw Error("no signature feature is present in the matrix; probable platform mismatch");
    }

    auto& sub = out.matrix;
    for (auto c : keep_cols) {
        sub.sample_ids.push_back(m.sample_ids[c]);
        auto it = m.labels.find(m.sample_ids[c]);
        if (it != m.labels.end()) {
            sub.labels.insert(*it);
        }
    }
    sub.values.reserve(keep_rows.size() * keep_cols.size());
    for (auto r : keep_rows) {
        sub.feature_ids.push_back(m.feature_ids[r]);
        for (auto c : keep_cols) {
            sub.values.push_back(m.at(r, c));
        }
    }
    return out;
}

LabeledMatrix select_samples(const LabeledMatrix& m, const std::vector<std::string>& sample_ids) {
    std::unordered_map<std::string, std::size_t> cols;
    for (std::size_t c = 0; c < m.n_samples(); ++c) {
        cols.emplace(m.sample_ids[c], c);
    }
    std::vector<std::size_t> keep;
    keep.reserve(sample_ids.size());
    for (const auto& id : sample_ids) {
        auto it = cols.find(id);
        if (it == cols.end()) {
            throw Error("sample '" + id + "' is not in the matrix");
        }
        keep.push_back(it->second);
    }

    LabeledMatrix out;
    out.feature_ids = m.feature_ids;
    out.sample_ids = sample_ids;
    out.values.reserve(m.n_features() * keep.size());
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        for (auto c : keep) {
            out.values.push_back(m.at(r, c));
        }
    }
    for (const auto& id : sample_ids) {
        auto it = m.labels.find(id);
        if (it != m.labels.end()) {
            out.labels.insert(*it);
        }
    }
    return out;
}

}  // namespace arrayaudit
