#ifndef ARRAYAUDIT_CORE_HPP
#define ARRAYAUDIT_CORE_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

/**
 * @file core.hpp
 *
 * @brief Domain model shared by every detector.
 *
 * Nothing in here performs statistics or I/O. Missing matrix entries are
 * stored as quiet NaN and are never imputed; each detector documents how it
 * treats them.
 */

namespace arrayaudit {

/**
 * Base class for all errors raised by the library.
 */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Raised when the input data is unusable for the requested computation,
 * e.g. a zero-variance row where a z-score is needed.
 * `subject()` names the offending feature or sample.
 */
class DegenerateDataError : public Error {
public:
    DegenerateDataError(std::string subject, const std::string& what)
        : Error(what), subject_(std::move(subject)) {}

    const std::string& subject() const { return subject_; }

private:
    std::string subject_;
};

/**
 * Raised by an iterative solver that ran out of iterations.
 */
class ConvergenceError : public Error {
public:
    ConvergenceError(int iterations, double residual, const std::string& what)
        : Error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double x) { return std::isnan(x); }

enum class GroupLabel { Sensitive, Resistant, Intermediate, Unused, Unknown };

/** Canonical spelling, e.g. "Sensitive". */
std::string_view to_string(GroupLabel label);

/** Inverse of `to_string()`; exact match only. Synonyms live in ingest. */
std::optional<GroupLabel> parse_group_label(std::string_view name);

using LabelMap = std::map<std::string, GroupLabel>;

enum class Severity { Info, Warning, Critical };

std::string_view to_string(Severity severity);

/**
 * Feature-by-sample numeric matrix with identifiers and optional labels.
 *
 * Values are stored row-major (one row per feature). The struct does not
 * enforce its invariants on construction; use `validate()` to check them.
 */
struct LabeledMatrix {
    std::vector<std::string> feature_ids;
    std::vector<std::string> sample_ids;
    std::vector<double> values;
    LabelMap labels;

    LabeledMatrix() = default;
    LabeledMatrix(std::vector<std::string> features, std::vector<std::string> samples,
                  std::vector<double> data, LabelMap sample_labels = {})
        : feature_ids(std::move(features)), sample_ids(std::move(samples)),
          values(std::move(data)), labels(std::move(sample_labels)) {}

    std::size_t n_features() const { return feature_ids.size(); }
    std::size_t n_samples() const { return sample_ids.size(); }

    double at(std::size_t feature, std::size_t sample) const {
        return values[feature * n_samples() + sample];
    }
    double& at(std::size_t feature, std::size_t sample) {
        return values[feature * n_samples() + sample];
    }

    std::span<const double> row(std::size_t feature) const {
        return {values.data() + feature * n_samples(), n_samples()};
    }
    std::span<double> row(std::size_t feature) {
        return {values.data() + feature * n_samples(), n_samples()};
    }

    std::vector<double> column(std::size_t sample) const;

    /** Label of `sample_id`, or Unknown when the sample carries none. */
    GroupLabel label_of(const std::string& sample_id) const;

    bool has_missing() const;

    LabeledMatrix transposed() const;
};

/**
 * One invariant violation reported by `validate()`.
 */
struct Violation {
    std::string field;
    std::string subject;
    std::string message;

    bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate(const LabeledMatrix& m);

/** Throws `Error` listing the first violation, if any. */
void require_valid(const LabeledMatrix& m);

/** One sample/label assignment in a roster; ids may repeat across entries. */
struct RosterEntry {
    std::string sample_id;
    GroupLabel label = GroupLabel::Unknown;
    std::string source_id;
    std::optional<std::string> note;
};

struct LabelRoster {
    std::vector<RosterEntry> entries;
};

enum class Direction { UpInResistant, UpInSensitive };

std::string_view to_string(Direction direction);

/**
 * Ordered gene list, optionally with per-feature direction assignments.
 *
 * `feature_ids` holds each id once, in reported order. `directions` keeps every
 * assignment as listed, so a feature may appear with both directions; that is
 * something `check_signature_directions()` reports rather than rejects.
 */
struct SignatureList {
    std::vector<std::string> feature_ids;
    std::vector<std::pair<std::string, Direction>> directions;

    std::size_t size() const { return feature_ids.size(); }
    bool contains(const std::string& id) const;
};

/**
 * Ordered feature universe of a platform. Row position is meaningful.
 */
class AnnotationIndex {
public:
    AnnotationIndex() = default;

    /** Throws `Error` on a duplicated feature id. */
    AnnotationIndex(std::string platform_id, std::vector<std::string> feature_ids);

    const std::string& platform_id() const { return platform_id_; }
    const std::vector<std::string>& feature_ids() const { return feature_ids_; }
    std::size_t size() const { return feature_ids_.size(); }

    std::optional<std::size_t> position(const std::string& feature_id) const;
    bool contains(const std::string& feature_id) const { return index_.count(feature_id) > 0; }

private:
    std::string platform_id_;
    std::vector<std::string> feature_ids_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class Measure { GI50, TGI, LC50 };

std::string_view to_string(Measure measure);
std::optional<Measure> parse_measure(std::string_view name);

/**
 * Potency on the -log10(molar) scale; larger means more sensitive.
 */
struct SensitivityRecord {
    std::string cell_line;
    std::string drug_id;
    Measure measure = Measure::GI50;
    double value = 0;
};

struct SampleMeta {
    std::string sample_id;
    std::chrono::sys_seconds run_timestamp;
    std::string scanner_id;
    std::string treatment_arm;
    bool included = true;
};

/**
 * Rows of `m` restricted to the signature, in signature order.
 */
struct Submatrix {
    LabeledMatrix matrix;
    std::vector<std::string> absent;
};

/**
 * Extracts the signature rows of `m`, optionally keeping only samples whose
 * label is in `sample_filter`. Throws `Error` when no signature feature is
 * present in `m`, which usually means the signature is from another platform.
 */
Submatrix extract_submatrix(const LabeledMatrix& m, const SignatureList& sig,
                            const std::optional<std::set<GroupLabel>>& sample_filter = std::nullopt);

/** Keeps the listed samples (by id, in the given order). */
LabeledMatrix select_samples(const LabeledMatrix& m, const std::vector<std::string>& sample_ids);

}  // namespace arrayaudit

#endif
