#ifndef ARRAYAUDIT_INTEGRITY_HPP
#define ARRAYAUDIT_INTEGRITY_HPP

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "dupscan.hpp"

/**
 * @file integrity.hpp
 *
 * @brief Dose-response sanity checks, sentinel samples, run batches, block
 * structure, confounding and combination-rule scoring.
 *
 * Potency values are on the -log10(molar) scale: larger is more sensitive.
 */

namespace arrayaudit::integrity {

/** Potency values paired with group labels for one drug and measure. */
struct LabeledValues {
    std::vector<double> sensitive;
    std::vector<double> resistant;
};

/**
 * Records of `drug`/`measure` whose cell line is labeled Sensitive or
 * Resistant in `labels`. Other records are ignored.
 */
LabeledValues gather(const std::vector<SensitivityRecord>& records, const LabelMap& labels, const std::string& drug,
                     Measure measure);

/** All values of `drug`/`measure` across the panel. */
std::vector<double> gather_all(const std::vector<SensitivityRecord>& records, const std::string& drug,
                               Measure measure);

enum class Orientation {
    /** "value >= t means Sensitive" only. */
    SensitiveHigh,
    /** Also tries "value < t means Sensitive" and keeps the better one. */
    Auto,
};

struct SeparationResult {
    /** Midpoint between neighbouring distinct values, or +/-infinity at the ends. */
    double best_threshold = 0;
    std::size_t misfit_count = 0;
    bool overlap = false;
    /** True when the reversed rule won under `Orientation::Auto`. */
    bool reversed_orientation = false;
};

/**
 * Minimum number of misclassified lines over every threshold position.
 * Ties go to the lowest threshold. Throws `Error` when a group is empty.
 */
SeparationResult check_separation(const LabeledValues& values, Orientation orientation = Orientation::SensitiveHigh);

enum class Verdict { Consistent, Reversed, Unknown };

std::string_view to_string(Verdict v);

struct ReversalResult {
    /** P(Sensitive value > Resistant value), ties counted 1/2. */
    double auc = 0.5;
    Verdict verdict = Verdict::Unknown;
    bool reversed = false;
};

/**
 * Reversed when the AUC is below 0.5 - margin, consistent above
 * 0.5 + margin, unknown in between. Needs 2 lines per group.
 */
ReversalResult check_reversal(const LabeledValues& values, double margin = 0.2);

struct FlatResult {
    double range = 0;
    double iqr = 0;
    bool flat = false;
};

/** Flat when the interquartile range is below `epsilon`. Needs at least 5 values. */
FlatResult check_flat_response(const std::vector<double>& values, double epsilon = 0.2);

struct Sentinel {
    std::string sample_id;
    GroupLabel expected = GroupLabel::Unknown;
    std::string reason;
};

struct SentinelResult {
    std::string sample_id;
    GroupLabel expected = GroupLabel::Unknown;
    std::optional<GroupLabel> observed;
    Severity severity = Severity::Info;
    std::string message;
};

/**
 * Critical for a sentinel labeled differently from its expected label, Info
 * for a sentinel that is absent or unlabeled. Matching sentinels yield
 * nothing.
 */
std::vector<SentinelResult> sentinel_check(const LabelMap& labels, const std::vector<Sentinel>& sentinels);

/**
 * Batch number (1-based, in time order) per sample, aligned with the input.
 * A new batch starts whenever the gap to the previous sample exceeds `gap`.
 * Throws `Error` for empty input.
 */
std::vector<int> infer_batches(const std::vector<SampleMeta>& metas, std::chrono::seconds gap = std::chrono::days{7});

/** All components (singletons included) of the sample graph at `corr_threshold`. */
std::vector<dupscan::Component> detect_blocks(const LabeledMatrix& m, double corr_threshold = 0.8);

struct CategoryTable {
    std::vector<std::string> row_levels;  // sorted
    std::vector<std::string> col_levels;  // sorted
    std::vector<std::vector<std::size_t>> counts;
    std::size_t total = 0;
};

struct ConfoundResult {
    double cramers_v = 0;
    double chi_square = 0;
    /** Every treatment occupies batches no other treatment uses. */
    bool perfect = false;
    /** Rows are treatments, columns batches. */
    CategoryTable table;
};

/**
 * Association between treatment arm and batch (or scanner). Inputs are
 * aligned per sample. Needs at least 2 levels on each side.
 */
ConfoundResult test_confounding(const std::vector<std::string>& batches, const std::vector<std::string>& treatments);

enum class CombinationRule {
    /** P(T) + P(F) + P(A) + P(C) - P(T)P(F)P(A)P(C); batch min -> 0, max -> 1. */
    SumMinusProduct,
    /** max[P(E), P(T)]. */
    Max,
    /** 5/8 [P(F) + P(E) + P(C)] - 1/4, clipped to [0, 1]. */
    AffineMean,
};

std::string_view to_string(CombinationRule rule);

/** "tfac", "tet" or "fec". */
std::optional<CombinationRule> parse_rule(std::string_view name);

/** Drug keys the rule reads: T,F,A,C / E,T / F,E,C. */
std::vector<std::string> required_keys(CombinationRule rule);

struct CombinedScore {
    double raw = 0;
    /** Clipped for AffineMean, raw for Max; SumMinusProduct needs a batch, so equals raw here. */
    double score = 0;
};

/** Throws `Error` for a missing key or an input outside [0, 1]. */
CombinedScore combine_probabilities(const std::map<std::string, double>& inputs, CombinationRule rule);

/**
 * Scores for a batch of samples, with the rule's renormalization applied
 * across the batch. Throws `DegenerateDataError` for SumMinusProduct when
 * every raw value is equal.
 */
std::vector<CombinedScore> combine_batch(const std::vector<std::map<std::string, double>>& batch, CombinationRule rule);

}  // namespace arrayaudit::integrity

#endif
