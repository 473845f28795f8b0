#ifndef ARRAYAUDIT_DUPSCAN_HPP
#define ARRAYAUDIT_DUPSCAN_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "core.hpp"

/**
 * @file dupscan.hpp
 *
 * @brief Duplicated samples, label consistency, rosters, rival labelings and
 * matrix fingerprints.
 */

namespace arrayaudit::dupscan {

enum class CompareOn { Raw, Log };

enum class MissingPolicy { PairwiseComplete, Fail };

struct DupScanConfig {
    /** Columns correlated at or above this are duplicates; in (0, 1]. */
    double corr_threshold = 0.9999;
    CompareOn compare_on = CompareOn::Raw;
    MissingPolicy missing_policy = MissingPolicy::PairwiseComplete;
};

using Component = std::vector<std::string>;

struct DupComponents {
    /** Components of size >= 2, ordered by their smallest column index; members in column order. */
    std::vector<Component> components;
    /** Multiplicity -> number of distinct samples appearing that many times. */
    std::map<std::size_t, std::size_t> multiplicity_histogram;
    std::size_t n_distinct = 0;
    /** Zero-variance columns, excluded from the graph and counted as singletons. */
    std::vector<std::string> degenerate;
};

/**
 * Connected components of the sample graph whose edges join columns with
 * Pearson correlation >= `threshold` (or bitwise-identical columns).
 *
 * Singletons are included. Components are ordered by smallest member index.
 * Zero-variance columns become singletons and are listed in `degenerate`.
 * This is the engine behind both duplicate detection and block detection.
 */
struct SampleGraph {
    std::vector<Component> components;
    std::vector<std::string> degenerate;
};

SampleGraph correlation_components(const LabeledMatrix& m, double threshold,
                                   MissingPolicy missing_policy = MissingPolicy::PairwiseComplete);

/**
 * Duplicate columns by correlation. Requires at least 2 samples and 3
 * features; `CompareOn::Log` needs strictly positive values.
 */
DupComponents find_duplicate_columns(const LabeledMatrix& m, const DupScanConfig& cfg = {});

struct LabeledComponent {
    Component members;
    std::map<GroupLabel, std::size_t> labels;
};

struct LabelConsistency {
    std::vector<LabeledComponent> consistent;
    std::vector<LabeledComponent> inconsistent;
};

/**
 * A component is inconsistent when it holds two or more distinct labels
 * other than Unknown. Members without a label are treated as Unknown.
 */
LabelConsistency classify_duplicate_labels(const DupComponents& comps, const LabelMap& labels);

struct RosterDuplicates {
    std::size_t n_distinct = 0;
    /** Ids listed more than once, in order of first appearance. */
    std::vector<std::string> duplicated_ids;
    /** Duplicated ids carrying two or more distinct non-Unknown labels. */
    std::vector<std::string> inconsistent_ids;
};

RosterDuplicates roster_duplicates(const LabelRoster& roster);

/** Classification on one axis of a cross-tabulation. */
enum class Call { Sensitive, Intermediate, Resistant, Both, Unused, Unknown };

std::string_view to_string(Call call);

using CallMap = std::map<std::string, Call>;

/**
 * One call per distinct roster id. Ids whose entries carry both Sensitive
 * and Resistant become `Call::Both`; otherwise the first non-Unknown label
 * is used.
 */
CallMap collapse_roster(const LabelRoster& roster);

struct ContingencyTable {
    std::vector<Call> row_levels;
    std::vector<Call> col_levels;
    /** counts[row][col] */
    std::vector<std::vector<std::size_t>> counts;
    std::vector<std::size_t> row_margins;
    std::vector<std::size_t> col_margins;
    std::size_t total = 0;
    /** Samples present on only one axis; not tabulated. */
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;
};

/**
 * Counts label pairs over the samples present in both maps. Levels are the
 * calls that occur, in the fixed order Sensitive, Intermediate, Resistant,
 * Both, Unused, Unknown. Throws `Error` when no sample is shared.
 */
ContingencyTable cross_tabulate(const CallMap& a, const CallMap& b);

/**
 * SHA-256 (hex) of the matrix shape and its values rounded to `digits`
 * decimals. Identifiers and labels are not part of the digest.
 */
std::string fingerprint_matrix(const LabeledMatrix& m, int digits = 2);

bool matrices_identical(const LabeledMatrix& a, const LabeledMatrix& b, int digits = 2);

struct LabelingSource {
    std::string source_id;
    std::string drug_id;
    std::map<std::string, GroupLabel> labels;  // entity -> label
};

struct EntityHistory {
    std::string drug_id;
    std::string entity;
    std::vector<std::pair<std::string, GroupLabel>> labels;  // (source, label) in source order
    bool flipped = false;
};

struct FlipReport {
    std::vector<EntityHistory> entities;  // ordered by drug, then entity
    std::map<std::string, bool> drug_flipped;
    std::map<std::string, std::size_t> sources_per_drug;
};

/**
 * Flags an entity when it is called Sensitive by one source and Resistant
 * by another for the same drug. Throws `Error` for an empty source list.
 */
FlipReport compare_labelings(const std::vector<LabelingSource>& sources);

/** Feature ids that are assigned both directions, in order of first appearance. */
std::vector<std::string> check_signature_directions(const SignatureList& sig);

}  // namespace arrayaudit::dupscan

#endif
