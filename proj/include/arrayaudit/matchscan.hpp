#ifndef ARRAYAUDIT_MATCHSCAN_HPP
#define ARRAYAUDIT_MATCHSCAN_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

/**
 * @file matchscan.hpp
 *
 * @brief Brute-force identification of unlabeled rows and columns, and
 * detection of index offsets between reported gene lists and a platform.
 */

namespace arrayaudit::matchscan {

struct MatchStats {
    std::size_t matched = 0;
    std::size_t unmatched = 0;
    std::size_t ambiguous = 0;
    std::size_t degenerate = 0;
};

struct MatchResult {
    /** Reference index for each query index with exactly one hit. */
    std::vector<std::optional<std::size_t>> mapping;
    /** All reference indices correlated at or above the cutoff, ascending. */
    std::vector<std::vector<std::size_t>> hits;
    std::vector<std::size_t> ambiguous;
    /** Query indices without hits, including degenerate ones. */
    std::vector<std::size_t> unmatched;
    /** Query indices with zero variance; they can never match. */
    std::vector<std::size_t> degenerate;
    MatchStats stats;
};

/**
 * Every query row against every reference row. Columns correspond by
 * position and at least 3 are needed. Missing values use pairwise-complete
 * correlation. Throws `Error` when the column counts differ.
 */
MatchResult match_rows(const LabeledMatrix& query, const LabeledMatrix& reference, double min_corr);

/** As `match_rows()`, on columns; rows correspond by position. */
MatchResult match_columns(const LabeledMatrix& query, const LabeledMatrix& reference, double min_corr);

struct OffsetResult {
    int best_shift = 0;
    std::size_t overlap_at_best = 0;
    /** Reported ids not recovered at the best shift, in reported order. */
    std::vector<std::string> outliers;
    std::map<int, std::size_t> overlap_by_shift;
};

/**
 * Shifts each reported id by s annotation rows, for every s in
 * [-max_shift, max_shift], and counts how many land in `generated`. Ids
 * that are not on the platform never shift into anything. The best shift
 * has the largest overlap; ties go to smaller |s|, then to negative s.
 * Throws `Error` for an empty reported list or a negative `max_shift`.
 */
OffsetResult detect_offset(const SignatureList& reported, const AnnotationIndex& ann, const SignatureList& generated,
                           int max_shift);

/** Signature ids missing from the platform, in signature order. */
std::vector<std::string> check_platform_membership(const SignatureList& sig, const AnnotationIndex& ann);

/**
 * How cleanly the signature genes split Sensitive from Resistant samples:
 * the mean over genes present in `m` of |t| / sqrt(t^2 + nu), with t the
 * pooled two-sample t statistic and nu = n - 2. Lies in [0, 1]. A gene with
 * zero pooled variance contributes 1 if its group means differ and 0
 * otherwise. Throws `Error` unless both groups have at least 2 samples.
 */
double separation_score(const LabeledMatrix& m, const SignatureList& sig, const LabelMap& labels);

}  // namespace arrayaudit::matchscan

#endif
