#ifndef ARRAYAUDIT_TRANSFORM_HPP
#define ARRAYAUDIT_TRANSFORM_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

/**
 * @file transform.hpp
 *
 * @brief Row-wise transformation pipelines, and recovery of the pipeline
 * that turned one matrix into another.
 *
 * A pipeline is an optional Log, then an optional row z-score, then an
 * optional Exp, then an optional Round. The fixed slot order makes the
 * "at most one of each, in this order" rule structural.
 */

namespace arrayaudit::transform {

enum class Base { E, Two, Ten };

enum class Denominator { NMinusOne, N };

struct TransformPipeline {
    std::optional<Base> log;
    std::optional<Denominator> zscore;
    std::optional<Base> exp;
    std::optional<int> round_digits;

    int step_count() const;
    bool empty() const { return step_count() == 0; }

    bool operator==(const TransformPipeline&) const = default;
};

/**
 * Parses "log:e|zscore:n-1|exp:e|round:2". Bases: e, 2, 10. Denominators:
 * n-1, n. An empty string or "identity" is the empty pipeline. Throws `Error`
 * on unknown steps, repeated steps or steps out of order.
 */
TransformPipeline parse_pipeline(std::string_view spec);

/** Inverse of `parse_pipeline()`; the empty pipeline prints as "identity". */
std::string to_string(const TransformPipeline& p);

/**
 * Applies `p` to each row of `m`. Missing values pass through untouched and
 * are ignored by the z-score statistics.
 *
 * Throws `DegenerateDataError` for a non-positive value under Log (subject
 * "feature/sample") or a zero-variance row under the z-score (subject is the
 * feature id).
 */
LabeledMatrix apply_pipeline(const LabeledMatrix& m, const TransformPipeline& p);

/**
 * The default search grid: Log(b), z-score(d), Exp(b), with and without
 * Round(2), for b in {e, 2, 10} and d in {n-1, n}. Twelve candidates.
 */
std::vector<TransformPipeline> default_candidates();

struct PipelineFit {
    TransformPipeline best;
    std::size_t best_index = 0;
    /** Mean Pearson correlation between matching query and transformed reference rows. */
    double fit = 0;
    /** Largest absolute difference between query and transformed reference. */
    double residual = 0;
    /** Fit per candidate, in candidate order; NaN for candidates that could not be applied. */
    std::vector<double> candidate_fits;
};

/**
 * Picks the candidate whose output best matches `query` row by row.
 *
 * Rows of `query` and `reference` correspond by position, as do columns.
 * Candidates whose fits are within 1e-12 of each other are tied; ties go to
 * the candidate with fewer steps, then to the earlier candidate. Candidates
 * that cannot be applied to `reference` are skipped.
 */
PipelineFit infer_pipeline(const LabeledMatrix& query, const LabeledMatrix& reference,
                           const std::vector<TransformPipeline>& candidates);

}  // namespace arrayaudit::transform

#endif
