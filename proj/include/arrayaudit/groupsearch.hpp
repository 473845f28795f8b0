#ifndef ARRAYAUDIT_GROUPSEARCH_HPP
#define ARRAYAUDIT_GROUPSEARCH_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

/**
 * @file groupsearch.hpp
 *
 * @brief Steepest-ascent search for the group assignment of panel lines that
 * best reproduces a reported gene list.
 */

namespace arrayaudit::groupsearch {

/** Declaration order is the tie-break order between alternative states. */
enum class LineState { Resistant, Sensitive, Unused };

std::string_view to_string(LineState state);

/** One state per panel column, aligned with the panel's sample order. */
using Assignment = std::vector<LineState>;

/** Panel labels as an assignment; anything other than Sensitive/Resistant is Unused. */
Assignment assignment_from_labels(const LabeledMatrix& panel, const LabelMap& labels);

LabelMap assignment_to_labels(const LabeledMatrix& panel, const Assignment& a);

/** Maps a labeled training matrix and k to a gene list. */
using Generator = std::function<SignatureList(const LabeledMatrix&, std::size_t)>;

/** `signature::select_top_genes`. */
Generator default_generator();

/**
 * |generator(panel restricted to the assigned lines, k) ∩ target|, or
 * nullopt when the assignment has fewer than 2 Sensitive or 2 Resistant
 * lines (or the generator rejects it).
 */
std::optional<std::size_t> score_assignment(const Assignment& a, const LabeledMatrix& panel,
                                            const SignatureList& target, std::size_t k,
                                            const Generator& generator = default_generator());

struct Move {
    std::size_t line = 0;
    std::string line_id;
    LineState from = LineState::Unused;
    LineState to = LineState::Unused;
    std::size_t score = 0;
};

struct SearchResult {
    Assignment final_assignment;
    std::size_t start_score = 0;
    std::size_t final_score = 0;
    std::vector<Move> trajectory;
    /** Neighbours evaluated at each step, including the final non-improving one. */
    std::vector<std::size_t> neighbors_per_step;
    bool budget_exceeded = false;
};

/**
 * From `start`, repeatedly evaluates all 2N single-line state changes and
 * moves to the best strictly improving one. Ties go to the lower line index,
 * then to the state order Resistant < Sensitive < Unused. Stops at a local
 * maximum or after 10 N moves (`budget_exceeded`). Unscorable neighbours
 * count as score -1. Throws `Error` when `start` is unscorable or its size
 * differs from the panel's.
 */
SearchResult steepest_ascent(const Assignment& start, const LabeledMatrix& panel, const SignatureList& target,
                             std::size_t k, const Generator& generator = default_generator());

}  // namespace arrayaudit::groupsearch

#endif
