#ifndef ARRAYAUDIT_INGEST_HPP
#define ARRAYAUDIT_INGEST_HPP

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

/**
 * @file ingest.hpp
 *
 * @brief Strict parsers for the delimited text formats accepted by the tool.
 *
 * All parsers are locale independent (decimal point only, no thousands
 * separators), accept LF or CRLF line endings and report failures as
 * `ParseError` with 1-based line and column coordinates.
 */

namespace arrayaudit::ingest {

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

enum class Delimiter { Tab, Comma };

char delimiter_char(Delimiter d);

/** Tab if the first non-empty line contains one, comma otherwise. */
Delimiter sniff_delimiter(std::string_view text);

/**
 * Maps free-text group labels from the various sources onto `GroupLabel`.
 *
 * The table is data: the default one is compiled in from the shipped
 * `label_synonyms.tsv`, and alternatives can be loaded at run time.
 * Matching is case-insensitive after trimming surrounding whitespace.
 */
class LabelSynonyms {
public:
    /** The table shipped with the tool. */
    static const LabelSynonyms& defaults();

    /**
     * Parses "token<TAB>Label" lines; blank lines and lines starting with
     * '#' are ignored. Label must be a canonical `GroupLabel` name.
     */
    static LabelSynonyms parse(std::string_view text);

    std::optional<GroupLabel> lookup(std::string_view token) const;

    void add(std::string token, GroupLabel label);

private:
    std::map<std::string, GroupLabel> table_;
};

struct MatrixFormat {
    Delimiter delimiter = Delimiter::Tab;
    bool has_label_row = false;
    std::string label_row_key = "label";
    std::string missing_token = "NA";
};

/**
 * Header row: corner cell followed by sample ids. Optional second row whose
 * first cell is exactly `label_row_key` gives a group label per sample.
 * Every further row is a feature id followed by one numeric cell per sample.
 */
LabeledMatrix parse_matrix(std::string_view text, const MatrixFormat& fmt,
                           const LabelSynonyms& synonyms = LabelSynonyms::defaults());

/**
 * Writes `m` in the format read by `parse_matrix()`. Values use 17
 * significant digits, missing values the format's missing token and labels
 * their canonical names. A label row is written when `fmt.has_label_row`.
 */
std::string serialize_matrix(const LabeledMatrix& m, const MatrixFormat& fmt);

/** Columns: sample_id, label[, source[, note]]. Optional header row. */
LabelRoster parse_roster(std::string_view text, const LabelSynonyms& synonyms = LabelSynonyms::defaults());

std::string serialize_roster(const LabelRoster& roster);

/**
 * Columns: feature_id[, direction]. Repeated ids add direction entries but
 * are listed once. Direction tokens: UpInResistant/up_resistant/R and
 * UpInSensitive/up_sensitive/S (case-insensitive); empty means none.
 */
SignatureList parse_signature(std::string_view text);

/** One row per direction entry; features without a direction get an empty cell. */
std::string serialize_signature(const SignatureList& sig);

/** First line: platform id. Then one feature id per line, in row order. */
AnnotationIndex parse_annotation(std::string_view text);

std::string serialize_annotation(const AnnotationIndex& ann);

/** Columns: cell_line, drug_id, measure (GI50|TGI|LC50), value. */
std::vector<SensitivityRecord> parse_sensitivity(std::string_view text);

std::string serialize_sensitivity(const std::vector<SensitivityRecord>& records);

/** Columns: sample_id, run_timestamp (ISO-8601), scanner_id, treatment_arm, included (0/1). */
std::vector<SampleMeta> parse_sample_meta(std::string_view text);

std::string serialize_sample_meta(const std::vector<SampleMeta>& metas);

/** Row-keyed numeric table: a header naming the columns, then id + one number per column. */
struct NumericTable {
    std::vector<std::string> columns;
    std::vector<std::string> row_ids;
    std::vector<std::vector<double>> rows;
};

/** Header row required; its first cell names the id column and is not kept. */
NumericTable parse_numeric_table(std::string_view text);

/**
 * ISO-8601 date or date-time, "YYYY-MM-DD[(T| )HH:MM[:SS]][Z|(+|-)HH:MM]".
 * Times without a zone are taken as UTC.
 */
std::optional<std::chrono::sys_seconds> parse_timestamp(std::string_view text);

std::string format_timestamp(std::chrono::sys_seconds t);

/** Reads a whole file; throws `Error` when it cannot be opened. */
std::string read_file(const std::string& path);

/** Per-label counts over the matrix's samples. */
std::map<GroupLabel, std::size_t> label_census(const LabeledMatrix& m);

}  // namespace arrayaudit::ingest

#endif
