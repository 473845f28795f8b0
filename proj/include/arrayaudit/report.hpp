#ifndef ARRAYAUDIT_REPORT_HPP
#define ARRAYAUDIT_REPORT_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core.hpp"

/**
 * @file report.hpp
 *
 * @brief Finding codes, the findings report and its canonical JSON form.
 */

namespace arrayaudit::report {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kReportSchemaVersion = "1";
inline constexpr std::string_view kManifestSchemaVersion = "1";

enum class FindingCode {
    DupColumns,
    DupInconsistentLabels,
    RosterDup,
    RosterConflict,
    OffsetDetected,
    PlatformMismatch,
    LabelReversal,
    SentinelViolation,
    FlatResponse,
    SeparationOverlap,
    ConfoundPerfect,
    ConfoundHigh,
    BlockStructure,
    ReusedArtifact,
    DirectionConflict,
    LabelingFlip,
    DegenerateData,
};

inline constexpr std::array kAllCodes = {
    FindingCode::DupColumns,       FindingCode::DupInconsistentLabels, FindingCode::RosterDup,
    FindingCode::RosterConflict,   FindingCode::OffsetDetected,        FindingCode::PlatformMismatch,
    FindingCode::LabelReversal,    FindingCode::SentinelViolation,     FindingCode::FlatResponse,
    FindingCode::SeparationOverlap, FindingCode::ConfoundPerfect,      FindingCode::ConfoundHigh,
    FindingCode::BlockStructure,   FindingCode::ReusedArtifact,        FindingCode::DirectionConflict,
    FindingCode::LabelingFlip,     FindingCode::DegenerateData,
};

/** Registry name, e.g. "DUP_COLUMNS". */
std::string_view to_string(FindingCode code);

std::optional<FindingCode> parse_code(std::string_view name);

/** Plain-language description of the failure mode a code detects. Throws `Error` for unknown names. */
std::string explain(std::string_view code);
std::string explain(FindingCode code);

using Metric = std::variant<std::int64_t, double>;

struct Finding {
    FindingCode code = FindingCode::DegenerateData;
    Severity severity = Severity::Info;
    /** Manifest id of the check that produced it. */
    std::string check;
    std::vector<std::string> subjects;
    std::map<std::string, Metric> metrics;
    std::string message;
};

struct FindingsReport {
    std::vector<Finding> findings;
    std::string tool_version{kToolVersion};
    /** File path (as written in the manifest) -> "sha256:<hex>". */
    std::map<std::string, std::string> input_digests;
    /** Set when a check or input failed to run. */
    bool execution_error = false;
};

/** 0 = nothing above Info, 2 = warnings or critical findings, 1 = execution error. */
int exit_code(const FindingsReport& report);

/** Canonical JSON: sorted keys, two-space indent, LF line ends, trailing newline. */
std::string to_json(const FindingsReport& report);

/** Human-readable one-line-per-finding summary. */
std::string to_text(const FindingsReport& report);

/**
 * Structural check of a report document against the shipped report schema.
 * Returns the list of problems; empty when valid.
 */
std::vector<std::string> validate_report_json(std::string_view json_text);

}  // namespace arrayaudit::report

#endif
