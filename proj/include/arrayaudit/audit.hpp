#ifndef ARRAYAUDIT_AUDIT_HPP
#define ARRAYAUDIT_AUDIT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ingest.hpp"
#include "json.hpp"
#include "report.hpp"

/**
 * @file audit.hpp
 *
 * @brief Declarative audit runs: a manifest of inputs and checks in, a
 * findings report out.
 */

namespace arrayaudit::audit {

enum class InputKind { Matrix, Roster, Signature, Annotation, Sensitivity, Meta };

std::string_view to_string(InputKind kind);
std::optional<InputKind> parse_input_kind(std::string_view name);

struct InputSpec {
    std::string name;
    InputKind kind = InputKind::Matrix;
    /** As written in the manifest; relative paths resolve against the manifest's directory. */
    std::string path;
    /** Matrix inputs only. Unset delimiter means sniff it. */
    std::optional<ingest::Delimiter> delimiter;
    ingest::MatrixFormat format;
};

struct CheckSpec {
    std::string id;
    std::string type;
    nlohmann::json params = nlohmann::json::object();
};

struct AuditManifest {
    std::vector<InputSpec> inputs;
    std::vector<CheckSpec> checks;
    std::optional<std::string> output;
};

/** Names of the check types a manifest may use, in registry order. */
const std::vector<std::string>& check_types();

/**
 * Problems with a manifest document: JSON syntax, unknown keys, undeclared
 * or mis-kinded input references, bad parameter types. Empty when valid.
 */
std::vector<std::string> validate_manifest(std::string_view json_text);

/** Parses and validates; throws `Error` listing every problem. */
AuditManifest parse_manifest(std::string_view json_text);

struct AuditRun {
    report::FindingsReport report;
    int exit_code = 0;
};

/**
 * Loads the inputs, runs every check in manifest order and collects the
 * findings. An unreadable input or a failing check becomes a DEGENERATE_DATA
 * finding, marks the run as an execution error and skips checks that depend
 * on the input; the remaining checks still run.
 */
AuditRun run_audit(const AuditManifest& manifest, const std::filesystem::path& base_dir);

}  // namespace arrayaudit::audit

#endif
