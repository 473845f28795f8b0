#include "arrayaudit/report.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

namespace arrayaudit::report {

using nlohmann::json;

std::string_view to_string(FindingCode code) {
    switch (code) {
        case FindingCode::DupColumns: return "DUP_COLUMNS";
        case FindingCode::DupInconsistentLabels: return "DUP_INCONSISTENT_LABELS";
        case FindingCode::RosterDup: return "ROSTER_DUP";
        case FindingCode::RosterConflict: return "ROSTER_CONFLICT";
        case FindingCode::OffsetDetected: return "OFFSET_DETECTED";
        case FindingCode::PlatformMismatch: return "PLATFORM_MISMATCH";
        case FindingCode::LabelReversal: return "LABEL_REVERSAL";
        case FindingCode::SentinelViolation: return "SENTINEL_VIOLATION";
        case FindingCode::FlatResponse: return "FLAT_RESPONSE";
        case FindingCode::SeparationOverlap: return "SEPARATION_OVERLAP";
        case FindingCode::ConfoundPerfect: return "CONFOUND_PERFECT";
        case FindingCode::ConfoundHigh: return "CONFOUND_HIGH";
        case FindingCode::BlockStructure: return "BLOCK_STRUCTURE";
        case FindingCode::ReusedArtifact: return "REUSED_ARTIFACT";
        case FindingCode::DirectionConflict: return "DIRECTION_CONFLICT";
        case FindingCode::LabelingFlip: return "LABELING_FLIP";
        case FindingCode::DegenerateData: return "DEGENERATE_DATA";
    }
    return "DEGENERATE_DATA";
}

std::optional<FindingCode> parse_code(std::string_view name) {
    for (auto code : kAllCodes) {
        if (to_string(code) == name) {
            return code;
        }
    }
    return std::nullopt;
}

std::string explain(FindingCode code) {
    switch (code) {
        case FindingCode::DupColumns:
            return "Some sample columns are duplicates of one another (pairwise correlation at or above the "
                   "threshold). Duplicate test samples inflate the apparent sample size and any validation "
                   "accuracy computed on them; the report gives the number of distinct samples and the "
                   "multiplicity of each duplicated one.";
        case FindingCode::DupInconsistentLabels:
            return "A group of duplicate samples carries conflicting labels, e.g. the same array is called "
                   "Sensitive in one column and Resistant in another. At least one of the labels is wrong, so "
                   "the response assignment of the test set cannot be trusted.";
        case FindingCode::RosterDup:
            return "A sample id appears more than once in a label roster. Repeated entries usually mean the "
                   "same array was pulled from several public series and counted again.";
        case FindingCode::RosterConflict:
            return "A sample id listed more than once in a roster is labeled both Sensitive and Resistant. The "
                   "class of that sample is undefined.";
        case FindingCode::OffsetDetected:
            return "The reported gene list matches the generated list best after shifting every id by a "
                   "constant number of annotation rows: an off-by-one style indexing error between the data "
                   "used and the names reported.";
        case FindingCode::PlatformMismatch:
            return "Signature ids are not on the platform whose data was analysed, so they cannot have come "
                   "from that analysis; they were added from another source or another array type.";
        case FindingCode::LabelReversal:
            return "Cell lines labeled Sensitive are less potently affected by the drug than those labeled "
                   "Resistant. The sensitive/resistant labels appear to be swapped, which inverts every "
                   "recommendation built on the signature.";
        case FindingCode::SentinelViolation:
            return "A sample whose class is known independently (for instance a line named as drug resistant) "
                   "carries the opposite label, pointing to a labeling reversal.";
        case FindingCode::FlatResponse:
            return "The drug shows essentially no differential activity across the panel (tiny interquartile "
                   "range of potency), so panel lines cannot be split into sensitive and resistant groups by "
                   "response. Prodrugs that need metabolic activation behave this way.";
        case FindingCode::SeparationOverlap:
            return "No single potency cutoff reproduces the Sensitive/Resistant labels: the two groups overlap, "
                   "so the labels were not derived by thresholding this measure.";
        case FindingCode::ConfoundPerfect:
            return "Treatment arm is perfectly confounded with processing batch (run date or scanner): every "
                   "batch holds one arm only, so batch effects cannot be separated from treatment effects.";
        case FindingCode::ConfoundHigh:
            return "Treatment arm is strongly associated with processing batch (high Cramer's V), so batch "
                   "effects are likely to contaminate between-arm comparisons.";
        case FindingCode::BlockStructure:
            return "Samples form several blocks of high mutual correlation, a typical signature of processing "
                   "batches or data assembled from different sources.";
        case FindingCode::ReusedArtifact:
            return "Two matrices that should describe different experiments are identical after rounding, "
                   "e.g. a heatmap published for one drug that is really the heatmap of another.";
        case FindingCode::DirectionConflict:
            return "A signature feature is listed as higher in both groups, which is impossible; the gene list "
                   "and the data it claims to summarise do not agree.";
        case FindingCode::LabelingFlip:
            return "Across sources describing the same drug, at least one cell line is called Sensitive in one "
                   "source and Resistant in another.";
        case FindingCode::DegenerateData:
            return "An input could not be read or analysed (unreadable file, zero-variance sample, constant "
                   "values, or a detector precondition failed). Results depending on it are missing.";
    }
    return {};
}

std::string explain(std::string_view code) {
    auto parsed = parse_code(code);
    if (!parsed) {
        throw Error("unknown finding code '" + std::string(code) + "'");
    }
    return explain(*parsed);
}

int exit_code(const FindingsReport& report) {
    if (report.execution_error) {
        return 1;
    }
    for (const auto& f : report.findings) {
        if (f.severity != Severity::Info) {
            return 2;
        }
    }
    return 0;
}

namespace {

json metric_json(const Metric& m) {
    if (const auto* i = std::get_if<std::int64_t>(&m)) {
        return *i;
    }
    const double d = std::get<double>(m);
    if (!std::isfinite(d)) {
        // JSON has no infinities; record them as strings.
        return std::isnan(d) ? "nan" : (d > 0 ? "inf" : "-inf");
    }
    return d;
}

}  // namespace

std::string to_json(const FindingsReport& report) {
    json doc;
    doc["schema_version"] = std::string(kReportSchemaVersion);
    doc["tool_version"] = report.tool_version;
    doc["input_digests"] = json::object();
    for (const auto& [path, digest] : report.input_digests) {
        doc["input_digests"][path] = digest;
    }
    doc["findings"] = json::array();
    std::map<std::string, std::int64_t> by_severity{{"Info", 0}, {"Warning", 0}, {"Critical", 0}};
    for (const auto& f : report.findings) {
        json jf;
        jf["code"] = std::string(to_string(f.code));
        jf["severity"] = std::string(to_string(f.severity));
        jf["check"] = f.check;
        jf["subjects"] = f.subjects;
        jf["metrics"] = json::object();
        for (const auto& [k, v] : f.metrics) {
            jf["metrics"][k] = metric_json(v);
        }
        jf["message"] = f.message;
        doc["findings"].push_back(std::move(jf));
        ++by_severity[std::string(to_string(f.severity))];
    }
    doc["summary"] = {{"n_findings", static_cast<std::int64_t>(report.findings.size())},
                      {"by_severity", by_severity},
                      {"execution_error", report.execution_error},
                      {"exit_code", exit_code(report)}};
    return doc.dump(2) + "\n";
}

std::string to_text(const FindingsReport& report) {
    std::string out;
    for (const auto& f : report.findings) {
        out += "[" + std::string(to_string(f.severity)) + "] " + std::string(to_string(f.code)) + " (" + f.check +
               "): " + f.message + "\n";
    }
    std::size_t warn = 0, crit = 0;
    for (const auto& f : report.findings) {
        warn += f.severity == Severity::Warning;
        crit += f.severity == Severity::Critical;
    }
    out += std::to_string(report.findings.size()) + " finding(s): " + std::to_string(crit) + " critical, " +
           std::to_string(warn) + " warning(s)" + (report.execution_error ? "; execution errors occurred" : "") +
           "\n";
    return out;
}

std::vector<std::string> validate_report_json(std::string_view json_text) {
    std::vector<std::string> problems;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        return {std::string("not valid JSON: ") + e.what()};
    }
    if (!doc.is_object()) {
        return {"report must be a JSON object"};
    }
    const std::set<std::string> allowed{"schema_version", "tool_version", "input_digests", "findings", "summary"};
    for (const auto& key : allowed) {
        if (!doc.contains(key)) {
            problems.push_back("missing key '" + key + "'");
        }
    }
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.count(key)) {
            problems.push_back("unexpected key '" + key + "'");
        }
    }
    if (!problems.empty()) {
        return problems;
    }
    if (doc["schema_version"] != std::string(kReportSchemaVersion)) {
        problems.push_back("schema_version must be \"" + std::string(kReportSchemaVersion) + "\"");
    }
    if (!doc["tool_version"].is_string()) {
        problems.push_back("tool_version must be a string");
    }
    if (!doc["input_digests"].is_object()) {
        problems.push_back("input_digests must be an object");
    } else {
        for (const auto& [path, digest] : doc["input_digests"].items()) {
            if (!digest.is_string() || digest.get<std::string>().rfind("sha256:", 0) != 0 ||
                digest.get<std::string>().size() != 7 + 64) {
                problems.push_back("input digest for '" + path + "' must be \"sha256:<64 hex digits>\"");
            }
        }
    }
    if (!doc["findings"].is_array()) {
        problems.push_back("findings must be an array");
    } else {
        const std::set<std::string> fkeys{"code", "severity", "check", "subjects", "metrics", "message"};
        std::size_t i = 0;
        for (const auto& f : doc["findings"]) {
            const std::string where = "findings[" + std::to_string(i++) + "]";
            if (!f.is_object()) {
                problems.push_back(where + " must be an object");
                continue;
            }
            bool complete = true;
            for (const auto& key : fkeys) {
                if (!f.contains(key)) {
                    problems.push_back(where + " lacks '" + key + "'");
                    complete = false;
                }
            }
            for (const auto& [key, value] : f.items()) {
                if (!fkeys.count(key)) {
                    problems.push_back(where + " has unexpected key '" + key + "'");
                }
            }
            if (!complete) {
                continue;
            }
            if (!f["code"].is_string() || !parse_code(f["code"].get<std::string>())) {
                problems.push_back(where + ".code is not a registered finding code");
            }
            if (!f["severity"].is_string() || (f["severity"] != "Info" && f["severity"] != "Warning" &&
                                               f["severity"] != "Critical")) {
                problems.push_back(where + ".severity must be Info, Warning or Critical");
            }
            if (!f["check"].is_string() || !f["message"].is_string()) {
                problems.push_back(where + ".check and .message must be strings");
            }
            if (!f["subjects"].is_array()) {
                problems.push_back(where + ".subjects must be an array");
            } else {
                for (const auto& s : f["subjects"]) {
                    if (!s.is_string()) {
                        problems.push_back(where + ".subjects must hold strings");
                        break;
                    }
                }
            }
            if (!f["metrics"].is_object()) {
                problems.push_back(where + ".metrics must be an object");
            } else {
                for (const auto& [k, v] : f["metrics"].items()) {
                    if (!v.is_number() && !(v.is_string() && (v == "inf" || v == "-inf" || v == "nan"))) {
                        problems.push_back(where + ".metrics." + k + " must be a number");
                    }
                }
            }
        }
    }
    const auto& s = doc["summary"];
    if (!s.is_object() || !s.contains("n_findings") || !s.contains("by_severity") || !s.contains("exit_code") ||
        !s.contains("execution_error")) {
        problems.push_back("summary must hold n_findings, by_severity, execution_error and exit_code");
    } else {
        if (!s["exit_code"].is_number_integer() || (s["exit_code"] != 0 && s["exit_code"] != 1 && s["exit_code"] != 2)) {
            problems.push_back("summary.exit_code must be 0, 1 or 2");
        }
        if (doc["findings"].is_array() && s["n_findings"] != doc["findings"].size()) {
            problems.push_back("summary.n_findings does not match the findings array");
        }
        // Counts and exit code must follow from the findings themselves.
        if (doc["findings"].is_array() && s["execution_error"].is_boolean()) {
            std::map<std::string, std::size_t> counts{{"Info", 0}, {"Warning", 0}, {"Critical", 0}};
            for (const auto& f : doc["findings"]) {
                if (f.is_object() && f.contains("severity") && f["severity"].is_string()) {
                    ++counts[f["severity"].get<std::string>()];
                }
            }
            if (!s["by_severity"].is_object() || s["by_severity"] != nlohmann::json(counts)) {
                problems.push_back("summary.by_severity does not match the findings");
            }
            const int expected = s["execution_error"].get<bool>() ? 1 : counts["Warning"] + counts["Critical"] ? 2 : 0;
            if (s["exit_code"] != expected) problems.push_back("summary.exit_code does not follow from the findings");
        }
    }
    return problems;
}

}  // namespace arrayaudit::report
