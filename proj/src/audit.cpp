#include "arrayaudit/audit.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <variant>

#include "arrayaudit/digest.hpp"
#include "arrayaudit/dupscan.hpp"
#include "arrayaudit/integrity.hpp"
#include "arrayaudit/matchscan.hpp"

namespace arrayaudit::audit {

using nlohmann::json;
using report::Finding;
using report::FindingCode;

std::string_view to_string(InputKind kind) {
    switch (kind) {
        case InputKind::Matrix: return "matrix";
        case InputKind::Roster: return "roster";
        case InputKind::Signature: return "signature";
        case InputKind::Annotation: return "annotation";
        case InputKind::Sensitivity: return "sensitivity";
        case InputKind::Meta: return "meta";
    }
    return "matrix";
}

std::optional<InputKind> parse_input_kind(std::string_view name) {
    for (auto k : {InputKind::Matrix, InputKind::Roster, InputKind::Signature, InputKind::Annotation,
                   InputKind::Sensitivity, InputKind::Meta}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    return std::nullopt;
}

namespace {

enum class ParamType { Input, Number, Integer, String, Bool, Sentinels, Sources };

struct ParamSpec {
    std::string name;
    ParamType type;
    bool required = false;
    std::vector<InputKind> kinds{};
};

struct CheckDef {
    std::string type;
    std::vector<ParamSpec> params;
};

const std::vector<CheckDef>& registry() {
    using K = InputKind;
    using P = ParamType;
    static const std::vector<CheckDef> defs{
        {"duplicates",
         {{"matrix", P::Input, true, {K::Matrix}},
          {"labels", P::Input, false, {K::Matrix, K::Roster}},
          {"threshold", P::Number},
          {"compare_on", P::String}}},
        {"roster", {{"roster", P::Input, true, {K::Roster}}}},
        {"offset",
         {{"reported", P::Input, true, {K::Signature}},
          {"generated", P::Input, true, {K::Signature}},
          {"annotation", P::Input, true, {K::Annotation}},
          {"max_shift", P::Integer}}},
        {"platform", {{"signature", P::Input, true, {K::Signature}}, {"annotation", P::Input, true, {K::Annotation}}}},
        {"sentinel",
         {{"labels", P::Input, true, {K::Matrix, K::Roster}}, {"sentinels", P::Sentinels, true}}},
        {"dose",
         {{"sensitivity", P::Input, true, {K::Sensitivity}},
          {"labels", P::Input, true, {K::Matrix, K::Roster}},
          {"drug", P::String, true},
          {"measure", P::String},
          {"margin", P::Number}}},
        {"flat",
         {{"sensitivity", P::Input, true, {K::Sensitivity}},
          {"drug", P::String, true},
          {"measure", P::String},
          {"epsilon", P::Number}}},
        {"confound",
         {{"meta", P::Input, true, {K::Meta}},
          {"by", P::String},
          {"gap_days", P::Number},
          {"high_threshold", P::Number},
          {"included_only", P::Bool}}},
        {"blocks",
         {{"matrix", P::Input, true, {K::Matrix}},
          {"threshold", P::Number},
          {"min_size", P::Integer},
          {"min_blocks", P::Integer}}},
        {"reuse",
         {{"a", P::Input, true, {K::Matrix}}, {"b", P::Input, true, {K::Matrix}}, {"digits", P::Integer}}},
        {"directions", {{"signature", P::Input, true, {K::Signature}}}},
        {"labeling_flip", {{"sources", P::Sources, true}}},
    };
    return defs;
}

const CheckDef* find_def(const std::string& type) {
    for (const auto& d : registry()) {
        if (d.type == type) {
            return &d;
        }
    }
    return nullptr;
}

std::string kinds_text(const std::vector<InputKind>& kinds) {
    std::string out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        out += (i ? " or " : "") + std::string(to_string(kinds[i]));
    }
    return out;
}

void check_input_ref(const json& value, const std::vector<InputKind>& kinds,
                     const std::map<std::string, InputKind>& declared, const std::string& where,
                     std::vector<std::string>& problems) {
    if (!value.is_string()) {
        problems.push_back(where + " must name an input");
        return;
    }
    auto it = declared.find(value.get<std::string>());
    if (it == declared.end()) {
        problems.push_back(where + " references undeclared input '" + value.get<std::string>() + "'");
    } else if (std::find(kinds.begin(), kinds.end(), it->second) == kinds.end()) {
        problems.push_back(where + " needs a " + kinds_text(kinds) + " input, '" + it->first + "' is a " +
                           std::string(to_string(it->second)));
    }
}

void check_params(const CheckDef& def, const json& params, const std::map<std::string, InputKind>& declared,
                  const std::string& where, std::vector<std::string>& problems) {
    for (const auto& [key, value] : params.items()) {
        if (std::none_of(def.params.begin(), def.params.end(), [&](const ParamSpec& p) { return p.name == key; })) {
            problems.push_back(where + ": unknown parameter '" + key + "' for check '" + def.type + "'");
        }
    }
    for (const auto& p : def.params) {
        const std::string pw = where + "." + p.name;
        if (!params.contains(p.name)) {
            if (p.required) {
                problems.push_back(where + ": missing required parameter '" + p.name + "'");
            }
            continue;
        }
        const json& v = params[p.name];
        switch (p.type) {
            case ParamType::Input: check_input_ref(v, p.kinds, declared, pw, problems); break;
            case ParamType::Number:
                if (!v.is_number()) problems.push_back(pw + " must be a number");
                break;
            case ParamType::Integer:
                if (!v.is_number_integer()) problems.push_back(pw + " must be an integer");
                break;
            case ParamType::String:
                if (!v.is_string()) problems.push_back(pw + " must be a string");
                break;
            case ParamType::Bool:
                if (!v.is_boolean()) problems.push_back(pw + " must be true or false");
                break;
            case ParamType::Sentinels:
                if (!v.is_array()) {
                    problems.push_back(pw + " must be an array");
                    break;
                }
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const auto& s = v[i];
                    const std::string sw = pw + "[" + std::to_string(i) + "]";
                    if (!s.is_object() || !s.contains("sample_id") || !s["sample_id"].is_string() ||
                        !s.contains("expected") || !s["expected"].is_string()) {
                        problems.push_back(sw + " needs string fields sample_id and expected");
                        continue;
                    }
                    if (!parse_group_label(s["expected"].get<std::string>())) {
                        problems.push_back(sw + ".expected is not a label name");
                    }
                    if (s.contains("reason") && !s["reason"].is_string()) {
                        problems.push_back(sw + ".reason must be a string");
                    }
                }
                break;
            case ParamType::Sources:
                if (!v.is_array() || v.empty()) {
                    problems.push_back(pw + " must be a non-empty array");
                    break;
                }
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const auto& s = v[i];
                    const std::string sw = pw + "[" + std::to_string(i) + "]";
                    if (!s.is_object() || !s.contains("roster") || !s.contains("drug") || !s["drug"].is_string()) {
                        problems.push_back(sw + " needs fields roster and drug");
                        continue;
                    }
                    check_input_ref(s["roster"], {InputKind::Roster}, declared, sw + ".roster", problems);
                }
                break;
        }
    }
    if (def.type == "duplicates" && params.contains("compare_on") && params["compare_on"].is_string() &&
        params["compare_on"] != "raw" && params["compare_on"] != "log") {
        problems.push_back(where + ".compare_on must be \"raw\" or \"log\"");
    }
    if (def.type == "confound" && params.contains("by") && params["by"].is_string() && params["by"] != "batch" &&
        params["by"] != "scanner") {
        problems.push_back(where + ".by must be \"batch\" or \"scanner\"");
    }
    if (params.contains("measure") && params["measure"].is_string() &&
        !parse_measure(params["measure"].get<std::string>())) {
        problems.push_back(where + ".measure must be GI50, TGI or LC50");
    }
}

}  // namespace

const std::vector<std::string>& check_types() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& d : registry()) {
            out.push_back(d.type);
        }
        return out;
    }();
    return names;
}

std::vector<std::string> validate_manifest(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        return {std::string("manifest is not valid JSON: ") + e.what()};
    }
    std::vector<std::string> problems;
    if (!doc.is_object()) {
        return {"manifest must be a JSON object"};
    }
    for (const auto& [key, value] : doc.items()) {
        if (key != "schema_version" && key != "inputs" && key != "checks" && key != "output") {
            problems.push_back("unknown top-level key '" + key + "'");
        }
    }
    if (!doc.contains("schema_version") || doc["schema_version"] != std::string(report::kManifestSchemaVersion)) {
        problems.push_back("schema_version must be \"" + std::string(report::kManifestSchemaVersion) + "\"");
    }
    if (doc.contains("output") && !doc["output"].is_string()) {
        problems.push_back("output must be a string");
    }

    std::map<std::string, InputKind> declared;
    if (!doc.contains("inputs") || !doc["inputs"].is_array()) {
        problems.push_back("inputs must be an array");
    } else {
        for (std::size_t i = 0; i < doc["inputs"].size(); ++i) {
            const auto& in = doc["inputs"][i];
            const std::string where = "inputs[" + std::to_string(i) + "]";
            if (!in.is_object()) {
                problems.push_back(where + " must be an object");
                continue;
            }
            for (const auto& [key, value] : in.items()) {
                if (key != "name" && key != "kind" && key != "path" && key != "format") {
                    problems.push_back(where + ": unknown key '" + key + "'");
                }
            }
            if (!in.contains("name") || !in["name"].is_string() || in["name"].get<std::string>().empty() ||
                !in.contains("path") || !in["path"].is_string() || !in.contains("kind") || !in["kind"].is_string()) {
                problems.push_back(where + " needs non-empty string fields name, kind and path");
                continue;
            }
            auto kind = parse_input_kind(in["kind"].get<std::string>());
            if (!kind) {
                problems.push_back(where + ": unknown kind '" + in["kind"].get<std::string>() + "'");
                continue;
            }
            if (in.contains("format")) {
                const auto& f = in["format"];
                if (*kind != InputKind::Matrix) {
                    problems.push_back(where + ": format applies to matrix inputs only");
                } else if (!f.is_object()) {
                    problems.push_back(where + ".format must be an object");
                } else {
                    for (const auto& [key, value] : f.items()) {
                        if (key == "delimiter") {
                            if (value != "tab" && value != "comma" && value != "auto") {
                                problems.push_back(where + ".format.delimiter must be tab, comma or auto");
                            }
                        } else if (key == "label_row") {
                            if (!value.is_boolean()) problems.push_back(where + ".format.label_row must be a bool");
                        } else if (key == "label_row_key" || key == "missing_token") {
                            if (!value.is_string()) problems.push_back(where + ".format." + key + " must be a string");
                        } else {
                            problems.push_back(where + ".format: unknown key '" + key + "'");
                        }
                    }
                }
            }
            if (!declared.emplace(in["name"].get<std::string>(), *kind).second) {
                problems.push_back(where + ": input name '" + in["name"].get<std::string>() + "' is declared twice");
            }
        }
    }

    if (!doc.contains("checks") || !doc["checks"].is_array()) {
        problems.push_back("checks must be an array");
    } else {
        std::set<std::string> ids;
        for (std::size_t i = 0; i < doc["checks"].size(); ++i) {
            const auto& c = doc["checks"][i];
            const std::string where = "checks[" + std::to_string(i) + "]";
            if (!c.is_object() || !c.contains("type") || !c["type"].is_string()) {
                problems.push_back(where + " must be an object with a string type");
                continue;
            }
            for (const auto& [key, value] : c.items()) {
                if (key != "type" && key != "id" && key != "params") {
                    problems.push_back(where + ": unknown key '" + key + "'");
                }
            }
            if (c.contains("id")) {
                if (!c["id"].is_string()) {
                    problems.push_back(where + ".id must be a string");
                } else if (!ids.insert(c["id"].get<std::string>()).second) {
                    problems.push_back(where + ": duplicate check id '" + c["id"].get<std::string>() + "'");
                }
            }
            const auto* def = find_def(c["type"].get<std::string>());
            if (!def) {
                problems.push_back(where + ": unknown check type '" + c["type"].get<std::string>() + "'");
                continue;
            }
            const json params = c.contains("params") ? c["params"] : json::object();
            if (!params.is_object()) {
                problems.push_back(where + ".params must be an object");
                continue;
            }
            check_params(*def, params, declared, where, problems);
        }
    }
    return problems;
}

AuditManifest parse_manifest(std::string_view json_text) {
    auto problems = validate_manifest(json_text);
    if (!problems.empty()) {
        std::string msg = "invalid manifest:";
        for (const auto& p : problems) {
            msg += "\n  " + p;
        }
        throw Error(msg);
    }
    const json doc = json::parse(json_text);
    AuditManifest out;
    for (const auto& in : doc["inputs"]) {
        InputSpec spec;
        spec.name = in["name"].get<std::string>();
        spec.kind = *parse_input_kind(in["kind"].get<std::string>());
        spec.path = in["path"].get<std::string>();
        if (in.contains("format")) {
            const auto& f = in["format"];
            if (f.contains("delimiter") && f["delimiter"] != "auto") {
                spec.delimiter = f["delimiter"] == "tab" ? ingest::Delimiter::Tab : ingest::Delimiter::Comma;
            }
            spec.format.has_label_row = f.value("label_row", false);
            spec.format.label_row_key = f.value("label_row_key", spec.format.label_row_key);
            spec.format.missing_token = f.value("missing_token", spec.format.missing_token);
        }
        out.inputs.push_back(std::move(spec));
    }
    std::size_t index = 0;
    for (const auto& c : doc["checks"]) {
        ++index;
        CheckSpec spec;
        spec.type = c["type"].get<std::string>();
        spec.id = c.contains("id") ? c["id"].get<std::string>() : spec.type + "#" + std::to_string(index);
        spec.params = c.contains("params") ? c["params"] : json::object();
        out.checks.push_back(std::move(spec));
    }
    if (doc.contains("output")) {
        out.output = doc["output"].get<std::string>();
    }
    return out;
}

namespace {

using Loaded = std::variant<LabeledMatrix, LabelRoster, SignatureList, AnnotationIndex, std::vector<SensitivityRecord>,
                            std::vector<SampleMeta>>;

Loaded load_input(const InputSpec& spec, const std::string& text) {
    switch (spec.kind) {
        case InputKind::Matrix: {
            auto fmt = spec.format;
            fmt.delimiter = spec.delimiter.value_or(ingest::sniff_delimiter(text));
            return ingest::parse_matrix(text, fmt);
        }
        case InputKind::Roster: return ingest::parse_roster(text);
        case InputKind::Signature: return ingest::parse_signature(text);
        case InputKind::Annotation: return ingest::parse_annotation(text);
        case InputKind::Sensitivity: return ingest::parse_sensitivity(text);
        case InputKind::Meta: return ingest::parse_sample_meta(text);
    }
    throw Error("unhandled input kind");
}

// First non-Unknown label per roster id.
LabelMap roster_labels(const LabelRoster& roster) {
    LabelMap out;
    for (const auto& e : roster.entries) {
        auto [it, inserted] = out.emplace(e.sample_id, e.label);
        if (!inserted && it->second == GroupLabel::Unknown) {
            it->second = e.label;
        }
    }
    return out;
}

class Context {
public:
    Context(const CheckSpec& check, const std::map<std::string, Loaded>& loaded, std::vector<Finding>& sink)
        : check_(check), loaded_(loaded), sink_(sink) {}

    const json& params() const { return check_.params; }

    template <typename T>
    const T& input(const std::string& param) const {
        return std::get<T>(loaded_.at(params()[param].get<std::string>()));
    }

    const Loaded& input_any(const std::string& name) const { return loaded_.at(name); }

    LabelMap labels(const std::string& param) const {
        const auto& v = loaded_.at(params()[param].get<std::string>());
        if (const auto* m = std::get_if<LabeledMatrix>(&v)) {
            return m->labels;
        }
        return roster_labels(std::get<LabelRoster>(v));
    }

    template <typename T>
    T param_or(const std::string& name, T fallback) const {
        return params().contains(name) ? params()[name].get<T>() : fallback;
    }

    void emit(FindingCode code, Severity severity, std::vector<std::string> subjects,
              std::map<std::string, report::Metric> metrics, std::string message) {
        sink_.push_back({code, severity, check_.id, std::move(subjects), std::move(metrics), std::move(message)});
    }

private:
    const CheckSpec& check_;
    const std::map<std::string, Loaded>& loaded_;
    std::vector<Finding>& sink_;
};

using I = std::int64_t;

void run_duplicates(Context& ctx) {
    const auto& m = ctx.input<LabeledMatrix>("matrix");
    dupscan::DupScanConfig cfg;
    cfg.corr_threshold = ctx.param_or("threshold", cfg.corr_threshold);
    cfg.compare_on = ctx.param_or<std::string>("compare_on", "raw") == "log" ? dupscan::CompareOn::Log
                                                                               : dupscan::CompareOn::Raw;
    const auto comps = dupscan::find_duplicate_columns(m, cfg);
    if (!comps.degenerate.empty()) {
        ctx.emit(FindingCode::DegenerateData, Severity::Warning, comps.degenerate,
                 {{"n_degenerate", static_cast<I>(comps.degenerate.size())}},
                 std::to_string(comps.degenerate.size()) +
                     " zero-variance column(s) were excluded from the duplicate scan");
    }
    if (comps.components.empty()) {
        return;
    }
    std::vector<std::string> members;
    for (const auto& c : comps.components) {
        members.insert(members.end(), c.begin(), c.end());
    }
    std::map<std::string, report::Metric> metrics{
        {"n_columns", static_cast<I>(m.n_samples())},
        {"n_distinct", static_cast<I>(comps.n_distinct)},
        {"n_components", static_cast<I>(comps.components.size())},
        {"threshold", cfg.corr_threshold}};
    for (const auto& [mult, count] : comps.multiplicity_histogram) {
        metrics["multiplicity_" + std::to_string(mult)] = static_cast<I>(count);
    }
    ctx.emit(FindingCode::DupColumns, Severity::Warning, members, std::move(metrics),
             std::to_string(comps.n_distinct) + " distinct samples among " + std::to_string(m.n_samples()) +
                 " columns; " + std::to_string(comps.components.size()) + " group(s) of duplicates");

    const LabelMap labels = ctx.params().contains("labels") ? ctx.labels("labels") : m.labels;
    const auto consistency = dupscan::classify_duplicate_labels(comps, labels);
    for (const auto& comp : consistency.inconsistent) {
        std::map<std::string, report::Metric> lm{{"size", static_cast<I>(comp.members.size())}};
        std::string detail;
        for (const auto& [label, count] : comp.labels) {
            lm["n_" + std::string(to_string(label))] = static_cast<I>(count);
            detail += (detail.empty() ? "" : ", ") + std::to_string(count) + " " + std::string(to_string(label));
        }
        ctx.emit(FindingCode::DupInconsistentLabels, Severity::Critical, comp.members, std::move(lm),
                 "duplicates of one sample carry conflicting labels (" + detail + ")");
    }
}

void run_roster(Context& ctx) {
    const auto& roster = ctx.input<LabelRoster>("roster");
    const auto d = dupscan::roster_duplicates(roster);
    const std::map<std::string, report::Metric> metrics{{"n_entries", static_cast<I>(roster.entries.size())},
                                                        {"n_distinct", static_cast<I>(d.n_distinct)},
                                                        {"n_duplicated", static_cast<I>(d.duplicated_ids.size())},
                                                        {"n_conflicting", static_cast<I>(d.inconsistent_ids.size())}};
    if (!d.duplicated_ids.empty()) {
        ctx.emit(FindingCode::RosterDup, Severity::Warning, d.duplicated_ids, metrics,
                 std::to_string(roster.entries.size()) + " roster entries name " + std::to_string(d.n_distinct) +
                     " distinct samples; " + std::to_string(d.duplicated_ids.size()) + " are listed more than once");
    }
    if (!d.inconsistent_ids.empty()) {
        ctx.emit(FindingCode::RosterConflict, Severity::Critical, d.inconsistent_ids, metrics,
                 std::to_string(d.inconsistent_ids.size()) + " sample(s) are listed with conflicting labels");
    }
}

void emit_platform(Context& ctx, const SignatureList& sig, const AnnotationIndex& ann) {
    const auto absent = matchscan::check_platform_membership(sig, ann);
    if (absent.empty()) {
        return;
    }
    ctx.emit(FindingCode::PlatformMismatch, Severity::Warning, absent,
             {{"n_absent", static_cast<I>(absent.size())}, {"n_signature", static_cast<I>(sig.size())}},
             std::to_string(absent.size()) + " of " + std::to_string(sig.size()) + " signature ids are not on platform " +
                 ann.platform_id());
}

void run_offset(Context& ctx) {
    const auto& reported = ctx.input<SignatureList>("reported");
    const auto& generated = ctx.input<SignatureList>("generated");
    const auto& ann = ctx.input<AnnotationIndex>("annotation");
    const auto r = matchscan::detect_offset(reported, ann, generated, ctx.param_or<int>("max_shift", 3));
    if (r.best_shift != 0) {
        const auto at_zero = r.overlap_by_shift.count(0) ? r.overlap_by_shift.at(0) : 0;
        ctx.emit(FindingCode::OffsetDetected, Severity::Critical, r.outliers,
                 {{"best_shift", static_cast<I>(r.best_shift)},
                  {"overlap_at_best", static_cast<I>(r.overlap_at_best)},
                  {"overlap_at_zero", static_cast<I>(at_zero)},
                  {"n_reported", static_cast<I>(reported.size())},
                  {"n_outliers", static_cast<I>(r.outliers.size())}},
                 "reported ids match the generated list best after a shift of " + std::to_string(r.best_shift) +
                     " row(s): " + std::to_string(r.overlap_at_best) + " of " + std::to_string(reported.size()) +
                     " recovered, against " + std::to_string(at_zero) + " unshifted");
    }
    emit_platform(ctx, reported, ann);
}

void run_platform(Context& ctx) {
    emit_platform(ctx, ctx.input<SignatureList>("signature"), ctx.input<AnnotationIndex>("annotation"));
}

void run_sentinel(Context& ctx) {
    std::vector<integrity::Sentinel> sentinels;
    for (const auto& s : ctx.params()["sentinels"]) {
        sentinels.push_back({s["sample_id"].get<std::string>(), *parse_group_label(s["expected"].get<std::string>()),
                             s.value("reason", std::string())});
    }
    for (const auto& r : integrity::sentinel_check(ctx.labels("labels"), sentinels)) {
        ctx.emit(FindingCode::SentinelViolation, r.severity, {r.sample_id}, {}, r.message);
    }
}

Measure measure_param(const Context& ctx) {
    return *parse_measure(ctx.param_or<std::string>("measure", "GI50"));
}

void run_dose(Context& ctx) {
    const auto& records = ctx.input<std::vector<SensitivityRecord>>("sensitivity");
    const auto drug = ctx.params()["drug"].get<std::string>();
    const auto values = integrity::gather(records, ctx.labels("labels"), drug, measure_param(ctx));
    const auto rev = integrity::check_reversal(values, ctx.param_or("margin", 0.2));
    const std::map<std::string, report::Metric> counts{{"n_sensitive", static_cast<I>(values.sensitive.size())},
                                                       {"n_resistant", static_cast<I>(values.resistant.size())}};
    if (rev.reversed) {
        auto metrics = counts;
        metrics["auc"] = rev.auc;
        ctx.emit(FindingCode::LabelReversal, Severity::Critical, {drug}, std::move(metrics),
                 "lines labeled Sensitive to " + drug + " are less potently inhibited than those labeled Resistant (AUC " +
                     std::to_string(rev.auc) + ")");
        return;
    }
    const auto sep = integrity::check_separation(values);
    if (sep.overlap) {
        auto metrics = counts;
        metrics["misfit_count"] = static_cast<I>(sep.misfit_count);
        metrics["best_threshold"] = sep.best_threshold;
        ctx.emit(FindingCode::SeparationOverlap, Severity::Warning, {drug}, std::move(metrics),
                 "no potency cutoff for " + drug + " reproduces the labels; best cutoff misclassifies " +
                     std::to_string(sep.misfit_count) + " line(s)");
    }
}

void run_flat(Context& ctx) {
    const auto& records = ctx.input<std::vector<SensitivityRecord>>("sensitivity");
    const auto drug = ctx.params()["drug"].get<std::string>();
    const auto values = integrity::gather_all(records, drug, measure_param(ctx));
    const auto r = integrity::check_flat_response(values, ctx.param_or("epsilon", 0.2));
    if (r.flat) {
        ctx.emit(FindingCode::FlatResponse, Severity::Warning, {drug},
                 {{"iqr", r.iqr}, {"range", r.range}, {"n_lines", static_cast<I>(values.size())}},
                 drug + " shows no differential activity across the panel (IQR " + std::to_string(r.iqr) + ")");
    }
}

void run_confound(Context& ctx) {
    const auto& all = ctx.input<std::vector<SampleMeta>>("meta");
    std::vector<SampleMeta> metas;
    const bool included_only = ctx.param_or("included_only", true);
    for (const auto& m : all) {
        if (m.included || !included_only) {
            metas.push_back(m);
        }
    }
    if (metas.empty()) {
        return;
    }
    const auto by = ctx.param_or<std::string>("by", "batch");
    std::vector<std::string> groups, treatments;
    if (by == "batch") {
        const auto gap = std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::duration<double, std::ratio<86400>>(ctx.param_or("gap_days", 7.0)));
        for (int b : integrity::infer_batches(metas, gap)) {
            groups.push_back("batch" + std::to_string(b));
        }
    } else {
        for (const auto& m : metas) {
            groups.push_back(m.scanner_id);
        }
    }
    for (const auto& m : metas) {
        treatments.push_back(m.treatment_arm);
    }
    const std::set<std::string> glevels(groups.begin(), groups.end()), tlevels(treatments.begin(), treatments.end());
    if (glevels.size() < 2 || tlevels.size() < 2) {
        return;
    }
    const auto r = integrity::test_confounding(groups, treatments);
    std::vector<std::string> arms(tlevels.begin(), tlevels.end());
    const std::map<std::string, report::Metric> metrics{{"cramers_v", r.cramers_v},
                                                        {"chi_square", r.chi_square},
                                                        {"n_groups", static_cast<I>(glevels.size())},
                                                        {"n_treatments", static_cast<I>(tlevels.size())},
                                                        {"n_samples", static_cast<I>(metas.size())}};
    const std::string what = by == "batch" ? "processing batch" : "scanner";
    if (r.perfect) {
        ctx.emit(FindingCode::ConfoundPerfect, Severity::Critical, arms, metrics,
                 "treatment arm is perfectly confounded with " + what + " (" + std::to_string(glevels.size()) + " " +
                     (by == "batch" ? "batches" : "scanners") + ", each holding a single arm)");
    } else if (r.cramers_v >= ctx.param_or("high_threshold", 0.5)) {
        ctx.emit(FindingCode::ConfoundHigh, Severity::Warning, arms, metrics,
                 "treatment arm is strongly associated with " + what + " (Cramer's V " + std::to_string(r.cramers_v) +
                     ")");
    }
}

void run_blocks(Context& ctx) {
    const auto& m = ctx.input<LabeledMatrix>("matrix");
    const auto comps = integrity::detect_blocks(m, ctx.param_or("threshold", 0.8));
    const auto min_size = static_cast<std::size_t>(ctx.param_or<I>("min_size", 3));
    std::vector<std::string> members;
    std::size_t n_blocks = 0, largest = 0;
    for (const auto& c : comps) {
        if (c.size() >= min_size) {
            ++n_blocks;
            largest = std::max(largest, c.size());
            members.insert(members.end(), c.begin(), c.end());
        }
    }
    if (n_blocks >= static_cast<std::size_t>(ctx.param_or<I>("min_blocks", 2))) {
        ctx.emit(FindingCode::BlockStructure, Severity::Warning, members,
                 {{"n_blocks", static_cast<I>(n_blocks)}, {"largest_block", static_cast<I>(largest)}},
                 "samples fall into " + std::to_string(n_blocks) + " blocks of high mutual correlation");
    }
}

void run_reuse(Context& ctx) {
    const auto& a = ctx.input<LabeledMatrix>("a");
    const auto& b = ctx.input<LabeledMatrix>("b");
    const int digits = ctx.param_or("digits", 2);
    if (dupscan::matrices_identical(a, b, digits)) {
        const auto na = ctx.params()["a"].get<std::string>(), nb = ctx.params()["b"].get<std::string>();
        ctx.emit(FindingCode::ReusedArtifact, Severity::Critical, {na, nb},
                 {{"digits", static_cast<I>(digits)},
                  {"n_rows", static_cast<I>(a.n_features())},
                  {"n_columns", static_cast<I>(a.n_samples())}},
                 "'" + na + "' and '" + nb + "' hold identical values at " + std::to_string(digits) + " decimals");
    }
}

void run_directions(Context& ctx) {
    const auto conflicts = dupscan::check_signature_directions(ctx.input<SignatureList>("signature"));
    if (!conflicts.empty()) {
        ctx.emit(FindingCode::DirectionConflict, Severity::Warning, conflicts,
                 {{"n_conflicts", static_cast<I>(conflicts.size())}},
                 std::to_string(conflicts.size()) + " signature feature(s) are listed as up in both groups");
    }
}

void run_labeling_flip(Context& ctx) {
    std::vector<dupscan::LabelingSource> sources;
    for (const auto& s : ctx.params()["sources"]) {
        const auto name = s["roster"].get<std::string>();
        sources.push_back({s.value("source", name), s["drug"].get<std::string>(),
                           roster_labels(std::get<LabelRoster>(ctx.input_any(name)))});
    }
    const auto r = dupscan::compare_labelings(sources);
    for (const auto& [drug, flipped] : r.drug_flipped) {
        if (!flipped) {
            continue;
        }
        std::vector<std::string> entities;
        for (const auto& e : r.entities) {
            if (e.drug_id == drug && e.flipped) {
                entities.push_back(e.entity);
            }
        }
        ctx.emit(FindingCode::LabelingFlip, Severity::Critical, entities,
                 {{"n_flipped", static_cast<I>(entities.size())},
                  {"n_sources", static_cast<I>(r.sources_per_drug.at(drug))}},
                 std::to_string(entities.size()) + " line(s) are called Sensitive and Resistant to " + drug +
                     " by different sources");
    }
}

void dispatch(const std::string& type, Context& ctx) {
    static const std::map<std::string, void (*)(Context&)> table{
        {"duplicates", run_duplicates}, {"roster", run_roster},       {"offset", run_offset},
        {"platform", run_platform},     {"sentinel", run_sentinel},   {"dose", run_dose},
        {"flat", run_flat},             {"confound", run_confound},   {"blocks", run_blocks},
        {"reuse", run_reuse},           {"directions", run_directions}, {"labeling_flip", run_labeling_flip},
    };
    table.at(type)(ctx);
}

std::vector<std::string> referenced_inputs(const CheckSpec& check) {
    std::vector<std::string> out;
    const auto* def = find_def(check.type);
    for (const auto& p : def->params) {
        if (!check.params.contains(p.name)) {
            continue;
        }
        if (p.type == ParamType::Input) {
            out.push_back(check.params[p.name].get<std::string>());
        } else if (p.type == ParamType::Sources) {
            for (const auto& s : check.params[p.name]) {
                out.push_back(s["roster"].get<std::string>());
            }
        }
    }
    return out;
}

}  // namespace

AuditRun run_audit(const AuditManifest& manifest, const std::filesystem::path& base_dir) {
    AuditRun run;
    auto& rep = run.report;
    std::map<std::string, Loaded> loaded;

    for (const auto& in : manifest.inputs) {
        std::filesystem::path p(in.path);
        if (p.is_relative()) {
            p = base_dir / p;
        }
        try {
            const std::string text = ingest::read_file(p.string());
            rep.input_digests[in.path] = "sha256:" + sha256_hex(text);
            loaded.emplace(in.name, load_input(in, text));
        } catch (const Error& e) {
            rep.execution_error = true;
            rep.findings.push_back({FindingCode::DegenerateData, Severity::Critical, "input:" + in.name, {in.name},
                                    {}, "input '" + in.name + "' could not be loaded: " + e.what()});
        }
    }

    for (const auto& check : manifest.checks) {
        const auto refs = referenced_inputs(check);
        std::vector<std::string> missing;
        for (const auto& r : refs) {
            if (!loaded.count(r)) {
                missing.push_back(r);
            }
        }
        if (!missing.empty()) {
            rep.findings.push_back({FindingCode::DegenerateData, Severity::Warning, check.id, missing, {},
                                    "check skipped: required input(s) failed to load"});
            continue;
        }
        std::vector<Finding> found;
        Context ctx(check, loaded, found);
        try {
            dispatch(check.type, ctx);
        } catch (const DegenerateDataError& e) {
            found.clear();
            rep.execution_error = true;
            found.push_back({FindingCode::DegenerateData, Severity::Critical, check.id,
                             e.subject().empty() ? refs : std::vector<std::string>{e.subject()}, {},
                             std::string("check failed on degenerate data: ") + e.what()});
        } catch (const Error& e) {
            found.clear();
            rep.execution_error = true;
            found.push_back({FindingCode::DegenerateData, Severity::Critical, check.id, refs, {},
                             std::string("check failed: ") + e.what()});
        }
        rep.findings.insert(rep.findings.end(), found.begin(), found.end());
    }
    run.exit_code = report::exit_code(rep);
    return run;
}

}  // namespace arrayaudit::audit
