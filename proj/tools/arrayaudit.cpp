// Command-line front end: one subcommand per detector, plus manifest-driven
// audit runs. Findings-producing subcommands exit 0 (clean), 2 (findings) or
// 1 (error).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <unistd.h>

#include "CLI11.hpp"
#include "arrayaudit/audit.hpp"
#include "arrayaudit/dupscan.hpp"
#include "arrayaudit/groupsearch.hpp"
#include "arrayaudit/ingest.hpp"
#include "arrayaudit/integrity.hpp"
#include "arrayaudit/matchscan.hpp"
#include "arrayaudit/report.hpp"
#include "arrayaudit/signature.hpp"
#include "arrayaudit/transform.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace arrayaudit;
using nlohmann::json;

namespace {

struct MatrixOpts {
    bool label_row = false;
    std::string missing = "NA";
};

LabeledMatrix load_matrix(const std::string& path, const MatrixOpts& o) {
    const auto text = ingest::read_file(path);
    ingest::MatrixFormat fmt;
    fmt.delimiter = ingest::sniff_delimiter(text);
    fmt.has_label_row = o.label_row;
    fmt.missing_token = o.missing;
    return ingest::parse_matrix(text, fmt);
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << text;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Single-check audit through the same machinery as `report run`.
struct QuickAudit {
    audit::AuditManifest manifest;
    bool json_out = false;

    void input(const std::string& name, audit::InputKind kind, const std::string& path, bool label_row = false) {
        audit::InputSpec in;
        in.name = name;
        in.kind = kind;
        in.path = path;
        in.format.has_label_row = label_row;
        manifest.inputs.push_back(std::move(in));
    }

    void check(const std::string& type, json params) {
        manifest.checks.push_back({type, type, std::move(params)});
    }

    int run() const {
        auto result = audit::run_audit(manifest, fs::current_path());
        if (json_out) {
            std::cout << report::to_json(result.report);
        } else {
            std::cout << report::to_text(result.report);
        }
        return result.exit_code;
    }
};

std::map<std::string, std::string> label_strings(const LabelMap& labels) {
    std::map<std::string, std::string> out;
    for (const auto& [id, l] : labels) {
        out[id] = std::string(to_string(l));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arrayaudit: forensic checks for labeled expression matrices and the signatures built on them"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("arrayaudit ") + std::string(report::kToolVersion) +
                                          " (report schema " + std::string(report::kReportSchemaVersion) +
                                          ", manifest schema " + std::string(report::kManifestSchemaVersion) + ")");

    int exit_code = 0;
    MatrixOpts mopts;
    auto add_matrix_opts = [&](CLI::App* cmd) {
        cmd->add_flag("--label-row", mopts.label_row, "Matrix files carry a label row after the header");
        cmd->add_option("--missing", mopts.missing, "Token for missing values")->capture_default_str();
    };

    // ---- audit ----
    auto* audit_cmd = app.add_subcommand("audit", "Single integrity checks");
    audit_cmd->require_subcommand(1);
    QuickAudit qa;
    auto add_json = [&](CLI::App* cmd) { cmd->add_flag("--json", qa.json_out, "Print the JSON report"); };

    std::string matrix_path, labels_path;
    double threshold = 0.9999;
    bool use_log = false;
    auto* dup = audit_cmd->add_subcommand("dup", "Duplicate columns and label consistency");
    dup->add_option("--matrix", matrix_path, "Matrix file")->required()->check(CLI::ExistingFile);
    dup->add_option("--threshold", threshold, "Correlation threshold")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    dup->add_flag("--log", use_log, "Compare log-transformed values");
    dup->add_option("--labels", labels_path, "Roster overriding the matrix labels")->check(CLI::ExistingFile);
    add_matrix_opts(dup);
    add_json(dup);
    dup->callback([&] {
        qa.input("matrix", audit::InputKind::Matrix, matrix_path, mopts.label_row);
        json p{{"matrix", "matrix"}, {"threshold", threshold}, {"compare_on", use_log ? "log" : "raw"}};
        if (!labels_path.empty()) {
            qa.input("labels", audit::InputKind::Roster, labels_path);
            p["labels"] = "labels";
        }
        qa.check("duplicates", p);
        exit_code = qa.run();
    });

    std::string roster_path;
    auto* roster = audit_cmd->add_subcommand("roster", "Repeated and conflicting roster entries");
    roster->add_option("--roster", roster_path, "Roster file")->required()->check(CLI::ExistingFile);
    add_json(roster);
    roster->callback([&] {
        qa.input("roster", audit::InputKind::Roster, roster_path);
        qa.check("roster", {{"roster", "roster"}});
        exit_code = qa.run();
    });

    std::string a_path, b_path;
    auto* crosstab = audit_cmd->add_subcommand("crosstab", "Cross-tabulate two rosters over shared samples");
    crosstab->add_option("--a", a_path, "Roster for the rows")->required()->check(CLI::ExistingFile);
    crosstab->add_option("--b", b_path, "Roster for the columns")->required()->check(CLI::ExistingFile);
    crosstab->callback([&] {
        const auto a = dupscan::collapse_roster(ingest::parse_roster(ingest::read_file(a_path)));
        const auto b = dupscan::collapse_roster(ingest::parse_roster(ingest::read_file(b_path)));
        const auto t = dupscan::cross_tabulate(a, b);
        std::cout << "a\\b";
        for (auto c : t.col_levels) std::cout << '\t' << dupscan::to_string(c);
        std::cout << "\ttotal\n";
        for (std::size_t i = 0; i < t.row_levels.size(); ++i) {
            std::cout << dupscan::to_string(t.row_levels[i]);
            for (auto n : t.counts[i]) std::cout << '\t' << n;
            std::cout << '\t' << t.row_margins[i] << '\n';
        }
        std::cout << "total";
        for (auto n : t.col_margins) std::cout << '\t' << n;
        std::cout << '\t' << t.total << '\n';
        if (!t.only_in_a.empty() || !t.only_in_b.empty()) {
            std::cout << "# " << t.only_in_a.size() << " sample(s) only in a, " << t.only_in_b.size()
                      << " only in b\n";
        }
    });

    std::string reported_path, generated_path, annotation_path;
    int max_shift = 3;
    auto* offset = audit_cmd->add_subcommand("offset", "Row offsets between a reported and a generated gene list");
    offset->add_option("--reported", reported_path, "Reported signature")->required()->check(CLI::ExistingFile);
    offset->add_option("--generated", generated_path, "Signature regenerated from data")->required()->check(
        CLI::ExistingFile);
    offset->add_option("--annotation", annotation_path, "Platform annotation")->required()->check(CLI::ExistingFile);
    offset->add_option("--max-shift", max_shift, "Largest shift tried")->capture_default_str()->check(
        CLI::NonNegativeNumber);
    add_json(offset);
    offset->callback([&] {
        const auto r = matchscan::detect_offset(ingest::parse_signature(ingest::read_file(reported_path)),
                                                ingest::parse_annotation(ingest::read_file(annotation_path)),
                                                ingest::parse_signature(ingest::read_file(generated_path)), max_shift);
        if (!qa.json_out) {
            std::cout << "shift\toverlap\n";
            for (const auto& [s, n] : r.overlap_by_shift) std::cout << s << '\t' << n << '\n';
        }
        qa.input("reported", audit::InputKind::Signature, reported_path);
        qa.input("generated", audit::InputKind::Signature, generated_path);
        qa.input("annotation", audit::InputKind::Annotation, annotation_path);
        qa.check("offset", {{"reported", "reported"}, {"generated", "generated"}, {"annotation", "annotation"},
                            {"max_shift", max_shift}});
        exit_code = qa.run();
    });

    std::string records_path, drug, measure = "GI50";
    double margin = 0.2, epsilon = 0.2;
    bool invert = false;
    auto* dose = audit_cmd->add_subcommand("dose", "Label orientation, cutoff separation and flat response");
    dose->add_option("--records", records_path, "Sensitivity records")->required()->check(CLI::ExistingFile);
    dose->add_option("--labels", labels_path, "Roster of line labels")->required()->check(CLI::ExistingFile);
    dose->add_option("--drug", drug, "Drug id")->required();
    dose->add_option("--measure", measure, "GI50, TGI or LC50")->capture_default_str()->check(
        CLI::IsMember({"GI50", "TGI", "LC50"}));
    dose->add_option("--margin", margin, "Reversal margin in AUC units")->capture_default_str();
    dose->add_option("--epsilon", epsilon, "IQR below which the response is flat")->capture_default_str();
    dose->add_flag("--invert", invert, "Values are molar concentrations; convert to -log10");
    add_json(dose);
    dose->callback([&] {
        std::string path = records_path;
        fs::path tmp;
        if (invert) {
            auto recs = ingest::parse_sensitivity(ingest::read_file(records_path));
            for (auto& r : recs) {
                if (!(r.value > 0)) {
                    throw Error("--invert needs positive concentrations; '" + r.cell_line + "' has " + fmt(r.value));
                }
                r.value = -std::log10(r.value);
            }
            tmp = fs::temp_directory_path() / ("arrayaudit_dose_" + std::to_string(::getpid()) + ".csv");
            write_text(tmp.string(), ingest::serialize_sensitivity(recs));
            path = tmp.string();
        }
        qa.input("records", audit::InputKind::Sensitivity, path);
        qa.input("labels", audit::InputKind::Roster, labels_path);
        qa.check("dose", {{"sensitivity", "records"}, {"labels", "labels"}, {"drug", drug}, {"measure", measure},
                          {"margin", margin}});
        qa.manifest.checks.push_back(
            {"flat", "flat", {{"sensitivity", "records"}, {"drug", drug}, {"measure", measure}, {"epsilon", epsilon}}});
        exit_code = qa.run();
        if (!tmp.empty()) {
            fs::remove(tmp);
        }
    });

    std::string meta_path;
    double gap_days = 7, high = 0.5;
    bool all_samples = false;
    auto* confound = audit_cmd->add_subcommand("confound", "Treatment arm against run batch and scanner");
    confound->add_option("--meta", meta_path, "Sample metadata")->required()->check(CLI::ExistingFile);
    confound->add_option("--gap-days", gap_days, "Gap that starts a new batch")->capture_default_str();
    confound->add_option("--high", high, "Cramer's V reported as high")->capture_default_str();
    confound->add_flag("--all", all_samples, "Include arrays marked as excluded");
    add_json(confound);
    confound->callback([&] {
        const auto metas = ingest::parse_sample_meta(ingest::read_file(meta_path));
        if (!qa.json_out) {
            std::vector<SampleMeta> used;
            for (const auto& m : metas) {
                if (m.included || all_samples) used.push_back(m);
            }
            const auto batches = integrity::infer_batches(
                used, std::chrono::duration_cast<std::chrono::seconds>(
                          std::chrono::duration<double, std::ratio<86400>>(gap_days)));
            std::map<int, std::map<std::string, int>> table;
            for (std::size_t i = 0; i < used.size(); ++i) ++table[batches[i]][used[i].treatment_arm];
            for (const auto& [b, arms] : table) {
                std::cout << "batch" << b << ':';
                for (const auto& [arm, n] : arms) std::cout << ' ' << arm << '=' << n;
                std::cout << '\n';
            }
        }
        qa.input("meta", audit::InputKind::Meta, meta_path);
        for (const char* by : {"batch", "scanner"}) {
            qa.manifest.checks.push_back({std::string("confound_") + by, "confound",
                                          {{"meta", "meta"}, {"by", by}, {"gap_days", gap_days},
                                           {"high_threshold", high}, {"included_only", !all_samples}}});
        }
        exit_code = qa.run();
    });

    // ---- match ----
    auto* match = app.add_subcommand("match", "Identify unlabeled rows or columns against a reference");
    match->require_subcommand(1);
    std::string query_path, reference_path, pipeline_spec;
    double min_corr = 0.999;
    auto run_match = [&](bool rows) {
        const auto query = load_matrix(query_path, mopts);
        auto reference = load_matrix(reference_path, mopts);
        if (!pipeline_spec.empty()) {
            reference = transform::apply_pipeline(reference, transform::parse_pipeline(pipeline_spec));
        }
        const auto r = rows ? matchscan::match_rows(query, reference, min_corr)
                            : matchscan::match_columns(query, reference, min_corr);
        const auto& qids = rows ? query.feature_ids : query.sample_ids;
        const auto& rids = rows ? reference.feature_ids : reference.sample_ids;
        std::cout << "query_id\treference_id\tstatus\n";
        std::set<std::size_t> ambiguous(r.ambiguous.begin(), r.ambiguous.end());
        std::set<std::size_t> degenerate(r.degenerate.begin(), r.degenerate.end());
        for (std::size_t i = 0; i < qids.size(); ++i) {
            std::cout << qids[i] << '\t';
            if (r.mapping[i]) {
                std::cout << rids[*r.mapping[i]] << "\tmatched\n";
            } else if (ambiguous.count(i)) {
                std::string hits;
                for (auto h : r.hits[i]) hits += (hits.empty() ? "" : ";") + rids[h];
                std::cout << hits << "\tambiguous\n";
            } else {
                std::cout << "\t" << (degenerate.count(i) ? "degenerate" : "unmatched") << '\n';
            }
        }
        std::cerr << r.stats.matched << " matched, " << r.stats.ambiguous << " ambiguous, " << r.stats.unmatched
                  << " unmatched (" << r.stats.degenerate << " degenerate)\n";
    };
    for (bool rows : {true, false}) {
        auto* cmd = match->add_subcommand(rows ? "rows" : "columns", rows ? "Match rows" : "Match columns");
        cmd->add_option("--query", query_path, "Unlabeled matrix")->required()->check(CLI::ExistingFile);
        cmd->add_option("--reference", reference_path, "Reference matrix")->required()->check(CLI::ExistingFile);
        cmd->add_option("--pipeline", pipeline_spec, "Pipeline applied to the reference, e.g. log:e|zscore:n-1");
        cmd->add_option("--min-corr", min_corr, "Correlation cutoff")->capture_default_str();
        add_matrix_opts(cmd);
        cmd->callback([&, rows] { run_match(rows); });
    }

    // ---- search ----
    auto* search = app.add_subcommand("search", "Reconstruct group assignments");
    search->require_subcommand(1);
    std::string panel_path, target_path, start_path, trace_path;
    std::size_t k = 45;
    auto* groups = search->add_subcommand("groups", "Steepest ascent over line assignments");
    groups->add_option("--panel", panel_path, "Panel matrix (features x lines)")->required()->check(
        CLI::ExistingFile);
    groups->add_option("--target", target_path, "Reported gene list")->required()->check(CLI::ExistingFile);
    groups->add_option("--k", k, "Genes generated per assignment")->capture_default_str();
    groups->add_option("--start", start_path, "Roster with the starting labels")->required()->check(
        CLI::ExistingFile);
    groups->add_option("--trace", trace_path, "Write the trajectory as JSON");
    add_matrix_opts(groups);
    groups->callback([&] {
        const auto panel = load_matrix(panel_path, mopts);
        const auto target = ingest::parse_signature(ingest::read_file(target_path));
        LabelMap start_labels;
        for (const auto& e : ingest::parse_roster(ingest::read_file(start_path)).entries) {
            start_labels[e.sample_id] = e.label;
        }
        const auto start = groupsearch::assignment_from_labels(panel, start_labels);
        const auto r = groupsearch::steepest_ascent(start, panel, target, k);
        std::cout << "start score " << r.start_score << '\n';
        for (const auto& m : r.trajectory) {
            std::cout << m.line_id << ": " << groupsearch::to_string(m.from) << " -> " << groupsearch::to_string(m.to)
                      << "  score " << m.score << '\n';
        }
        std::cout << "final score " << r.final_score << (r.budget_exceeded ? " (move budget exceeded)" : "") << '\n';
        if (!trace_path.empty()) {
            json t;
            t["start_score"] = r.start_score;
            t["final_score"] = r.final_score;
            t["budget_exceeded"] = r.budget_exceeded;
            t["neighbors_per_step"] = r.neighbors_per_step;
            t["moves"] = json::array();
            for (const auto& m : r.trajectory) {
                t["moves"].push_back({{"line", m.line_id},
                                      {"from", groupsearch::to_string(m.from)},
                                      {"to", groupsearch::to_string(m.to)},
                                      {"score", m.score}});
            }
            json fin = json::object();
            for (std::size_t c = 0; c < panel.n_samples(); ++c) {
                fin[panel.sample_ids[c]] = groupsearch::to_string(r.final_assignment[c]);
            }
            t["final_assignment"] = fin;
            write_text(trace_path, t.dump(2) + "\n");
        }
    });

    // ---- signature ----
    auto* sig = app.add_subcommand("signature", "Gene selection, metagene scores and probit prediction");
    sig->require_subcommand(1);
    auto* derive = sig->add_subcommand("derive", "Top-k genes by |t| between Sensitive and Resistant");
    derive->add_option("--matrix", matrix_path, "Labeled matrix")->required()->check(CLI::ExistingFile);
    derive->add_option("--k", k, "Number of genes")->required();
    add_matrix_opts(derive);
    derive->callback([&] {
        mopts.label_row = true;
        const auto m = load_matrix(matrix_path, mopts);
        std::cout << ingest::serialize_signature(signature::select_top_genes(m, k));
    });

    std::string train_path, test_path, out_path = "-";
    auto* predict = sig->add_subcommand("predict", "Metagene + probit scores for a test matrix");
    predict->add_option("--train", train_path, "Labeled training matrix")->required()->check(CLI::ExistingFile);
    predict->add_option("--test", test_path, "Test matrix")->required()->check(CLI::ExistingFile);
    predict->add_option("--k", k, "Number of genes")->required();
    predict->add_option("--out", out_path, "Output CSV (sample_id,score,probability)")->capture_default_str();
    predict->callback([&] {
        MatrixOpts train_opts = mopts;
        train_opts.label_row = true;
        const auto train = load_matrix(train_path, train_opts);
        const auto test = load_matrix(test_path, MatrixOpts{});
        const auto genes = signature::select_top_genes(train, k);
        const auto sub = extract_submatrix(train, genes, std::set<GroupLabel>{GroupLabel::Sensitive, GroupLabel::Resistant});
        const auto fit = signature::metagene_scores(sub.matrix);
        std::vector<int> y;
        for (const auto& id : sub.matrix.sample_ids) y.push_back(sub.matrix.label_of(id) == GroupLabel::Sensitive);
        const auto model = signature::fit_probit(fit.scores, y);
        const auto test_scores = signature::project(fit.model, test);
        std::vector<double> prob;
        if (model.separated) {
            // No finite MLE: report the hard split on the side the Sensitive lines fall.
            double mean1 = 0, mean0 = 0, n1 = 0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                (y[i] ? mean1 : mean0) += fit.scores[i];
                n1 += y[i];
            }
            const bool up = mean1 / n1 > mean0 / (static_cast<double>(y.size()) - n1);
            for (double s : test_scores) prob.push_back((s > *model.separating_threshold) == up ? 1.0 : 0.0);
            std::cerr << "training groups are perfectly separated at score " << fmt(*model.separating_threshold)
                      << "; probabilities are 0/1\n";
        } else {
            prob = signature::predict_prob(model, test_scores);
        }
        std::string csv = "sample_id,score,probability\n";
        char buf[96];
        for (std::size_t i = 0; i < test.n_samples(); ++i) {
            std::snprintf(buf, sizeof buf, ",%.10g,%.10g\n", test_scores[i], prob[i]);
            csv += test.sample_ids[i] + buf;
        }
        write_text(out_path, csv);
    });

    // ---- roc ----
    std::string scores_path, positive = "Sensitive";
    bool print_curve = false;
    auto* roc = app.add_subcommand("roc", "ROC curve and AUC of scores against labels");
    roc->add_option("--scores", scores_path, "CSV with a header: sample_id then score column(s); the first is used")
        ->required()
        ->check(CLI::ExistingFile);
    roc->add_option("--labels", labels_path, "Roster of true labels")->required()->check(CLI::ExistingFile);
    roc->add_option("--positive", positive, "Label counted as positive")->capture_default_str()->check(
        CLI::IsMember({"Sensitive", "Resistant"}));
    roc->add_flag("--curve", print_curve, "Print the curve points");
    roc->callback([&] {
        const auto table = ingest::parse_numeric_table(ingest::read_file(scores_path));
        LabelMap labels;
        for (const auto& e : ingest::parse_roster(ingest::read_file(labels_path)).entries) labels[e.sample_id] = e.label;
        const auto pos = *parse_group_label(positive);
        const auto neg = pos == GroupLabel::Sensitive ? GroupLabel::Resistant : GroupLabel::Sensitive;
        std::vector<double> s;
        std::vector<int> y;
        for (std::size_t i = 0; i < table.row_ids.size(); ++i) {
            auto it = labels.find(table.row_ids[i]);
            if (it == labels.end() || (it->second != pos && it->second != neg)) continue;
            s.push_back(table.rows[i][0]);
            y.push_back(it->second == pos);
        }
        const auto frac = signature::auc_fraction(s, y);
        std::cout << "n=" << s.size() << " AUC=" << fmt(signature::auc(s, y)) << " (" << frac.numerator << "/"
                  << frac.denominator << ")\n";
        if (print_curve) {
            std::cout << "fpr\ttpr\n";
            for (const auto& p : signature::roc_curve(s, y)) std::cout << fmt(p.fpr) << '\t' << fmt(p.tpr) << '\n';
        }
    });

    // ---- combo ----
    std::string rule_name, inputs_path;
    bool batch_normalize = false;
    auto* combo = app.add_subcommand("combo", "Combine per-drug probabilities into a regimen score");
    combo->add_option("--rule", rule_name, "tfac, tet or fec")->required()->check(CLI::IsMember({"tfac", "tet", "fec"}));
    combo->add_option("--inputs", inputs_path, "CSV: sample_id then one column per drug key (T,F,A,C,E)")
        ->required()
        ->check(CLI::ExistingFile);
    combo->add_flag("--batch-normalize", batch_normalize, "Rescale tfac scores over the whole file (min 0, max 1)");
    combo->callback([&] {
        const auto rule = *integrity::parse_rule(rule_name);
        const auto table = ingest::parse_numeric_table(ingest::read_file(inputs_path));
        std::vector<std::map<std::string, double>> rows;
        for (const auto& r : table.rows) {
            std::map<std::string, double> m;
            for (std::size_t j = 0; j < table.columns.size(); ++j) m[table.columns[j]] = r[j];
            rows.push_back(std::move(m));
        }
        std::vector<integrity::CombinedScore> scores;
        if (batch_normalize) {
            scores = integrity::combine_batch(rows, rule);
        } else {
            for (const auto& r : rows) scores.push_back(integrity::combine_probabilities(r, rule));
        }
        std::cout << "sample_id,raw,score\n";
        for (std::size_t i = 0; i < scores.size(); ++i) {
            std::cout << table.row_ids[i] << ',' << fmt(scores[i].raw) << ',' << fmt(scores[i].score) << '\n';
        }
    });

    // ---- report ----
    auto* rep = app.add_subcommand("report", "Manifest-driven audits");
    rep->require_subcommand(1);
    std::string manifest_path, report_out;
    bool quiet = false;
    auto* run = rep->add_subcommand("run", "Run every check of a manifest and write the findings report");
    run->add_option("--manifest", manifest_path, "Manifest JSON")->required();
    run->add_option("--out", report_out, "Report path ('-' for stdout); defaults to the manifest's output");
    run->add_flag("--quiet", quiet, "Do not print the text summary");
    run->callback([&] {
        std::string text;
        try {
            text = ingest::read_file(manifest_path);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            exit_code = 1;
            return;
        }
        const auto manifest = audit::parse_manifest(text);
        const auto base = fs::absolute(manifest_path).parent_path();
        const auto result = audit::run_audit(manifest, base);
        const auto json_text = report::to_json(result.report);
        std::string target = report_out;
        if (target.empty() && manifest.output) {
            fs::path p(*manifest.output);
            target = (p.is_relative() ? base / p : p).string();
        }
        if (!target.empty()) {
            write_text(target, json_text);
        }
        if (!quiet) {
            (target == "-" ? std::cerr : std::cout) << report::to_text(result.report);
        }
        exit_code = result.exit_code;
    });

    std::string report_path;
    auto* validate = rep->add_subcommand("validate", "Check a manifest or a report against its schema");
    validate->add_option("--manifest", manifest_path, "Manifest JSON")->check(CLI::ExistingFile);
    validate->add_option("--report", report_path, "Report JSON")->check(CLI::ExistingFile);
    validate->callback([&] {
        std::vector<std::string> problems;
        if (!manifest_path.empty()) {
            for (auto& p : audit::validate_manifest(ingest::read_file(manifest_path))) problems.push_back("manifest: " + p);
        }
        if (!report_path.empty()) {
            for (auto& p : report::validate_report_json(ingest::read_file(report_path))) problems.push_back("report: " + p);
        }
        if (manifest_path.empty() && report_path.empty()) {
            throw CLI::ValidationError("give --manifest and/or --report");
        }
        for (const auto& p : problems) std::cerr << p << '\n';
        std::cout << (problems.empty() ? "valid\n" : "invalid\n");
        exit_code = problems.empty() ? 0 : 1;
    });

    // ---- explain ----
    std::string code;
    bool list_all = false;
    auto* explain = app.add_subcommand("explain", "Describe a finding code");
    explain->add_option("code", code, "Finding code, e.g. DUP_COLUMNS");
    explain->add_flag("--all", list_all, "Describe every code");
    explain->callback([&] {
        if (list_all) {
            for (auto c : report::kAllCodes) {
                std::cout << report::to_string(c) << "\n  " << report::explain(c) << "\n\n";
            }
            return;
        }
        if (code.empty()) {
            throw CLI::ValidationError("give a code or --all");
        }
        std::cout << report::explain(code) << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
