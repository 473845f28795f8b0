// Writes the bundled audit corpora: corpus/corrupted holds one planted defect
// per check, corpus/clean the same inputs without them.
//
//   make_corpus <out_dir> [seed]

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "arrayaudit/ingest.hpp"
#include "arrayaudit/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace arrayaudit;
using nlohmann::json;

namespace {

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + p.string());
    }
    out << text;
}

json input(const std::string& name, const std::string& kind, const std::string& path, bool label_row = false) {
    json in{{"name", name}, {"kind", kind}, {"path", path}};
    if (label_row) {
        in["format"] = {{"delimiter", "tab"}, {"label_row", true}};
    }
    return in;
}

json check(const std::string& id, const std::string& type, json params) {
    return {{"id", id}, {"type", type}, {"params", std::move(params)}};
}

void make(const fs::path& dir, std::uint64_t seed, bool corrupt) {
    fs::create_directories(dir);
    ingest::MatrixFormat tsv;
    tsv.has_label_row = true;
    ingest::MatrixFormat plain;

    json inputs = json::array(), checks = json::array();

    // Duplicated, inconsistently labeled test columns.
    const auto test_set = corrupt ? synth::doxorubicin_test_set(seed).matrix : synth::distinct_test_set(seed);
    write(dir / "test_set.tsv", ingest::serialize_matrix(test_set, tsv));
    inputs.push_back(input("test_set", "matrix", "test_set.tsv", true));
    checks.push_back(check("test_set_duplicates", "duplicates", {{"matrix", "test_set"}}));

    // Repeated roster entries.
    const auto rosters = corrupt ? synth::doxorubicin_roster(seed) : synth::clean_roster(seed);
    write(dir / "roster.csv", ingest::serialize_roster(rosters.roster));
    inputs.push_back(input("roster", "roster", "roster.csv"));
    checks.push_back(check("roster_entries", "roster", {{"roster", "roster"}}));

    // Gene list displaced by one row.
    const auto sig = synth::cisplatin_signature(seed, corrupt);
    write(dir / "annotation.txt", ingest::serialize_annotation(sig.annotation));
    write(dir / "reported_signature.csv", ingest::serialize_signature(sig.reported));
    write(dir / "generated_signature.csv", ingest::serialize_signature(sig.generated));
    inputs.push_back(input("annotation", "annotation", "annotation.txt"));
    inputs.push_back(input("reported", "signature", "reported_signature.csv"));
    inputs.push_back(input("generated", "signature", "generated_signature.csv"));
    checks.push_back(check("signature_offset", "offset",
                           {{"reported", "reported"}, {"generated", "generated"}, {"annotation", "annotation"}}));

    // Training panel with the resistant control on the wrong side.
    const auto panel = synth::training_panel(seed, corrupt);
    write(dir / "training_panel.tsv", ingest::serialize_matrix(panel, tsv));
    inputs.push_back(input("training", "matrix", "training_panel.tsv", true));
    checks.push_back(check("resistant_control", "sentinel",
                           {{"labels", "training"},
                            {"sentinels", json::array({{{"sample_id", "NCI/ADR-RES"},
                                                        {"expected", "Resistant"},
                                                        {"reason", "selected for doxorubicin resistance"}}})}}));

    // Potency records: one drug with swapped labels, one prodrug-like flat response.
    const auto dose = synth::pemetrexed_dose(seed, corrupt);
    auto records = dose.records;
    const auto other = corrupt ? synth::flat_dose(seed) : synth::spread_dose(seed, "cyclophosphamide");
    records.insert(records.end(), other.begin(), other.end());
    write(dir / "potency.csv", ingest::serialize_sensitivity(records));
    write(dir / "pemetrexed_groups.csv", ingest::serialize_roster(dose.labels));
    inputs.push_back(input("potency", "sensitivity", "potency.csv"));
    inputs.push_back(input("pemetrexed_groups", "roster", "pemetrexed_groups.csv"));
    checks.push_back(check("pemetrexed_orientation", "dose",
                           {{"sensitivity", "potency"}, {"labels", "pemetrexed_groups"}, {"drug", dose.drug}}));
    checks.push_back(check("cyclophosphamide_activity", "flat", {{"sensitivity", "potency"}, {"drug", "cyclophosphamide"}}));

    // Trial arms run in separate batches.
    write(dir / "arrays.csv", ingest::serialize_sample_meta(synth::fec_tet_meta(seed, corrupt)));
    inputs.push_back(input("arrays", "meta", "arrays.csv"));
    checks.push_back(check("arm_by_batch", "confound", {{"meta", "arrays"}, {"by", "batch"}}));
    checks.push_back(check("arm_by_scanner", "confound", {{"meta", "arrays"}, {"by", "scanner"}}));

    // Validation matrix published twice under different names.
    const auto& features = sig.generated.feature_ids;
    const auto cohort = synth::expression_for(seed, features, 24, "pt");
    const auto second = corrupt ? synth::rounded(cohort, 2) : synth::expression_for(seed + 1, features, 24, "pt");
    write(dir / "cohort_a.tsv", ingest::serialize_matrix(cohort, plain));
    write(dir / "cohort_b.tsv", ingest::serialize_matrix(second, plain));
    inputs.push_back(input("cohort_a", "matrix", "cohort_a.tsv"));
    inputs.push_back(input("cohort_b", "matrix", "cohort_b.tsv"));
    checks.push_back(check("cohort_reuse", "reuse", {{"a", "cohort_a"}, {"b", "cohort_b"}}));

    // Gene directions.
    write(dir / "directional_signature.csv", ingest::serialize_signature(synth::direction_signature(corrupt)));
    inputs.push_back(input("directional", "signature", "directional_signature.csv"));
    checks.push_back(check("signature_directions", "directions", {{"signature", "directional"}}));

    // Labelings of the same lines from several sources.
    json sources = json::array();
    for (const auto& src : synth::multi_source_labelings(seed, corrupt)) {
        const auto file = "labels_" + src.source_id + ".csv";
        write(dir / file, ingest::serialize_roster(synth::to_roster(src)));
        inputs.push_back(input(src.source_id, "roster", file));
        sources.push_back({{"roster", src.source_id}, {"drug", src.drug_id}});
    }
    checks.push_back(check("labeling_agreement", "labeling_flip", {{"sources", sources}}));

    json manifest{{"schema_version", "1"}, {"inputs", inputs}, {"checks", checks}, {"output", "report.json"}};
    write(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || argc > 3) {
        std::cerr << "usage: make_corpus <out_dir> [seed]\n";
        return 1;
    }
    try {
        const std::uint64_t seed = argc == 3 ? std::stoull(argv[2]) : 20070901;
        make(fs::path(argv[1]) / "corrupted", seed, true);
        make(fs::path(argv[1]) / "clean", seed, false);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
