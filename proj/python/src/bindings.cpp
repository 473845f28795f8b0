#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>

#include "arrayaudit/audit.hpp"
#include "arrayaudit/dupscan.hpp"
#include "arrayaudit/ingest.hpp"
#include "arrayaudit/report.hpp"
#include "arrayaudit/signature.hpp"

namespace py = pybind11;
using namespace arrayaudit;

namespace {

py::dict run_manifest(const std::filesystem::path& manifest_path) {
    const auto text = ingest::read_file(manifest_path.string());
    audit::AuditRun run;
    {
        py::gil_scoped_release release;
        run = audit::run_audit(audit::parse_manifest(text), manifest_path.parent_path());
    }
    py::dict out;
    out["exit_code"] = run.exit_code;
    out["report"] = report::to_json(run.report);
    out["text"] = report::to_text(run.report);
    return out;
}

// Samples are columns of `values`, as in the matrix files.
py::dict duplicate_columns(py::array_t<double, py::array::c_style | py::array::forcecast> values,
                           std::vector<std::string> sample_ids, double threshold, bool log) {
    if (values.ndim() != 2) throw py::value_error("values must be two-dimensional");
    const auto rows = static_cast<std::size_t>(values.shape(0)), cols = static_cast<std::size_t>(values.shape(1));
    if (sample_ids.empty()) {
        for (std::size_t j = 0; j < cols; ++j) sample_ids.push_back("s" + std::to_string(j));
    }
    if (sample_ids.size() != cols) throw py::value_error("sample_ids length must equal the number of columns");
    std::vector<std::string> features;
    for (std::size_t i = 0; i < rows; ++i) features.push_back("f" + std::to_string(i));
    LabeledMatrix m(std::move(features), std::move(sample_ids),
                    std::vector<double>(values.data(), values.data() + rows * cols));
    dupscan::DupScanConfig cfg;
    cfg.corr_threshold = threshold;
    cfg.compare_on = log ? dupscan::CompareOn::Log : dupscan::CompareOn::Raw;
    const auto d = dupscan::find_duplicate_columns(m, cfg);
    py::dict out;
    out["components"] = d.components;
    out["n_distinct"] = d.n_distinct;
    out["multiplicity"] = d.multiplicity_histogram;
    out["degenerate"] = d.degenerate;
    return out;
}

}  // namespace

PYBIND11_MODULE(_arrayaudit, m) {
    m.doc() = "Integrity checks for labeled expression matrices and derived signatures.";
    m.attr("__version__") = std::string(report::kToolVersion);
    m.attr("REPORT_SCHEMA_VERSION") = std::string(report::kReportSchemaVersion);

    py::register_exception<Error>(m, "AuditError", PyExc_ValueError);

    m.def("run_audit", &run_manifest, py::arg("manifest"),
          "Run every check in a manifest file. Returns exit_code, report (canonical JSON) and text.");
    m.def("validate_manifest", [](const std::string& text) { return audit::validate_manifest(text); },
          py::arg("text"));
    m.def("validate_report", [](const std::string& text) { return report::validate_report_json(text); },
          py::arg("text"));
    m.def("explain", [](const std::string& code) { return report::explain(code); }, py::arg("code"));
    m.def("codes", [] {
        std::vector<std::string> out;
        for (auto c : report::kAllCodes) out.emplace_back(report::to_string(c));
        return out;
    });
    m.def("check_types", [] { return audit::check_types(); });
    m.def("duplicate_columns", &duplicate_columns, py::arg("values"), py::arg("sample_ids") = std::vector<std::string>{},
          py::arg("threshold") = 0.9999, py::arg("log") = false);
    m.def("auc", [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return signature::auc(scores, labels);
    }, py::arg("scores"), py::arg("labels"));
}
