#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gridcarbon/grid.hpp"
#include "gridcarbon/workflow.hpp"

namespace gridcarbon {

inline constexpr const char* kSchemaVersion = "1.0";

// Everything a study emits, bundled for serialization. Keeping the network
// geometry and baseline per-bus means inside the document lets plot export
// run without re-reading the case file.
struct StudyDocument {
    std::string case_name;
    std::vector<Metric> account_metrics;
    AccountingStudy baseline;
    std::vector<StudyResult> runs;                       // one per shift metric
    std::map<Metric, std::map<Metric, double>> cross_metric;
    std::map<Metric, DeltaDistribution> daily_delta;     // keyed by shift metric
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::map<int, std::pair<double, double>> layout;     // bus id -> (x, y)
};

StudyDocument build_study_document(const Network& network, const std::string& case_name,
                                   const AccountingStudy& baseline,
                                   const std::vector<StudyResult>& runs);

std::string study_document_to_json(const StudyDocument& doc);
StudyDocument study_document_from_json(const std::string& text);

// cmd_metrics artifacts: intensity_<metric>.csv (one row per step, one
// column per bus) and report.json. formats subset of {json, csv}.
void write_metrics_outputs(const AccountingStudy& study, const Network& network,
                           const std::filesystem::path& out_dir,
                           const std::vector<std::string>& formats);

// cmd_study artifacts: study.json plus flat CSV tables
// (intensity_stats.csv, accounting_totals.csv, shifting_results.csv,
// cross_metric.csv, daily_deltas_<metric>.csv, histogram_<metric>.csv) and,
// with "svg", the plot set from write_plot_outputs.
void write_study_outputs(const StudyDocument& doc, const std::filesystem::path& out_dir,
                         const std::vector<std::string>& formats);

// Histogram SVG per shift metric, a mean-intensity network SVG per
// accounting metric, and a combined 2x2 panel SVG.
void write_plot_outputs(const StudyDocument& doc, const std::filesystem::path& out_dir);

// Write text to path only if the current content differs (byte-stable runs
// still refresh mtimes otherwise). Creates parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace gridcarbon
