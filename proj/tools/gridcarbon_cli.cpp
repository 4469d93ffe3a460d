// Command-line front end for the gridcarbon engine. Only the public C API is
// used here; everything interesting happens behind gridcarbon.h.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridcarbon.h"

namespace {

// 0 = success, 1 = input error, 2 = solve or internal failure.
int exit_code_for(gc_status status) {
    switch (status) {
    case GC_OK:
        return 0;
    case GC_ERROR_ARGUMENT:
    case GC_ERROR_IO:
    case GC_ERROR_PARSE:
    case GC_ERROR_VALIDATION:
        return 1;
    case GC_ERROR_INFEASIBLE:
    case GC_ERROR_UNBOUNDED:
    case GC_ERROR_NUMERIC:
    case GC_ERROR_INTERNAL:
        return 2;
    }
    return 2;
}

int report(gc_status status) {
    if (status == GC_OK) return 0;
    std::fprintf(stderr, "gridcarbon: error (%s): %s\n", gc_status_name(status),
                 gc_last_error());
    return exit_code_for(status);
}

struct MetricsArgs {
    std::string case_path;
    std::string series_path;
    std::string metrics = "all";
    std::string out_dir = ".";
    std::string formats = "json,csv";
    int jobs = 1;
};

struct StudyArgs {
    std::string case_path;
    std::string series_path;
    std::vector<int> dc_buses;
    double dnom = 250.0;
    double eps = 0.2;
    int horizon = 24;
    std::string shift_metrics = "all";
    std::string account_metrics = "all";
    std::string out_dir = ".";
    std::string formats = "json,csv,svg";
    int jobs = 1;
};

int run_metrics(const MetricsArgs& args) {
    gc_metrics_job job{};
    job.case_path = args.case_path.c_str();
    job.series_path = args.series_path.empty() ? nullptr : args.series_path.c_str();
    job.out_dir = args.out_dir.c_str();
    job.formats = args.formats.c_str();
    job.metrics = args.metrics.c_str();
    job.jobs = args.jobs;
    return report(gc_run_metrics(&job));
}

int run_study(const StudyArgs& args) {
    gc_study_job job{};
    job.case_path = args.case_path.c_str();
    job.series_path = args.series_path.empty() ? nullptr : args.series_path.c_str();
    job.out_dir = args.out_dir.c_str();
    job.formats = args.formats.c_str();
    job.shift_metrics = args.shift_metrics.c_str();
    job.account_metrics = args.account_metrics.c_str();
    job.dc_buses = args.dc_buses.data();
    job.dc_bus_count = static_cast<int>(args.dc_buses.size());
    job.dnom = args.dnom;
    job.eps = args.eps;
    job.horizon = args.horizon;
    job.jobs = args.jobs;
    return report(gc_run_study(&job));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power-grid carbon accounting: nodal intensity metrics and "
                 "load-shifting studies over DC optimal power flow"};
    app.set_version_flag("--version", std::string("gridcarbon ") + gc_version());
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 1 input error, 2 solve failure.");

    MetricsArgs margs;
    CLI::App* metrics =
        app.add_subcommand("metrics", "Dispatch each timestep and write nodal carbon "
                                      "intensities plus an accounting report");
    metrics->add_option("--case", margs.case_path, "Grid case file (.m)")->required();
    metrics->add_option("--series", margs.series_path,
                        "Time-series CSV (column t, then load:<id> / gen_pmax:<id>); "
                        "omit to evaluate the base case as a single step");
    metrics->add_option("--metric", margs.metrics,
                        "Comma list from {ace,lmce,almce,lace} or 'all'");
    metrics->add_option("--out", margs.out_dir, "Output directory (default: .)");
    metrics->add_option("--format", margs.formats, "Comma list from {json,csv}");
    metrics->add_option("--jobs", margs.jobs, "Parallel dispatch workers (default: 1)");

    StudyArgs sargs;
    CLI::App* study =
        app.add_subcommand("study", "Run a load-shifting study: shift datacenter demand "
                                    "against one or more metrics, re-dispatch, and compare "
                                    "estimated, realized, and true emissions");
    study->add_option("--case", sargs.case_path, "Grid case file (.m)")->required();
    study->add_option("--series", sargs.series_path,
                      "Time-series CSV; omit to run on the base case");
    study->add_option("--dc-buses", sargs.dc_buses, "Comma list of datacenter bus ids")
        ->required()
        ->delimiter(',');
    study->add_option("--dnom", sargs.dnom,
                      "Nominal datacenter demand per bus per step, MW (default: 250)");
    study->add_option("--eps", sargs.eps, "Shifting flexibility in [0,1) (default: 0.2)");
    study->add_option("--horizon", sargs.horizon,
                      "Steps per shifting window (default: 24)");
    study->add_option("--shift-metric", sargs.shift_metrics,
                      "Metrics to shift against: comma list or 'all'");
    study->add_option("--account-metric", sargs.account_metrics,
                      "Metrics to account under: comma list or 'all'");
    study->add_option("--out", sargs.out_dir, "Output directory (default: .)");
    study->add_option("--format", sargs.formats, "Comma list from {json,csv,svg}");
    study->add_option("--jobs", sargs.jobs, "Parallel day workers (default: 1)");

    std::string plot_dir = ".";
    CLI::App* export_plot = app.add_subcommand(
        "export-plot", "Re-render SVG plots from an existing <out>/study.json");
    export_plot->add_option("--out", plot_dir, "Directory holding study.json (default: .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (metrics->parsed()) return run_metrics(margs);
    if (study->parsed()) return run_study(sargs);
    if (export_plot->parsed()) return report(gc_run_export_plot(plot_dir.c_str()));
    return 1;
}
