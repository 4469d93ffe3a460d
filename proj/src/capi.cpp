#include "gridcarbon.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "gridcarbon/dcopf.hpp"
#include "gridcarbon/errors.hpp"
#include "gridcarbon/grid.hpp"
#include "gridcarbon/io.hpp"
#include "gridcarbon/metrics.hpp"
#include "gridcarbon/workflow.hpp"

using namespace gridcarbon;

struct gc_network {
    Network net;
};

struct gc_series {
    ScenarioSeries series;
};

struct gc_dispatch {
    Network net; // the network actually dispatched (timestep applied)
    DispatchResult result;
};

struct gc_intensities {
    Network net;
    DispatchResult dispatch;
    MetricSet metrics;
};

namespace {

thread_local std::string t_last_error;

gc_status fail(gc_status status, const std::string& message) {
    t_last_error = message;
    return status;
}

// Run f() and translate exceptions into the status taxonomy.
template <typename F>
gc_status guarded(F&& f) {
    try {
        f();
        return GC_OK;
    } catch (const ParseError& e) {
        return fail(GC_ERROR_PARSE, std::string(e.what()) + " (line " +
                                        std::to_string(e.line()) + ", column " +
                                        std::to_string(e.column()) + ")");
    } catch (const ValidationError& e) {
        return fail(GC_ERROR_VALIDATION, e.what());
    } catch (const IoError& e) {
        return fail(GC_ERROR_IO, e.what());
    } catch (const SolveError& e) {
        switch (e.kind()) {
        case SolveFailure::Infeasible:
            return fail(GC_ERROR_INFEASIBLE, e.what());
        case SolveFailure::Unbounded:
            return fail(GC_ERROR_UNBOUNDED, e.what());
        case SolveFailure::Numerical:
            return fail(GC_ERROR_NUMERIC, e.what());
        }
        return fail(GC_ERROR_INTERNAL, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(GC_ERROR_IO, e.what());
    } catch (const InternalError& e) {
        return fail(GC_ERROR_INTERNAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(GC_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GC_ERROR_INTERNAL, e.what());
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        std::string item = text.substr(start, end - start);
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
        start = end + 1;
    }
    return out;
}

const std::vector<Metric>& all_metrics() {
    static const std::vector<Metric> metrics{Metric::Ace, Metric::Lmce, Metric::Almce,
                                             Metric::Lace};
    return metrics;
}

// "all", NULL, or a comma list of metric names -> canonical-order selection.
std::vector<Metric> parse_metric_list(const char* text) {
    if (text == nullptr || std::string(text) == "all" || std::string(text).empty()) {
        return all_metrics();
    }
    bool selected[4] = {false, false, false, false};
    for (const std::string& name : split_list(text)) {
        selected[static_cast<int>(parse_metric(name))] = true;
    }
    std::vector<Metric> out;
    for (Metric m : all_metrics()) {
        if (selected[static_cast<int>(m)]) out.push_back(m);
    }
    if (out.empty()) throw ValidationError("empty metric list");
    return out;
}

std::vector<std::string> parse_format_list(const char* text, const char* fallback,
                                           const std::vector<std::string>& allowed) {
    std::vector<std::string> items = split_list(text != nullptr ? text : fallback);
    if (items.empty()) throw ValidationError("empty format list");
    for (const std::string& f : items) {
        bool ok = false;
        for (const std::string& a : allowed) ok |= f == a;
        if (!ok) throw ValidationError("unknown output format: " + f);
    }
    return items;
}

ScenarioSeries single_step_series() {
    ScenarioSeries series;
    series.timesteps = 1;
    return series;
}

// Re-run the first failed step so its SolveError propagates with the real
// failure kind; used when a study produced no usable hours at all.
[[noreturn]] void rethrow_first_failure(const Network& net, const ScenarioSeries& series,
                                        int step) {
    Network applied = apply_timestep(net, series, step);
    solve_dcopf(applied); // expected to throw
    throw InternalError("step " + std::to_string(step) +
                        " failed during the study but dispatches cleanly alone");
}

std::string case_name_from_path(const char* path) {
    std::filesystem::path p(path);
    std::string stem = p.stem().string();
    return stem.empty() ? p.string() : stem;
}

gc_status check_step(const gc_series* series, int step) {
    if (series == nullptr) {
        if (step != 0) return fail(GC_ERROR_ARGUMENT, "step must be 0 without a series");
    } else if (step < 1 || step > series->series.timesteps) {
        return fail(GC_ERROR_ARGUMENT, "step out of range: " + std::to_string(step));
    }
    return GC_OK;
}

Network applied_network(const gc_network* network, const gc_series* series, int step) {
    if (series == nullptr) return network->net;
    return apply_timestep(network->net, series->series, step);
}

bool valid_metric(gc_metric metric) {
    return metric == GC_METRIC_ACE || metric == GC_METRIC_LMCE || metric == GC_METRIC_ALMCE ||
           metric == GC_METRIC_LACE;
}

Metric to_metric(gc_metric metric) { return static_cast<Metric>(static_cast<int>(metric)); }

} // namespace

extern "C" {

const char* gc_version(void) { return "1.0.0"; }

const char* gc_status_name(gc_status status) {
    switch (status) {
    case GC_OK: return "ok";
    case GC_ERROR_ARGUMENT: return "argument";
    case GC_ERROR_IO: return "io";
    case GC_ERROR_PARSE: return "parse";
    case GC_ERROR_VALIDATION: return "validation";
    case GC_ERROR_INFEASIBLE: return "infeasible";
    case GC_ERROR_UNBOUNDED: return "unbounded";
    case GC_ERROR_NUMERIC: return "numeric";
    case GC_ERROR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* gc_last_error(void) { return t_last_error.c_str(); }

/* ---- network ---- */

gc_status gc_network_load(const char* path, gc_network** out) {
    if (path == nullptr || out == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new gc_network{load_case(path)}; });
}

gc_status gc_network_parse(const char* text, gc_network** out) {
    if (text == nullptr || out == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new gc_network{parse_case(text)}; });
}

void gc_network_free(gc_network* network) { delete network; }

int gc_network_num_buses(const gc_network* network) {
    return network != nullptr ? static_cast<int>(network->net.buses.size()) : 0;
}

int gc_network_num_lines(const gc_network* network) {
    return network != nullptr ? static_cast<int>(network->net.lines.size()) : 0;
}

int gc_network_num_generators(const gc_network* network) {
    return network != nullptr ? static_cast<int>(network->net.generators.size()) : 0;
}

int gc_network_num_loads(const gc_network* network) {
    return network != nullptr ? static_cast<int>(network->net.loads.size()) : 0;
}

gc_status gc_network_add_datacenters(gc_network* network, const int* bus_ids, int count,
                                     double nominal_mw) {
    if (network == nullptr || (bus_ids == nullptr && count > 0) || count < 0) {
        return fail(GC_ERROR_ARGUMENT, "null argument");
    }
    if (!(nominal_mw >= 0.0)) {
        return fail(GC_ERROR_ARGUMENT, "nominal_mw must be non-negative");
    }
    return guarded([&] {
        std::vector<int> buses(bus_ids, bus_ids + count);
        network->net = add_datacenter_loads(network->net, buses, nominal_mw);
    });
}

/* ---- time series ---- */

gc_status gc_series_load(const gc_network* network, const char* path, gc_series** out) {
    if (network == nullptr || path == nullptr || out == nullptr) {
        return fail(GC_ERROR_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] { *out = new gc_series{load_timeseries(path, network->net)}; });
}

gc_status gc_series_parse(const gc_network* network, const char* text, gc_series** out) {
    if (network == nullptr || text == nullptr || out == nullptr) {
        return fail(GC_ERROR_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] { *out = new gc_series{parse_timeseries(text, network->net)}; });
}

void gc_series_free(gc_series* series) { delete series; }

int gc_series_num_steps(const gc_series* series) {
    return series != nullptr ? series->series.timesteps : 0;
}

/* ---- dispatch ---- */

gc_status gc_solve_dispatch(const gc_network* network, const gc_series* series, int step,
                            gc_dispatch** out) {
    if (network == nullptr || out == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    if (gc_status s = check_step(series, step); s != GC_OK) return s;
    *out = nullptr;
    return guarded([&] {
        Network applied = applied_network(network, series, step);
        DispatchResult result = solve_dcopf(applied);
        *out = new gc_dispatch{std::move(applied), std::move(result)};
    });
}

void gc_dispatch_free(gc_dispatch* dispatch) { delete dispatch; }

double gc_dispatch_objective(const gc_dispatch* dispatch) {
    return dispatch != nullptr ? dispatch->result.objective
                               : std::numeric_limits<double>::quiet_NaN();
}

double gc_dispatch_total_emissions(const gc_dispatch* dispatch) {
    return dispatch != nullptr ? total_emissions(dispatch->net, dispatch->result)
                               : std::numeric_limits<double>::quiet_NaN();
}

gc_status gc_dispatch_generation(const gc_dispatch* dispatch, int gen_id, double* out_mw) {
    if (dispatch == nullptr || out_mw == nullptr) {
        return fail(GC_ERROR_ARGUMENT, "null argument");
    }
    auto it = dispatch->result.p_g.find(gen_id);
    if (it == dispatch->result.p_g.end()) {
        return fail(GC_ERROR_ARGUMENT, "unknown generator id: " + std::to_string(gen_id));
    }
    *out_mw = it->second;
    return GC_OK;
}

/* ---- nodal intensities ---- */

gc_status gc_compute_intensities(const gc_network* network, const gc_series* series, int step,
                                 gc_intensities** out) {
    if (network == nullptr || out == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    if (gc_status s = check_step(series, step); s != GC_OK) return s;
    *out = nullptr;
    return guarded([&] {
        Network applied = applied_network(network, series, step);
        DispatchResult dispatch = solve_dcopf(applied);
        MetricSet metrics = compute_all_metrics(applied, dispatch);
        *out = new gc_intensities{std::move(applied), std::move(dispatch), std::move(metrics)};
    });
}

void gc_intensities_free(gc_intensities* intensities) { delete intensities; }

gc_status gc_intensity_value(const gc_intensities* intensities, gc_metric metric, int bus_id,
                             double* out) {
    if (intensities == nullptr || out == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    if (!valid_metric(metric)) return fail(GC_ERROR_ARGUMENT, "unknown metric");
    const IntensityVector& v = intensities->metrics.get(to_metric(metric));
    auto it = v.find(bus_id);
    if (it == v.end()) {
        return fail(GC_ERROR_ARGUMENT, "unknown bus id: " + std::to_string(bus_id));
    }
    *out = it->second;
    return GC_OK;
}

double gc_intensities_true_emissions(const gc_intensities* intensities) {
    return intensities != nullptr ? intensities->metrics.total_emissions
                                  : std::numeric_limits<double>::quiet_NaN();
}

gc_status gc_accounted_total(const gc_intensities* intensities, gc_metric metric, double* out) {
    if (intensities == nullptr || out == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    if (!valid_metric(metric)) return fail(GC_ERROR_ARGUMENT, "unknown metric");
    return guarded([&] {
        AccountingReport report = account(intensities->net, intensities->dispatch,
                                          intensities->metrics.get(to_metric(metric)));
        *out = report.accounted_total;
    });
}

/* ---- batch jobs ---- */

gc_status gc_run_metrics(const gc_metrics_job* job) {
    if (job == nullptr || job->case_path == nullptr || job->out_dir == nullptr) {
        return fail(GC_ERROR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        Network net = load_case(job->case_path);
        ScenarioSeries series = job->series_path != nullptr
                                    ? load_timeseries(job->series_path, net)
                                    : single_step_series();
        std::vector<Metric> metrics = parse_metric_list(job->metrics);
        std::vector<std::string> formats =
            parse_format_list(job->formats, "json,csv", {"json", "csv"});
        int jobs = job->jobs > 0 ? job->jobs : 1;

        AccountingStudy study = run_accounting_study(net, series, metrics, jobs);
        if (study.hours.empty() && !study.failed_steps.empty()) {
            rethrow_first_failure(net, series, study.failed_steps.front());
        }
        write_metrics_outputs(study, net, job->out_dir, formats);
    });
}

gc_status gc_run_study(const gc_study_job* job) {
    if (job == nullptr || job->case_path == nullptr || job->out_dir == nullptr) {
        return fail(GC_ERROR_ARGUMENT, "null argument");
    }
    if (job->dc_buses == nullptr || job->dc_bus_count < 1) {
        return fail(GC_ERROR_ARGUMENT, "a shifting study needs at least one datacenter bus");
    }
    if (!(job->dnom >= 0.0)) return fail(GC_ERROR_ARGUMENT, "dnom must be non-negative");
    if (!(job->eps >= 0.0 && job->eps < 1.0)) {
        return fail(GC_ERROR_ARGUMENT, "eps must lie in [0, 1)");
    }
    return guarded([&] {
        Network net = load_case(job->case_path);
        std::vector<int> buses(job->dc_buses, job->dc_buses + job->dc_bus_count);
        net = add_datacenter_loads(net, buses, job->dnom);

        ScenarioSeries series = job->series_path != nullptr
                                    ? load_timeseries(job->series_path, net)
                                    : single_step_series();
        std::vector<Metric> shift_metrics = parse_metric_list(job->shift_metrics);
        std::vector<Metric> account_metrics = parse_metric_list(job->account_metrics);
        std::vector<std::string> formats =
            parse_format_list(job->formats, "json,csv,svg", {"json", "csv", "svg"});
        ShiftConfig config;
        config.nominal_mw = job->dnom;
        config.epsilon = job->eps;
        config.horizon = job->horizon > 0 ? job->horizon : 24;
        if (series.timesteps < config.horizon) {
            throw ValidationError("series has " + std::to_string(series.timesteps) +
                                  " steps, shorter than one shifting horizon of " +
                                  std::to_string(config.horizon));
        }
        int jobs = job->jobs > 0 ? job->jobs : 1;

        AccountingStudy baseline = run_accounting_study(net, series, account_metrics, jobs);
        if (baseline.hours.empty() && !baseline.failed_steps.empty()) {
            rethrow_first_failure(net, series, baseline.failed_steps.front());
        }

        std::vector<StudyResult> runs;
        for (Metric m : shift_metrics) {
            runs.push_back(run_shifting_study(net, series, m, config, jobs));
        }

        StudyDocument doc =
            build_study_document(net, case_name_from_path(job->case_path), baseline, runs);
        write_study_outputs(doc, job->out_dir, formats);
    });
}

gc_status gc_run_export_plot(const char* study_dir) {
    if (study_dir == nullptr) return fail(GC_ERROR_ARGUMENT, "null argument");
    return guarded([&] {
        std::filesystem::path dir(study_dir);
        StudyDocument doc = study_document_from_json(read_file(dir / "study.json"));
        write_plot_outputs(doc, dir);
    });
}

} // extern "C"
