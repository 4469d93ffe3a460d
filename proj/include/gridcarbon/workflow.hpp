#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridcarbon/grid.hpp"
#include "gridcarbon/metrics.hpp"
#include "gridcarbon/shifting.hpp"

namespace gridcarbon {

// Mean / standard deviation / extrema of one intensity metric. Per-bus values
// aggregate over steps; system statistics pool every finite (bus, step)
// sample unweighted. NaN samples are counted and excluded.
struct IntensityStats {
    std::map<int, double> mean;
    std::map<int, double> stddev; // population standard deviation
    double system_mean = 0.0;
    double system_stddev = 0.0;
    double system_min = 0.0;
    double system_max = 0.0;
    std::int64_t samples = 0;
    std::int64_t nan_samples = 0;
};

struct HourlyRecord {
    int step = 0; // 1-based, matching the input series
    double total_load = 0.0;
    double true_emissions = 0.0;
    bool lmce_fallback = false; // degenerate optimum, finite differences used
    MetricSet metrics;
    std::map<Metric, AccountingReport> accounting;
};

struct AccountingStudy {
    std::vector<Metric> metrics;
    std::vector<HourlyRecord> hours;            // successful steps, ascending
    std::vector<int> failed_steps;              // steps whose dispatch failed
    std::map<Metric, IntensityStats> stats;
    std::map<Metric, double> accounted_total;   // summed over successful steps
    double true_total = 0.0;
    double load_total = 0.0;                    // MWh over successful steps
    int lmce_fallback_hours = 0;
};

AccountingStudy run_accounting_study(const Network& base, const ScenarioSeries& series,
                                     const std::vector<Metric>& metrics, int jobs = 1);

// One shifting window (day) under one shift metric.
struct DayRecord {
    int day = 0;        // 1-based
    bool valid = true;  // false: some post-shift hour failed to dispatch
    ShiftPlan plan;
    double estimated_dc = 0.0; // plan scored with pre-shift intensities
    double pre_true = 0.0;     // Eq.-(1) system emissions, nominal profile
    double post_true = 0.0;    // after re-dispatch with the plan
    std::map<Metric, double> pre_dc;      // DC-attributed accounted totals
    std::map<Metric, double> post_dc;
    std::map<Metric, double> pre_system;  // all-load accounted totals
    std::map<Metric, double> post_system;
    int lmce_fallback_hours = 0;
};

// Result of one shifting study: every whole day in the series optimized
// against shift_metric and re-scored under all four accounting metrics.
struct StudyResult {
    Metric shift_metric = Metric::Ace;
    ShiftConfig config;
    std::vector<int> dc_buses;
    std::vector<DayRecord> days; // invalid days kept, excluded from totals
    int skipped_trailing_steps = 0;
    int invalid_days = 0;
    double pre_true_total = 0.0;
    double post_true_total = 0.0;
    double estimated_total = 0.0;
    std::map<Metric, double> pre_dc_total;
    std::map<Metric, double> post_dc_total;
    std::map<Metric, double> pre_system_total;
    std::map<Metric, double> post_system_total;
};

// Precondition: the network's datacenter loads sit at config-consistent
// nominal demand (one per DC bus). Days run in parallel across `jobs`
// workers; results are a deterministic ordered fold.
StudyResult run_shifting_study(const Network& base, const ScenarioSeries& series,
                               Metric shift_metric, const ShiftConfig& config,
                               int jobs = 1);

// [shift][account] -> post-shift minus pre-shift DC accounted emissions.
// All studies must share the same inputs (bus list, day count, config).
std::map<Metric, std::map<Metric, double>>
cross_metric_matrix(const std::vector<StudyResult>& studies);

// Histogram + percentile summary (linear-interpolation percentiles) of
// per-day true-emission deltas.
struct DeltaDistribution {
    std::vector<double> bin_edges; // 21 edges for 20 fixed-width bins
    std::vector<std::int64_t> counts;
    double mean = 0.0;
    double median = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
    std::int64_t samples = 0;
};

DeltaDistribution make_delta_distribution(const std::vector<double>& deltas);
DeltaDistribution daily_delta_distribution(const StudyResult& study);

} // namespace gridcarbon
