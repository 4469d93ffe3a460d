#include "gridcarbon/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "gridcarbon/carbonflow.hpp"
#include "gridcarbon/dcopf.hpp"
#include "gridcarbon/errors.hpp"

namespace gridcarbon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<Metric>& all_metrics() {
    static const std::vector<Metric> metrics{Metric::Ace, Metric::Lmce, Metric::Almce,
                                             Metric::Lace};
    return metrics;
}

// Run fn(i) for i in [0, count) across `jobs` workers. Results land in
// index order and the lowest-index exception wins, so the outcome is
// identical to a serial loop.
template <typename Fn>
void parallel_for(int jobs, int count, Fn&& fn) {
    if (count <= 0) return;
    int workers = std::max(1, jobs);
    workers = std::min(workers, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct StatsAccumulator {
    // samples[bus] in step order; usable for per-bus and pooled statistics.
    std::map<int, std::vector<double>> per_bus;

    void add(const IntensityVector& v) {
        for (const auto& [bus, value] : v) per_bus[bus].push_back(value);
    }

    IntensityStats finish() const {
        IntensityStats stats;
        std::vector<double> pooled;
        for (const auto& [bus, samples] : per_bus) {
            double sum = 0.0;
            std::int64_t n = 0;
            for (double s : samples) {
                if (std::isnan(s)) {
                    ++stats.nan_samples;
                    continue;
                }
                sum += s;
                ++n;
                pooled.push_back(s);
            }
            double mean = n > 0 ? sum / static_cast<double>(n) : kNaN;
            double var = 0.0;
            for (double s : samples) {
                if (!std::isnan(s)) var += (s - mean) * (s - mean);
            }
            stats.mean[bus] = mean;
            stats.stddev[bus] = n > 0 ? std::sqrt(var / static_cast<double>(n)) : kNaN;
        }
        stats.samples = static_cast<std::int64_t>(pooled.size());
        if (!pooled.empty()) {
            double sum = 0.0;
            double lo = pooled.front();
            double hi = pooled.front();
            for (double s : pooled) {
                sum += s;
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
            stats.system_mean = sum / static_cast<double>(pooled.size());
            double var = 0.0;
            for (double s : pooled) {
                var += (s - stats.system_mean) * (s - stats.system_mean);
            }
            stats.system_stddev = std::sqrt(var / static_cast<double>(pooled.size()));
            stats.system_min = lo;
            stats.system_max = hi;
        } else {
            stats.system_mean = kNaN;
            stats.system_stddev = kNaN;
            stats.system_min = kNaN;
            stats.system_max = kNaN;
        }
        return stats;
    }
};

} // namespace

AccountingStudy run_accounting_study(const Network& base, const ScenarioSeries& series,
                                     const std::vector<Metric>& metrics, int jobs) {
    if (series.timesteps < 1) {
        throw ValidationError("time series has no timesteps");
    }
    AccountingStudy study;
    study.metrics = metrics.empty() ? all_metrics() : metrics;

    struct StepOutcome {
        bool ok = false;
        HourlyRecord record;
    };
    std::vector<StepOutcome> outcomes(static_cast<std::size_t>(series.timesteps));
    parallel_for(jobs, series.timesteps, [&](int i) {
        int step = i + 1;
        StepOutcome& out = outcomes[static_cast<std::size_t>(i)];
        out.record.step = step;
        Network net = apply_timestep(base, series, step);
        try {
            DispatchResult dispatch = solve_dcopf(net);
            out.record.metrics = compute_all_metrics(net, dispatch);
            out.record.total_load = out.record.metrics.total_load;
            out.record.true_emissions = out.record.metrics.total_emissions;
            out.record.lmce_fallback = out.record.metrics.lmce_fallback;
            for (Metric m : all_metrics()) {
                out.record.accounting[m] = account(net, dispatch, out.record.metrics.get(m));
            }
            out.ok = true;
        } catch (const SolveError&) {
            out.ok = false;
        }
    });

    std::map<Metric, StatsAccumulator> accumulators;
    for (StepOutcome& out : outcomes) {
        if (!out.ok) {
            study.failed_steps.push_back(out.record.step);
            continue;
        }
        for (Metric m : all_metrics()) {
            accumulators[m].add(out.record.metrics.get(m));
            study.accounted_total[m] += out.record.accounting.at(m).accounted_total;
        }
        study.true_total += out.record.true_emissions;
        study.load_total += out.record.total_load;
        if (out.record.lmce_fallback) ++study.lmce_fallback_hours;
        study.hours.push_back(std::move(out.record));
    }
    for (Metric m : all_metrics()) {
        study.stats[m] = accumulators[m].finish();
    }
    return study;
}

namespace {

std::vector<int> datacenter_buses(const Network& network) {
    std::vector<std::pair<int, int>> by_load_id; // (load id, bus)
    for (const Load& l : network.loads) {
        if (l.is_datacenter) by_load_id.push_back({l.id, l.bus});
    }
    std::sort(by_load_id.begin(), by_load_id.end());
    std::vector<int> buses;
    for (const auto& [id, bus] : by_load_id) buses.push_back(bus);
    return buses;
}

Network with_dc_demand(const Network& net, const std::vector<int>& dc_buses,
                       const std::vector<double>& mw) {
    Network out = net;
    for (std::size_t d = 0; d < dc_buses.size(); ++d) {
        for (Load& l : out.loads) {
            if (l.is_datacenter && l.bus == dc_buses[d]) {
                l.p = mw[d];
            }
        }
    }
    return out;
}

double dc_accounted(const Network& net, const IntensityVector& intensity,
                    const std::vector<int>& dc_buses) {
    double total = 0.0;
    for (const Load& l : net.loads) {
        if (!l.is_datacenter) continue;
        if (std::find(dc_buses.begin(), dc_buses.end(), l.bus) == dc_buses.end()) continue;
        auto it = intensity.find(l.bus);
        if (it == intensity.end() || std::isnan(it->second)) continue;
        total += it->second * l.p;
    }
    return total;
}

} // namespace

StudyResult run_shifting_study(const Network& base, const ScenarioSeries& series,
                               Metric shift_metric, const ShiftConfig& config, int jobs) {
    StudyResult result;
    result.shift_metric = shift_metric;
    result.config = config;
    result.dc_buses = datacenter_buses(base);
    if (result.dc_buses.empty()) {
        throw ValidationError("shifting study needs datacenter loads in the base network");
    }
    if (config.horizon < 1) {
        throw ValidationError("shifting horizon must be at least 1 step");
    }
    const int num_days = series.timesteps / config.horizon;
    result.skipped_trailing_steps = series.timesteps - num_days * config.horizon;
    if (num_days < 1) {
        throw ValidationError("time series is shorter than one shifting horizon (" +
                              std::to_string(series.timesteps) + " < " +
                              std::to_string(config.horizon) + " steps)");
    }

    const int num_dc = static_cast<int>(result.dc_buses.size());
    result.days.resize(static_cast<std::size_t>(num_days));

    parallel_for(jobs, num_days, [&](int di) {
        DayRecord& day = result.days[static_cast<std::size_t>(di)];
        day.day = di + 1;
        for (Metric m : all_metrics()) {
            day.pre_dc[m] = 0.0;
            day.post_dc[m] = 0.0;
            day.pre_system[m] = 0.0;
            day.post_system[m] = 0.0;
        }
        std::vector<std::vector<double>> signal(
            static_cast<std::size_t>(num_dc),
            std::vector<double>(static_cast<std::size_t>(config.horizon), kNaN));
        try {
            // Step 1: nominal-profile dispatch and intensities per hour.
            for (int h = 0; h < config.horizon; ++h) {
                int step = di * config.horizon + h + 1;
                Network net = apply_timestep(base, series, step);
                DispatchResult dispatch = solve_dcopf(net);
                MetricSet metrics = compute_all_metrics(net, dispatch);
                if (metrics.lmce_fallback) ++day.lmce_fallback_hours;
                day.pre_true += metrics.total_emissions;
                for (Metric m : all_metrics()) {
                    day.pre_dc[m] += dc_accounted(net, metrics.get(m), result.dc_buses);
                    day.pre_system[m] += account(net, dispatch, metrics.get(m)).accounted_total;
                }
                const IntensityVector& sig = metrics.get(shift_metric);
                for (int d = 0; d < num_dc; ++d) {
                    auto it = sig.find(result.dc_buses[static_cast<std::size_t>(d)]);
                    signal[static_cast<std::size_t>(d)][static_cast<std::size_t>(h)] =
                        it != sig.end() ? it->second : kNaN;
                }
            }
            // Step 2: optimize the fleet profile against that signal.
            day.plan = solve_shift(result.dc_buses, signal, config);
            day.estimated_dc = day.plan.estimated_emissions;
            // Step 3: re-dispatch with the shifted profile and re-account.
            for (int h = 0; h < config.horizon; ++h) {
                int step = di * config.horizon + h + 1;
                std::vector<double> mw(static_cast<std::size_t>(num_dc));
                for (int d = 0; d < num_dc; ++d) {
                    mw[static_cast<std::size_t>(d)] =
                        day.plan.demand_mw[static_cast<std::size_t>(d)][static_cast<std::size_t>(h)];
                }
                Network net = with_dc_demand(apply_timestep(base, series, step),
                                             result.dc_buses, mw);
                DispatchResult dispatch = solve_dcopf(net);
                MetricSet metrics = compute_all_metrics(net, dispatch);
                if (metrics.lmce_fallback) ++day.lmce_fallback_hours;
                day.post_true += metrics.total_emissions;
                for (Metric m : all_metrics()) {
                    day.post_dc[m] += dc_accounted(net, metrics.get(m), result.dc_buses);
                    day.post_system[m] += account(net, dispatch, metrics.get(m)).accounted_total;
                }
            }
            day.valid = true;
        } catch (const SolveError&) {
            day.valid = false;
        }
    });

    for (const DayRecord& day : result.days) {
        if (!day.valid) {
            ++result.invalid_days;
            continue;
        }
        result.pre_true_total += day.pre_true;
        result.post_true_total += day.post_true;
        result.estimated_total += day.estimated_dc;
        for (Metric m : all_metrics()) {
            result.pre_dc_total[m] += day.pre_dc.at(m);
            result.post_dc_total[m] += day.post_dc.at(m);
            result.pre_system_total[m] += day.pre_system.at(m);
            result.post_system_total[m] += day.post_system.at(m);
        }
    }
    return result;
}

std::map<Metric, std::map<Metric, double>>
cross_metric_matrix(const std::vector<StudyResult>& studies) {
    if (studies.empty()) {
        throw ValidationError("cross-metric matrix needs at least one study");
    }
    const StudyResult& first = studies.front();
    std::map<Metric, std::map<Metric, double>> matrix;
    for (const StudyResult& s : studies) {
        if (s.dc_buses != first.dc_buses || s.days.size() != first.days.size() ||
            s.config.nominal_mw != first.config.nominal_mw ||
            s.config.epsilon != first.config.epsilon ||
            s.config.horizon != first.config.horizon) {
            throw ValidationError("cross-metric matrix inputs come from mismatched studies");
        }
        if (matrix.count(s.shift_metric)) {
            throw ValidationError("cross-metric matrix received two studies for metric " +
                                  metric_name(s.shift_metric));
        }
        for (Metric account_metric : all_metrics()) {
            matrix[s.shift_metric][account_metric] =
                s.post_dc_total.at(account_metric) - s.pre_dc_total.at(account_metric);
        }
    }
    return matrix;
}

DeltaDistribution make_delta_distribution(const std::vector<double>& deltas) {
    if (deltas.empty()) {
        throw ValidationError("delta distribution needs at least one sample");
    }
    DeltaDistribution dist;
    dist.samples = static_cast<std::int64_t>(deltas.size());

    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end());
    double lo = sorted.front();
    double hi = sorted.back();
    if (hi - lo < 1e-12) {
        lo = sorted.front() - 0.5;
        hi = sorted.front() + 0.5;
    }
    constexpr int kBins = 20;
    double width = (hi - lo) / kBins;
    for (int k = 0; k <= kBins; ++k) {
        dist.bin_edges.push_back(lo + width * k);
    }
    dist.counts.assign(kBins, 0);
    for (double v : deltas) {
        int k = static_cast<int>((v - lo) / width);
        k = std::clamp(k, 0, kBins - 1);
        ++dist.counts[static_cast<std::size_t>(k)];
    }

    double sum = 0.0;
    for (double v : deltas) sum += v;
    dist.mean = sum / static_cast<double>(deltas.size());

    auto percentile = [&](double p) {
        double h = (static_cast<double>(sorted.size()) - 1.0) * p;
        auto lo_idx = static_cast<std::size_t>(std::floor(h));
        std::size_t hi_idx = std::min(lo_idx + 1, sorted.size() - 1);
        double frac = h - std::floor(h);
        return sorted[lo_idx] + frac * (sorted[hi_idx] - sorted[lo_idx]);
    };
    dist.median = percentile(0.5);
    dist.p10 = percentile(0.1);
    dist.p90 = percentile(0.9);
    return dist;
}

DeltaDistribution daily_delta_distribution(const StudyResult& study) {
    std::vector<double> deltas;
    for (const DayRecord& day : study.days) {
        if (day.valid) deltas.push_back(day.post_true - day.pre_true);
    }
    if (deltas.empty()) {
        throw ValidationError("study has no valid days for the delta distribution");
    }
    return make_delta_distribution(deltas);
}

} // namespace gridcarbon
