#include "gridcarbon/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gridcarbon/errors.hpp"
#include "gridcarbon/format.hpp"
#include "gridcarbon/svg.hpp"

namespace gridcarbon {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<Metric>& canonical_metrics() {
    static const std::vector<Metric> metrics{Metric::Ace, Metric::Lmce, Metric::Almce,
                                             Metric::Lace};
    return metrics;
}

double jnum(const json& v) { return v.is_null() ? kNaN : v.get<double>(); }

json metric_map_to_json(const std::map<Metric, double>& values) {
    json out = json::object();
    for (const auto& [m, v] : values) out[metric_name(m)] = v;
    return out;
}

json stats_to_json(const IntensityStats& stats) {
    json out;
    out["system_mean"] = stats.system_mean;
    out["system_stddev"] = stats.system_stddev;
    out["system_min"] = stats.system_min;
    out["system_max"] = stats.system_max;
    out["samples"] = stats.samples;
    out["nan_samples"] = stats.nan_samples;
    json per_bus = json::array();
    for (const auto& [bus, mean] : stats.mean) {
        json row;
        row["bus"] = bus;
        row["mean"] = mean;
        row["stddev"] = stats.stddev.at(bus);
        per_bus.push_back(row);
    }
    out["per_bus"] = per_bus;
    return out;
}

IntensityStats stats_from_json(const json& in) {
    IntensityStats stats;
    stats.system_mean = jnum(in.at("system_mean"));
    stats.system_stddev = jnum(in.at("system_stddev"));
    stats.system_min = jnum(in.at("system_min"));
    stats.system_max = jnum(in.at("system_max"));
    stats.samples = in.at("samples").get<std::int64_t>();
    stats.nan_samples = in.at("nan_samples").get<std::int64_t>();
    for (const json& row : in.at("per_bus")) {
        int bus = row.at("bus").get<int>();
        stats.mean[bus] = jnum(row.at("mean"));
        stats.stddev[bus] = jnum(row.at("stddev"));
    }
    return stats;
}

json distribution_to_json(const DeltaDistribution& dist) {
    json out;
    out["bin_edges"] = dist.bin_edges;
    out["counts"] = dist.counts;
    out["mean"] = dist.mean;
    out["median"] = dist.median;
    out["p10"] = dist.p10;
    out["p90"] = dist.p90;
    out["samples"] = dist.samples;
    return out;
}

DeltaDistribution distribution_from_json(const json& in) {
    DeltaDistribution dist;
    dist.bin_edges = in.at("bin_edges").get<std::vector<double>>();
    dist.counts = in.at("counts").get<std::vector<std::int64_t>>();
    dist.mean = jnum(in.at("mean"));
    dist.median = jnum(in.at("median"));
    dist.p10 = jnum(in.at("p10"));
    dist.p90 = jnum(in.at("p90"));
    dist.samples = in.at("samples").get<std::int64_t>();
    return dist;
}

} // namespace

StudyDocument build_study_document(const Network& network, const std::string& case_name,
                                   const AccountingStudy& baseline,
                                   const std::vector<StudyResult>& runs) {
    StudyDocument doc;
    doc.case_name = case_name;
    doc.account_metrics = baseline.metrics;
    doc.baseline = baseline;
    doc.runs = runs;
    if (!runs.empty()) {
        doc.cross_metric = cross_metric_matrix(runs);
        for (const StudyResult& run : runs) {
            doc.daily_delta[run.shift_metric] = daily_delta_distribution(run);
        }
    }
    doc.buses = network.buses;
    doc.lines = network.lines;
    doc.layout = layout_buses(network);
    return doc;
}

std::string study_document_to_json(const StudyDocument& doc) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["case"] = doc.case_name;

    json account_metrics = json::array();
    for (Metric m : doc.account_metrics) account_metrics.push_back(metric_name(m));
    root["account_metrics"] = account_metrics;

    json network;
    json buses = json::array();
    for (const Bus& b : doc.buses) {
        json row;
        row["id"] = b.id;
        auto it = doc.layout.find(b.id);
        row["x"] = it != doc.layout.end() ? it->second.first : 0.5;
        row["y"] = it != doc.layout.end() ? it->second.second : 0.5;
        buses.push_back(row);
    }
    network["buses"] = buses;
    json lines = json::array();
    for (const Line& ln : doc.lines) {
        json row;
        row["from"] = ln.from_bus;
        row["to"] = ln.to_bus;
        lines.push_back(row);
    }
    network["lines"] = lines;
    root["network"] = network;

    json baseline;
    baseline["true_total"] = doc.baseline.true_total;
    baseline["load_total"] = doc.baseline.load_total;
    baseline["accounted_total"] = metric_map_to_json(doc.baseline.accounted_total);
    baseline["failed_steps"] = doc.baseline.failed_steps;
    baseline["lmce_fallback_hours"] = doc.baseline.lmce_fallback_hours;
    baseline["steps"] = static_cast<std::int64_t>(doc.baseline.hours.size()) +
                        static_cast<std::int64_t>(doc.baseline.failed_steps.size());
    json stats;
    for (const auto& [m, s] : doc.baseline.stats) stats[metric_name(m)] = stats_to_json(s);
    baseline["stats"] = stats;
    root["baseline"] = baseline;

    json runs = json::array();
    for (const StudyResult& run : doc.runs) {
        json r;
        r["shift_metric"] = metric_name(run.shift_metric);
        r["dnom"] = run.config.nominal_mw;
        r["eps"] = run.config.epsilon;
        r["horizon"] = run.config.horizon;
        r["dc_buses"] = run.dc_buses;
        r["skipped_trailing_steps"] = run.skipped_trailing_steps;
        r["invalid_days"] = run.invalid_days;
        r["pre_true_total"] = run.pre_true_total;
        r["post_true_total"] = run.post_true_total;
        r["estimated_total"] = run.estimated_total;
        r["pre_dc_total"] = metric_map_to_json(run.pre_dc_total);
        r["post_dc_total"] = metric_map_to_json(run.post_dc_total);
        r["pre_system_total"] = metric_map_to_json(run.pre_system_total);
        r["post_system_total"] = metric_map_to_json(run.post_system_total);
        json days = json::array();
        for (const DayRecord& day : run.days) {
            json d;
            d["day"] = day.day;
            d["valid"] = day.valid;
            d["estimated_dc"] = day.estimated_dc;
            d["pre_true"] = day.pre_true;
            d["post_true"] = day.post_true;
            d["pre_dc"] = metric_map_to_json(day.pre_dc);
            d["post_dc"] = metric_map_to_json(day.post_dc);
            d["pre_system"] = metric_map_to_json(day.pre_system);
            d["post_system"] = metric_map_to_json(day.post_system);
            d["lmce_fallback_hours"] = day.lmce_fallback_hours;
            d["plan"] = day.plan.demand_mw;
            days.push_back(d);
        }
        r["days"] = days;
        runs.push_back(r);
    }
    root["runs"] = runs;

    json cross;
    for (const auto& [shift, row] : doc.cross_metric) {
        cross[metric_name(shift)] = metric_map_to_json(row);
    }
    root["cross_metric"] = cross;

    json deltas;
    for (const auto& [m, dist] : doc.daily_delta) {
        deltas[metric_name(m)] = distribution_to_json(dist);
    }
    root["daily_delta"] = deltas;

    return root.dump(2) + "\n";
}

StudyDocument study_document_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("study document is not valid JSON: ") + e.what(), 1, 1);
    }
    try {
        StudyDocument doc;
        doc.case_name = root.at("case").get<std::string>();
        for (const json& name : root.at("account_metrics")) {
            doc.account_metrics.push_back(parse_metric(name.get<std::string>()));
        }
        for (const json& row : root.at("network").at("buses")) {
            Bus b;
            b.id = row.at("id").get<int>();
            doc.buses.push_back(b);
            doc.layout[b.id] = {jnum(row.at("x")), jnum(row.at("y"))};
        }
        for (const json& row : root.at("network").at("lines")) {
            Line ln;
            ln.from_bus = row.at("from").get<int>();
            ln.to_bus = row.at("to").get<int>();
            doc.lines.push_back(ln);
        }
        const json& baseline = root.at("baseline");
        doc.baseline.true_total = jnum(baseline.at("true_total"));
        doc.baseline.load_total = jnum(baseline.at("load_total"));
        doc.baseline.lmce_fallback_hours = baseline.at("lmce_fallback_hours").get<int>();
        for (const auto& [name, value] : baseline.at("accounted_total").items()) {
            doc.baseline.accounted_total[parse_metric(name)] = jnum(value);
        }
        for (const auto& [name, value] : baseline.at("stats").items()) {
            doc.baseline.stats[parse_metric(name)] = stats_from_json(value);
        }
        doc.baseline.metrics = doc.account_metrics;
        for (const auto& [name, value] : root.at("daily_delta").items()) {
            doc.daily_delta[parse_metric(name)] = distribution_from_json(value);
        }
        for (const auto& [name, row] : root.at("cross_metric").items()) {
            for (const auto& [acct, value] : row.items()) {
                doc.cross_metric[parse_metric(name)][parse_metric(acct)] = jnum(value);
            }
        }
        return doc;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("study document is missing required fields: ") +
                              e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    {
        std::ifstream existing(path, std::ios::binary);
        if (existing) {
            std::ostringstream buf;
            buf << existing.rdbuf();
            if (buf.str() == content) return;
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write file: " + path.string());
    }
    out << content;
    if (!out) {
        throw IoError("failed while writing file: " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

bool wants(const std::vector<std::string>& formats, const std::string& f) {
    for (const std::string& s : formats) {
        if (s == f) return true;
    }
    return false;
}

std::string intensity_csv(const AccountingStudy& study, const Network& network, Metric metric) {
    std::vector<int> bus_ids;
    for (const Bus& b : network.buses) bus_ids.push_back(b.id);
    std::sort(bus_ids.begin(), bus_ids.end());

    std::string out;
    std::vector<std::string> header{"step"};
    for (int bus : bus_ids) header.push_back("bus_" + std::to_string(bus));
    out += csv_record(header);
    for (const HourlyRecord& hour : study.hours) {
        std::vector<std::string> row{std::to_string(hour.step)};
        const IntensityVector& v = hour.metrics.get(metric);
        for (int bus : bus_ids) {
            auto it = v.find(bus);
            row.push_back(format_double(it != v.end() ? it->second : kNaN));
        }
        out += csv_record(row);
    }
    return out;
}

std::string accounting_csv(const AccountingStudy& study) {
    std::string out;
    std::vector<std::string> header{"step", "total_load_mw", "true_tco2"};
    for (Metric m : canonical_metrics()) {
        header.push_back("accounted_" + metric_name(m));
        header.push_back("skipped_load_" + metric_name(m));
    }
    out += csv_record(header);
    for (const HourlyRecord& hour : study.hours) {
        std::vector<std::string> row{std::to_string(hour.step), format_double(hour.total_load),
                                     format_double(hour.true_emissions)};
        for (Metric m : canonical_metrics()) {
            const AccountingReport& rep = hour.accounting.at(m);
            row.push_back(format_double(rep.accounted_total));
            row.push_back(format_double(rep.skipped_load));
        }
        out += csv_record(row);
    }
    return out;
}

json metrics_report_json(const AccountingStudy& study) {
    json root;
    root["schema_version"] = kSchemaVersion;
    json metrics = json::array();
    for (Metric m : study.metrics) metrics.push_back(metric_name(m));
    root["metrics"] = metrics;
    root["true_total"] = study.true_total;
    root["load_total"] = study.load_total;
    root["accounted_total"] = metric_map_to_json(study.accounted_total);
    root["failed_steps"] = study.failed_steps;
    root["lmce_fallback_hours"] = study.lmce_fallback_hours;
    json stats;
    for (const auto& [m, s] : study.stats) stats[metric_name(m)] = stats_to_json(s);
    root["stats"] = stats;
    json hours = json::array();
    for (const HourlyRecord& hour : study.hours) {
        json h;
        h["step"] = hour.step;
        h["total_load"] = hour.total_load;
        h["true_emissions"] = hour.true_emissions;
        h["lmce_fallback"] = hour.lmce_fallback;
        json accounted;
        json skipped;
        for (const auto& [m, rep] : hour.accounting) {
            accounted[metric_name(m)] = rep.accounted_total;
            skipped[metric_name(m)] = rep.skipped_load;
        }
        h["accounted"] = accounted;
        h["skipped_load"] = skipped;
        hours.push_back(h);
    }
    root["hours"] = hours;
    return root;
}

} // namespace

void write_metrics_outputs(const AccountingStudy& study, const Network& network,
                           const std::filesystem::path& out_dir,
                           const std::vector<std::string>& formats) {
    if (wants(formats, "csv")) {
        for (Metric m : study.metrics) {
            write_file(out_dir / ("intensity_" + metric_name(m) + ".csv"),
                       intensity_csv(study, network, m));
        }
        write_file(out_dir / "accounting.csv", accounting_csv(study));
    }
    if (wants(formats, "json")) {
        write_file(out_dir / "report.json", metrics_report_json(study).dump(2) + "\n");
    }
}

namespace {

std::string intensity_stats_csv(const StudyDocument& doc) {
    std::string out = csv_record(
        {"metric", "system_mean", "system_stddev", "system_min", "system_max", "samples",
         "nan_samples"});
    for (Metric m : canonical_metrics()) {
        auto it = doc.baseline.stats.find(m);
        if (it == doc.baseline.stats.end()) continue;
        const IntensityStats& s = it->second;
        out += csv_record({metric_name(m), format_double(s.system_mean),
                           format_double(s.system_stddev), format_double(s.system_min),
                           format_double(s.system_max), std::to_string(s.samples),
                           std::to_string(s.nan_samples)});
    }
    return out;
}

std::string bus_mean_csv(const StudyDocument& doc) {
    std::vector<std::string> header{"bus"};
    std::vector<Metric> present;
    for (Metric m : canonical_metrics()) {
        if (doc.baseline.stats.count(m)) {
            present.push_back(m);
            header.push_back("mean_" + metric_name(m));
        }
    }
    std::string out = csv_record(header);
    for (const Bus& b : doc.buses) {
        std::vector<std::string> row{std::to_string(b.id)};
        for (Metric m : present) {
            const auto& mean = doc.baseline.stats.at(m).mean;
            auto it = mean.find(b.id);
            row.push_back(format_double(it != mean.end() ? it->second : kNaN));
        }
        out += csv_record(row);
    }
    return out;
}

std::string accounting_totals_csv(const StudyDocument& doc) {
    std::string out = csv_record({"metric", "accounted_tco2", "true_tco2", "ratio"});
    for (Metric m : canonical_metrics()) {
        auto it = doc.baseline.accounted_total.find(m);
        if (it == doc.baseline.accounted_total.end()) continue;
        double ratio = doc.baseline.true_total != 0 ? it->second / doc.baseline.true_total : kNaN;
        out += csv_record({metric_name(m), format_double(it->second),
                           format_double(doc.baseline.true_total), format_double(ratio)});
    }
    return out;
}

std::string shifting_results_csv(const StudyDocument& doc) {
    std::string out = csv_record({"shift_metric", "pre_true_tco2", "post_true_tco2", "delta_tco2",
                                  "pct_change", "estimated_dc_tco2", "pre_dc_tco2",
                                  "post_dc_tco2", "invalid_days"});
    for (const StudyResult& run : doc.runs) {
        double delta = run.post_true_total - run.pre_true_total;
        double pct = run.pre_true_total != 0 ? 100.0 * delta / run.pre_true_total : kNaN;
        out += csv_record({metric_name(run.shift_metric), format_double(run.pre_true_total),
                           format_double(run.post_true_total), format_double(delta),
                           format_double(pct), format_double(run.estimated_total),
                           format_double(run.pre_dc_total.at(run.shift_metric)),
                           format_double(run.post_dc_total.at(run.shift_metric)),
                           std::to_string(run.invalid_days)});
    }
    return out;
}

std::string cross_metric_csv(const StudyDocument& doc) {
    std::vector<Metric> accounts;
    for (Metric m : canonical_metrics()) {
        for (Metric selected : doc.account_metrics) {
            if (m == selected) accounts.push_back(m);
        }
    }
    std::vector<std::string> header{"shift_metric"};
    for (Metric m : accounts) header.push_back("account_" + metric_name(m));
    std::string out = csv_record(header);
    for (Metric shift : canonical_metrics()) {
        auto it = doc.cross_metric.find(shift);
        if (it == doc.cross_metric.end()) continue;
        std::vector<std::string> row{metric_name(shift)};
        for (Metric m : accounts) row.push_back(format_double(it->second.at(m)));
        out += csv_record(row);
    }
    return out;
}

std::string daily_deltas_csv(const StudyResult& run) {
    std::string out = csv_record(
        {"day", "valid", "pre_true_tco2", "post_true_tco2", "delta_tco2", "estimated_dc_tco2"});
    for (const DayRecord& day : run.days) {
        out += csv_record({std::to_string(day.day), day.valid ? "1" : "0",
                           format_double(day.pre_true), format_double(day.post_true),
                           format_double(day.post_true - day.pre_true),
                           format_double(day.estimated_dc)});
    }
    return out;
}

std::string histogram_csv(const DeltaDistribution& dist) {
    std::string out = csv_record({"bin_lo", "bin_hi", "count"});
    for (std::size_t k = 0; k < dist.counts.size(); ++k) {
        out += csv_record({format_double(dist.bin_edges[k]), format_double(dist.bin_edges[k + 1]),
                           std::to_string(dist.counts[k])});
    }
    return out;
}

// A Network stub sufficient for drawing: real buses/lines, no generators.
Network plot_network(const StudyDocument& doc) {
    Network net;
    net.buses = doc.buses;
    net.lines = doc.lines;
    for (const auto& [bus, xy] : doc.layout) {
        net.geometry.push_back({bus, xy.first, xy.second});
    }
    return net;
}

} // namespace

void write_plot_outputs(const StudyDocument& doc, const std::filesystem::path& out_dir) {
    Network net = plot_network(doc);
    std::vector<std::pair<std::string, std::map<int, double>>> panels;
    for (Metric m : canonical_metrics()) {
        auto it = doc.baseline.stats.find(m);
        if (it == doc.baseline.stats.end()) continue;
        bool selected = false;
        for (Metric want_metric : doc.account_metrics) selected |= want_metric == m;
        if (!selected) continue;
        std::string title = doc.case_name + ": mean " + metric_name(m) + " intensity";
        write_file(out_dir / ("network_" + metric_name(m) + ".svg"),
                   render_network_svg(net, it->second.mean, title));
        panels.push_back({metric_name(m), it->second.mean});
    }
    if (panels.size() > 1) {
        write_file(out_dir / "network_panels.svg",
                   render_network_panels_svg(net, panels,
                                             doc.case_name + ": mean nodal intensity by metric"));
    }
    for (const auto& [m, dist] : doc.daily_delta) {
        std::string title = doc.case_name + ": daily true-emission change, " + metric_name(m) +
                            "-guided shifting";
        write_file(out_dir / ("histogram_" + metric_name(m) + ".svg"),
                   render_histogram_svg(dist, title, "tCO2 per day (post - pre)"));
    }
}

void write_study_outputs(const StudyDocument& doc, const std::filesystem::path& out_dir,
                         const std::vector<std::string>& formats) {
    if (wants(formats, "json")) {
        write_file(out_dir / "study.json", study_document_to_json(doc));
    }
    if (wants(formats, "csv")) {
        write_file(out_dir / "intensity_stats.csv", intensity_stats_csv(doc));
        write_file(out_dir / "bus_mean_intensity.csv", bus_mean_csv(doc));
        write_file(out_dir / "accounting_totals.csv", accounting_totals_csv(doc));
        if (!doc.runs.empty()) {
            write_file(out_dir / "shifting_results.csv", shifting_results_csv(doc));
            write_file(out_dir / "cross_metric.csv", cross_metric_csv(doc));
            for (const StudyResult& run : doc.runs) {
                write_file(out_dir /
                               ("daily_deltas_" + metric_name(run.shift_metric) + ".csv"),
                           daily_deltas_csv(run));
            }
            for (const auto& [m, dist] : doc.daily_delta) {
                write_file(out_dir / ("histogram_" + metric_name(m) + ".csv"),
                           histogram_csv(dist));
            }
        }
    }
    if (wants(formats, "svg")) {
        write_plot_outputs(doc, out_dir);
    }
}

} // namespace gridcarbon
