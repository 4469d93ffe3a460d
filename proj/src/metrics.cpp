#include "gridcarbon/metrics.hpp"

#include <cmath>
#include <limits>

#include "gridcarbon/carbonflow.hpp"
#include "gridcarbon/errors.hpp"
#include "gridcarbon/sensitivity.hpp"

namespace gridcarbon {

std::string metric_name(Metric m) {
    switch (m) {
    case Metric::Ace: return "ace";
    case Metric::Lmce: return "lmce";
    case Metric::Almce: return "almce";
    case Metric::Lace: return "lace";
    }
    throw InternalError("unknown metric enum value");
}

Metric parse_metric(const std::string& name) {
    if (name == "ace") return Metric::Ace;
    if (name == "lmce") return Metric::Lmce;
    if (name == "almce") return Metric::Almce;
    if (name == "lace") return Metric::Lace;
    throw ValidationError("unknown metric '" + name + "' (expected ace, lmce, almce, or lace)");
}

const IntensityVector& MetricSet::get(Metric m) const {
    switch (m) {
    case Metric::Ace: return ace;
    case Metric::Lmce: return lmce;
    case Metric::Almce: return almce;
    case Metric::Lace: return lace;
    }
    throw InternalError("unknown metric enum value");
}

IntensityVector ace(const Network& network, const DispatchResult& dispatch) {
    double total = network.total_load();
    // Zero demand makes the ratio meaningless; report a zero intensity so
    // downstream accounting (which multiplies by zero load) stays finite.
    double rate = total > 0 ? total_emissions(network, dispatch) / total : 0.0;
    IntensityVector out;
    for (const Bus& b : network.buses) out[b.id] = rate;
    return out;
}

IntensityVector almce(const Network& network, const DispatchResult& dispatch,
                      const IntensityVector& lmce_values) {
    double emissions = total_emissions(network, dispatch);
    double lmce_accounted = 0.0;
    double covered_load = 0.0;
    for (const Load& l : network.loads) {
        auto it = lmce_values.find(l.bus);
        if (it == lmce_values.end() || std::isnan(it->second)) continue;
        lmce_accounted += it->second * l.p;
        covered_load += l.p;
    }
    double adjustment = covered_load > 0 ? (emissions - lmce_accounted) / covered_load : 0.0;
    IntensityVector out;
    for (const Bus& b : network.buses) {
        auto it = lmce_values.find(b.id);
        double base = it != lmce_values.end() ? it->second
                                              : std::numeric_limits<double>::quiet_NaN();
        out[b.id] = std::isnan(base) ? base : base + adjustment;
    }
    return out;
}

MetricSet compute_all_metrics(const Network& network, const DispatchResult& dispatch) {
    MetricSet set;
    set.total_emissions = total_emissions(network, dispatch);
    set.total_load = network.total_load();
    set.ace = ace(network, dispatch);
    set.lmce = lmce(network, dispatch, &set.lmce_fallback);
    set.almce = almce(network, dispatch, set.lmce);
    set.lace = lace(network, dispatch);
    return set;
}

AccountingReport account(const Network& network, const DispatchResult& dispatch,
                         const IntensityVector& intensity) {
    AccountingReport report;
    report.true_total = total_emissions(network, dispatch);
    for (const Load& l : network.loads) {
        auto it = intensity.find(l.bus);
        if (it == intensity.end() || std::isnan(it->second)) {
            report.skipped_load += l.p;
        } else {
            report.accounted_total += it->second * l.p;
        }
    }
    return report;
}

} // namespace gridcarbon
