#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridcarbon/dcopf.hpp"
#include "gridcarbon/grid.hpp"

namespace gridcarbon {

enum class Metric { Ace, Lmce, Almce, Lace };

std::string metric_name(Metric m);
Metric parse_metric(const std::string& name);

// Per-bus carbon intensity (tCO2/MWh). NaN entries mark buses where the
// metric is undefined (e.g. LMCE whose finite-difference fallback failed).
using IntensityVector = std::map<int, double>;

// All four intensity metrics for one dispatch.
struct MetricSet {
    IntensityVector ace;
    IntensityVector lmce;
    IntensityVector almce;
    IntensityVector lace;
    double total_emissions = 0.0;  // sum_g e_g p_g for the dispatch
    double total_load = 0.0;
    bool lmce_fallback = false;    // degenerate optimum, finite differences used

    const IntensityVector& get(Metric m) const;
};

// Average carbon emissions: the same system-wide rate at every bus.
IntensityVector ace(const Network& network, const DispatchResult& dispatch);

// LMCE shifted by a uniform adjustment so that accounted totals match true
// emissions. NaN LMCE entries stay NaN and are excluded from the adjustment.
IntensityVector almce(const Network& network, const DispatchResult& dispatch,
                      const IntensityVector& lmce_values);

MetricSet compute_all_metrics(const Network& network, const DispatchResult& dispatch);

// Demand-weighted accounting: total = sum_i intensity_i * p_D,i over buses
// with load, skipping NaN intensities (their load is reported separately).
struct AccountingReport {
    double accounted_total = 0.0; // tCO2/h attributed to demand
    double true_total = 0.0;      // sum_g e_g p_g
    double skipped_load = 0.0;    // MW of demand at NaN-intensity buses
};

AccountingReport account(const Network& network, const DispatchResult& dispatch,
                         const IntensityVector& intensity);

} // namespace gridcarbon
