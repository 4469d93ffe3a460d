#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridcarbon/errors.hpp"

namespace gridcarbon {

struct Bus {
    int id = 0;
    std::string name;
    bool is_ref = false;
};

// Transmission line. susceptance is per-unit on the system base; the MW flow
// on (from,to) at angles theta is -susceptance * base_mva * (theta_from - theta_to).
struct Line {
    int from_bus = 0;
    int to_bus = 0;
    double susceptance = 0.0; // per-unit, > 0
    double flow_limit = 0.0;  // MW; +inf means unlimited
};

struct CostPoint {
    double mw = 0.0;
    double cost = 0.0; // currency/h at that output
};

struct Generator {
    int id = 0;
    int bus = 0;
    double p_min = 0.0; // MW
    double p_max = 0.0; // MW
    std::vector<CostPoint> cost_points; // convex PWL, strictly increasing in MW
    double emission_intensity = 0.0;    // tCO2/MWh
    bool in_service = true;

    int segment_count() const { return static_cast<int>(cost_points.size()) - 1; }
    // Slope/intercept of segment k so the cost curve is max_k(slope*p + intercept).
    double segment_slope(int k) const;
    double segment_intercept(int k) const;
};

struct Load {
    int id = 0;
    int bus = 0;
    double p = 0.0; // MW
    bool is_datacenter = false;
};

struct BusGeo {
    int bus = 0;
    double x = 0.0;
    double y = 0.0;
};

struct Network {
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Generator> generators;
    std::vector<Load> loads;
    std::vector<BusGeo> geometry; // optional plotting coordinates

    int ref_bus() const;
    const Bus* find_bus(int id) const;
    const Generator* find_generator(int id) const;
    const Load* find_load(int id) const;
    double total_load() const;
    // Sum of load p at one bus (all loads, DC and non-DC).
    double load_at_bus(int bus_id) const;
};

// Per-timestep overrides. Load values are dimensionless multipliers of the
// static load; generator values replace p_max in MW.
struct ScenarioSeries {
    int timesteps = 0;
    std::map<int, std::vector<double>> load_multipliers; // load id -> per-step factor
    std::map<int, std::vector<double>> gen_pmax;         // gen id -> per-step MW
};

// Structural validation plus the dispatch feasibility screen
// (sum p_min <= sum load <= sum p_max). Throws ValidationError.
void validate(const Network& network);

// Parse the case-file grammar (MATPOWER-style matrices plus mpc.emissions).
// Out-of-service rows are dropped; the result passes validate().
Network parse_case(const std::string& text);
Network load_case(const std::string& path);

// Inverse of parse_case on networks without co-located loads; co-located
// loads at one bus are merged back into a single PD entry.
std::string serialize_case(const Network& network);

// Parse the time-series CSV (column "t", then "load:<id>" / "gen_pmax:<id>").
ScenarioSeries parse_timeseries(const std::string& text, const Network& network);
ScenarioSeries load_timeseries(const std::string& path, const Network& network);

// Instantiate timestep t (1-based). The input network is not modified.
Network apply_timestep(const Network& network, const ScenarioSeries& series, int t);

// Add (or resize) a datacenter load of nominal_mw at each listed bus.
// Existing non-datacenter loads at those buses are kept distinct.
Network add_datacenter_loads(const Network& network, const std::vector<int>& bus_ids,
                             double nominal_mw);

} // namespace gridcarbon
