#pragma once

#include <map>
#include <vector>

#include "gridcarbon/dcopf.hpp"
#include "gridcarbon/grid.hpp"
#include "gridcarbon/metrics.hpp"

namespace gridcarbon {

// Directed arc carrying positive power from one bus to another.
struct FlowArc {
    int from_bus = 0;
    int to_bus = 0;
    double mw = 0.0;
};

struct FlowGraph {
    std::vector<FlowArc> arcs;           // line order, near-zero flows dropped
    std::map<int, double> generation;    // bus id -> sum of local p_g
    std::map<int, double> gen_emissions; // bus id -> sum of local e_g p_g
    std::map<int, double> throughput;    // bus id -> arc inflow + local generation
};

FlowGraph build_flow_graph(const Network& network, const DispatchResult& dispatch);

// Proportional-sharing nodal mix: every MWh leaving bus i (into lines or
// loads) carries intensity rho_i, where
//   throughput_i * rho_i - sum_{arcs j->i} F_ji * rho_j = sum_{g at i} e_g p_g.
// Buses with zero throughput (no inflow, no local generation) carry no
// load-relevant power and take rho = 0; they remain identifiable through
// FlowGraph::throughput. Returns rho per bus id.
std::map<int, double> nodal_mix(const FlowGraph& graph);

// Locational average carbon emissions: the nodal mix seen by demand.
IntensityVector lace(const Network& network, const DispatchResult& dispatch);

} // namespace gridcarbon
