#include "gridcarbon/carbonflow.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "gridcarbon/errors.hpp"

namespace gridcarbon {

namespace {

constexpr double kFlowDropTol = 1e-9; // MW; arcs below this are noise

} // namespace

FlowGraph build_flow_graph(const Network& network, const DispatchResult& dispatch) {
    FlowGraph graph;
    for (const Bus& b : network.buses) {
        graph.generation[b.id] = 0.0;
        graph.gen_emissions[b.id] = 0.0;
        graph.throughput[b.id] = 0.0;
    }
    for (const Generator& g : network.generators) {
        double p = dispatch.p_g.at(g.id);
        graph.generation[g.bus] += p;
        graph.gen_emissions[g.bus] += g.emission_intensity * p;
    }
    std::vector<double> flows = line_flows(network, dispatch);
    for (std::size_t li = 0; li < network.lines.size(); ++li) {
        const Line& ln = network.lines[li];
        double f = flows[li];
        FlowArc arc;
        if (f >= 0) {
            arc.from_bus = ln.from_bus;
            arc.to_bus = ln.to_bus;
            arc.mw = f;
        } else {
            arc.from_bus = ln.to_bus;
            arc.to_bus = ln.from_bus;
            arc.mw = -f;
        }
        if (arc.mw < kFlowDropTol) continue;
        graph.arcs.push_back(arc);
    }
    for (const FlowArc& arc : graph.arcs) {
        graph.throughput[arc.to_bus] += arc.mw;
    }
    for (const Bus& b : network.buses) {
        graph.throughput[b.id] += graph.generation[b.id];
    }
    return graph;
}

std::map<int, double> nodal_mix(const FlowGraph& graph) {
    // Index the buses with defined throughput; the rest carry no power and
    // have no mix.
    std::vector<int> live;
    for (const auto& [bus, t] : graph.throughput) {
        if (t > kFlowDropTol) live.push_back(bus);
    }
    std::map<int, int> index;
    for (std::size_t i = 0; i < live.size(); ++i) index[live[i]] = static_cast<int>(i);

    const int n = static_cast<int>(live.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = graph.throughput.at(live[static_cast<std::size_t>(i)]);
        rhs(i) = graph.gen_emissions.at(live[static_cast<std::size_t>(i)]);
    }
    for (const FlowArc& arc : graph.arcs) {
        auto to = index.find(arc.to_bus);
        auto from = index.find(arc.from_bus);
        if (to == index.end()) continue;
        if (from == index.end()) {
            // Power flowing out of a zero-throughput bus cannot happen in a
            // balanced dispatch; treat it as carbon-free rather than fail.
            continue;
        }
        a(to->second, from->second) -= arc.mw;
    }

    // Zero-inflow buses carry no load-relevant power; they take rho = 0 and
    // stay identifiable through FlowGraph::throughput.
    std::map<int, double> mix;
    for (const auto& [bus, t] : graph.throughput) {
        mix[bus] = 0.0;
    }
    if (n > 0) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        Eigen::VectorXd rho = lu.solve(rhs);
        if (!rho.allFinite()) {
            throw InternalError("carbon-flow mix system is singular");
        }
        for (int i = 0; i < n; ++i) {
            mix[live[static_cast<std::size_t>(i)]] = rho(i);
        }
    }
    return mix;
}

IntensityVector lace(const Network& network, const DispatchResult& dispatch) {
    FlowGraph graph = build_flow_graph(network, dispatch);
    return nodal_mix(graph);
}

} // namespace gridcarbon
