// Programmatic test networks, 2-10 buses, radial and meshed, congested and
// uncongested. Every fixture returned by dispatch_fixtures() passes
// validate() and dispatches feasibly at load multipliers in [0.6, 1.2].
#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gridcarbon/grid.hpp"

namespace fixtures {

using gridcarbon::CostPoint;
using gridcarbon::Generator;
using gridcarbon::Line;
using gridcarbon::Load;
using gridcarbon::Network;
using gridcarbon::ScenarioSeries;

inline void add_bus(Network& net, int id, bool ref = false) {
    gridcarbon::Bus b;
    b.id = id;
    b.name = "bus" + std::to_string(id);
    b.is_ref = ref;
    net.buses.push_back(b);
}

inline void add_line(Network& net, int from, int to, double x, double limit_mw = 0.0) {
    Line ln;
    ln.from_bus = from;
    ln.to_bus = to;
    ln.susceptance = 1.0 / x;
    ln.flow_limit = limit_mw > 0.0 ? limit_mw : std::numeric_limits<double>::infinity();
    net.lines.push_back(ln);
}

// Linear-cost generator: cost = slope * p on [p_min, p_max].
inline void add_gen(Network& net, int id, int bus, double p_min, double p_max, double slope,
                    double intensity) {
    Generator g;
    g.id = id;
    g.bus = bus;
    g.p_min = p_min;
    g.p_max = p_max;
    g.cost_points = {{0.0, 0.0}, {p_max > 0.0 ? p_max : 1.0, slope * (p_max > 0.0 ? p_max : 1.0)}};
    g.emission_intensity = intensity;
    net.generators.push_back(g);
}

inline void add_gen_pwl(Network& net, int id, int bus, double p_min,
                        std::vector<CostPoint> points, double intensity) {
    Generator g;
    g.id = id;
    g.bus = bus;
    g.p_min = p_min;
    g.p_max = points.back().mw;
    g.cost_points = std::move(points);
    g.emission_intensity = intensity;
    net.generators.push_back(g);
}

inline void add_load(Network& net, int id, int bus, double p) {
    Load l;
    l.id = id;
    l.bus = bus;
    l.p = p;
    net.loads.push_back(l);
}

// Uncongested triangle: wind (100 MW, free, clean) + coal (24/MWh, 0.9606
// tCO2/MWh) serving 150 MW. Optimum: wind 100, coal 50, cost 1200,
// emissions 48.03, ACE 0.3202, LMCE 0.9606 at every bus.
inline Network case3() {
    Network net;
    add_bus(net, 1, true);
    add_bus(net, 2);
    add_bus(net, 3);
    add_line(net, 1, 2, 0.1, 400.0);
    add_line(net, 1, 3, 0.1, 400.0);
    add_line(net, 2, 3, 0.1, 400.0);
    add_gen(net, 1, 1, 0.0, 300.0, 24.0, 0.9606);
    add_gen(net, 2, 2, 0.0, 100.0, 0.0, 0.0);
    add_load(net, 1, 3, 150.0);
    return net;
}

// Same triangle with the wind-side line 2-3 capped at 75 MW. At the optimum
// coal and wind both sit at 75; an extra MW at bus 3 backs wind DOWN one MW
// and backs coal UP two, so LMCE(bus 3) = 2 * 0.9606 = 1.9212, above every
// generator intensity.
inline Network case3_congested() {
    Network net = case3();
    net.lines[2].flow_limit = 75.0;
    return net;
}

// Wind exporting over a 50 MW tie into a coal-served load pocket. Load
// growth at bus 2 lands entirely on coal; load at bus 1 is wind-served.
inline Network case2_curtail() {
    Network net;
    add_bus(net, 1, true);
    add_bus(net, 2);
    add_line(net, 1, 2, 0.1, 50.0);
    add_gen(net, 1, 1, 0.0, 200.0, 5.0, 0.0);
    add_gen(net, 2, 2, 0.0, 300.0, 30.0, 0.95);
    add_load(net, 1, 2, 120.0);
    return net;
}

// Radial chain 1-2-3-4, no limits: the cheap coal unit at bus 1 carries
// everything and is marginal everywhere.
inline Network radial4() {
    Network net;
    add_bus(net, 1, true);
    add_bus(net, 2);
    add_bus(net, 3);
    add_bus(net, 4);
    add_line(net, 1, 2, 0.05);
    add_line(net, 2, 3, 0.05);
    add_line(net, 3, 4, 0.05);
    add_gen(net, 1, 1, 0.0, 250.0, 20.0, 1.0);
    add_gen(net, 2, 4, 0.0, 150.0, 35.0, 0.45);
    add_load(net, 1, 2, 80.0);
    add_load(net, 2, 3, 60.0);
    return net;
}

// Tree rooted at bus 1 with hydro behind a 45 MW export cap: hydro is
// marginal for local load at bus 2, coal for everything else.
inline Network tree5() {
    Network net;
    add_bus(net, 1, true);
    add_bus(net, 2);
    add_bus(net, 3);
    add_bus(net, 4);
    add_bus(net, 5);
    add_line(net, 1, 2, 0.08, 45.0);
    add_line(net, 1, 3, 0.06);
    add_line(net, 3, 4, 0.07);
    add_line(net, 3, 5, 0.09);
    add_gen(net, 1, 1, 0.0, 300.0, 22.0, 0.9);
    add_gen(net, 2, 2, 0.0, 90.0, 8.0, 0.0);
    add_load(net, 1, 3, 40.0);
    add_load(net, 2, 4, 70.0);
    add_load(net, 3, 5, 30.0);
    return net;
}

// Meshed ring with a chord and one 70 MW cap inside the ring.
inline Network mesh6() {
    Network net;
    for (int i = 1; i <= 6; ++i) add_bus(net, i, i == 1);
    add_line(net, 1, 2, 0.08);
    add_line(net, 2, 3, 0.06, 70.0);
    add_line(net, 3, 4, 0.10);
    add_line(net, 4, 5, 0.07);
    add_line(net, 5, 6, 0.09);
    add_line(net, 6, 1, 0.05);
    add_line(net, 2, 5, 0.12);
    add_gen(net, 1, 1, 0.0, 400.0, 18.0, 1.02);
    add_gen(net, 2, 4, 0.0, 200.0, 40.0, 0.45);
    add_gen(net, 3, 6, 0.0, 80.0, 1.0, 0.0);
    add_load(net, 1, 2, 90.0);
    add_load(net, 2, 3, 120.0);
    add_load(net, 3, 5, 60.0);
    return net;
}

// Five-bus ring with a must-run coal unit (p_min = 50).
inline Network ring5_mustrun() {
    Network net;
    for (int i = 1; i <= 5; ++i) add_bus(net, i, i == 1);
    add_line(net, 1, 2, 0.1, 100.0);
    add_line(net, 2, 3, 0.1);
    add_line(net, 3, 4, 0.1);
    add_line(net, 4, 5, 0.1);
    add_line(net, 5, 1, 0.1);
    add_gen(net, 1, 1, 50.0, 200.0, 25.0, 1.1);
    add_gen(net, 2, 3, 0.0, 150.0, 32.0, 0.5);
    add_gen(net, 3, 5, 0.0, 60.0, 2.0, 0.0);
    add_load(net, 1, 2, 70.0);
    add_load(net, 2, 4, 80.0);
    return net;
}

// Square grid with multi-segment piecewise-linear costs; which segment is
// marginal depends on loading.
inline Network multiseg4() {
    Network net;
    for (int i = 1; i <= 4; ++i) add_bus(net, i, i == 1);
    add_line(net, 1, 2, 0.08);
    add_line(net, 2, 3, 0.08);
    add_line(net, 3, 4, 0.08);
    add_line(net, 4, 1, 0.08);
    add_gen_pwl(net, 1, 1, 0.0,
                {{0.0, 0.0}, {50.0, 500.0}, {100.0, 1500.0}, {150.0, 3300.0}}, 0.8);
    add_gen_pwl(net, 2, 3, 0.0, {{0.0, 0.0}, {60.0, 900.0}, {120.0, 2700.0}}, 0.5);
    add_load(net, 1, 2, 60.0);
    add_load(net, 2, 4, 90.0);
    return net;
}

// Load exactly equal to the clean unit's capacity: the optimum is degenerate
// (wind at p_max while coal sits at p_min) and LMCE needs the +delta
// finite-difference fallback, answered by coal.
inline Network case3_windcap() {
    Network net = case3();
    net.loads[0].p = 100.0;
    return net;
}

// Two identical free generators whose combined capacity equals the load:
// the +delta perturbation is infeasible, exercising the -delta fallback.
inline Network case3_degenerate() {
    Network net;
    add_bus(net, 1, true);
    add_bus(net, 2);
    add_bus(net, 3);
    add_line(net, 1, 2, 0.1);
    add_line(net, 1, 3, 0.1);
    add_line(net, 2, 3, 0.1);
    add_gen(net, 1, 1, 0.0, 50.0, 0.0, 0.0);
    add_gen(net, 2, 2, 0.0, 50.0, 0.0, 0.0);
    add_load(net, 1, 3, 100.0);
    return net;
}

// Ten-bus ring with three chords, four units, and two internal caps.
inline Network mesh10() {
    Network net;
    for (int i = 1; i <= 10; ++i) add_bus(net, i, i == 1);
    double xs[] = {0.05, 0.07, 0.06, 0.09, 0.08, 0.11, 0.07, 0.10, 0.06, 0.12};
    for (int i = 0; i < 10; ++i) {
        add_line(net, i + 1, (i + 1) % 10 + 1, xs[i], i == 4 ? 90.0 : 0.0);
    }
    add_line(net, 1, 5, 0.14);
    add_line(net, 3, 8, 0.13, 60.0);
    add_line(net, 2, 7, 0.11);
    add_gen(net, 1, 1, 0.0, 500.0, 20.0, 1.0);
    add_gen(net, 2, 5, 0.0, 250.0, 38.0, 0.46);
    add_gen(net, 3, 8, 0.0, 120.0, 0.5, 0.0);
    add_gen(net, 4, 3, 0.0, 90.0, 7.0, 0.0);
    add_load(net, 1, 2, 60.0);
    add_load(net, 2, 4, 100.0);
    add_load(net, 3, 6, 80.0);
    add_load(net, 4, 7, 70.0);
    add_load(net, 5, 9, 50.0);
    add_load(net, 6, 10, 40.0);
    return net;
}

// Five-bus case in the spirit of the common PJM exercise: cheap units in
// the south-west corner, caps on the ties toward the load center.
inline Network case5_pjm() {
    Network net;
    for (int i = 1; i <= 5; ++i) add_bus(net, i, i == 4);
    add_line(net, 1, 2, 0.0281);
    add_line(net, 1, 4, 0.0304);
    add_line(net, 1, 5, 0.0064, 240.0);
    add_line(net, 2, 3, 0.0108);
    add_line(net, 3, 4, 0.0297);
    add_line(net, 4, 5, 0.0297, 240.0);
    add_gen(net, 1, 1, 0.0, 210.0, 14.0, 0.8);
    add_gen(net, 2, 3, 0.0, 520.0, 30.0, 0.6);
    add_gen(net, 3, 4, 0.0, 200.0, 10.0, 0.0);
    add_gen(net, 4, 5, 0.0, 600.0, 26.0, 0.95);
    add_load(net, 1, 2, 300.0);
    add_load(net, 2, 3, 300.0);
    add_load(net, 3, 4, 400.0);
    return net;
}

// Tie cap below the downstream demand: passes the static feasibility screen
// but has no feasible dispatch.
inline Network infeasible_tie() {
    Network net;
    add_bus(net, 1, true);
    add_bus(net, 2);
    add_line(net, 1, 2, 0.1, 45.0);
    add_gen(net, 1, 1, 0.0, 300.0, 20.0, 0.9);
    add_load(net, 1, 2, 70.0);
    return net;
}

struct NamedFixture {
    std::string name;
    Network net;
};

// Fixtures that dispatch feasibly as-is (single-step suites).
inline std::vector<NamedFixture> all_fixtures() {
    return {
        {"case3", case3()},
        {"case3_congested", case3_congested()},
        {"case2_curtail", case2_curtail()},
        {"radial4", radial4()},
        {"tree5", tree5()},
        {"mesh6", mesh6()},
        {"ring5_mustrun", ring5_mustrun()},
        {"multiseg4", multiseg4()},
        {"case3_windcap", case3_windcap()},
        {"case3_degenerate", case3_degenerate()},
        {"mesh10", mesh10()},
        {"case5_pjm", case5_pjm()},
    };
}

// Fixtures that stay feasible with every load scaled anywhere in [0.6, 1.2].
inline std::vector<NamedFixture> dispatch_fixtures() {
    std::vector<NamedFixture> out;
    for (NamedFixture& f : all_fixtures()) {
        if (f.name == "case3_degenerate") continue; // load == total capacity
        out.push_back(std::move(f));
    }
    return out;
}

// Deterministic multiplier series in [0.6, 1.2]; no two steps identical.
inline ScenarioSeries fixture_series(const Network& net, int steps) {
    ScenarioSeries series;
    series.timesteps = steps;
    for (const Load& l : net.loads) {
        std::vector<double> factors;
        for (int t = 1; t <= steps; ++t) {
            factors.push_back(0.6 + 0.06 * ((t * 7 + l.id * 13) % 11));
        }
        series.load_multipliers[l.id] = factors;
    }
    return series;
}

} // namespace fixtures
