#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "gridcarbon/carbonflow.hpp"
#include "gridcarbon/dcopf.hpp"
#include "gridcarbon/metrics.hpp"
#include "gridcarbon/sensitivity.hpp"

using namespace gridcarbon;

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

TEST_CASE("metric names round-trip") {
    for (Metric m : {Metric::Ace, Metric::Lmce, Metric::Almce, Metric::Lace}) {
        CHECK(parse_metric(metric_name(m)) == m);
    }
    CHECK_THROWS_AS(parse_metric("watts"), ValidationError);
}

TEST_CASE("ACE is the uniform system rate") {
    Network net = fixtures::case3();
    DispatchResult d = solve_dcopf(net);
    IntensityVector v = ace(net, d);
    REQUIRE(v.size() == 3);
    for (const auto& [bus, value] : v) {
        CHECK(value == doctest::Approx(0.3202).epsilon(1e-12));
    }
}

TEST_CASE("ACE with zero load is zero") {
    Network net = fixtures::case3();
    net.loads.clear(); // dispatch still solves: everything at zero
    DispatchResult d = solve_dcopf(net);
    IntensityVector v = ace(net, d);
    for (const auto& [bus, value] : v) CHECK(value == 0.0);
}

TEST_CASE("conservation: ACE, ALMCE, LACE account to true emissions everywhere") {
    for (const auto& f : fixtures::all_fixtures()) {
        CAPTURE(f.name);
        DispatchResult d = solve_dcopf(f.net);
        MetricSet m = compute_all_metrics(f.net, d);
        double truth = total_emissions(f.net, d);
        CHECK(m.total_emissions == doctest::Approx(truth).epsilon(1e-12));

        for (Metric metric : {Metric::Ace, Metric::Almce, Metric::Lace}) {
            AccountingReport rep = account(f.net, d, m.get(metric));
            CAPTURE(metric_name(metric));
            CHECK(rep.true_total == doctest::Approx(truth).epsilon(1e-12));
            CHECK(rep.skipped_load == 0.0);
            double scale = std::max(1.0, std::abs(truth));
            CHECK(std::abs(rep.accounted_total - truth) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("LMCE accounting differs from true emissions under congestion") {
    Network net = fixtures::case3_congested();
    DispatchResult d = solve_dcopf(net);
    MetricSet m = compute_all_metrics(net, d);
    AccountingReport rep = account(net, d, m.lmce);
    // 150 MW at LMCE 1.9212 vs 72.045 true.
    CHECK(rep.accounted_total == doctest::Approx(288.18).epsilon(1e-9));
    CHECK(rep.true_total == doctest::Approx(72.045).epsilon(1e-9));
}

TEST_CASE("ALMCE collapses to ACE when LMCE is uniform") {
    Network net = fixtures::case3();
    DispatchResult d = solve_dcopf(net);
    MetricSet m = compute_all_metrics(net, d);
    for (const auto& [bus, value] : m.almce) {
        CHECK(std::abs(value - m.ace.at(bus)) < 1e-9);
    }
}

TEST_CASE("ALMCE preserves the LMCE bus ordering") {
    for (const auto& f : fixtures::all_fixtures()) {
        CAPTURE(f.name);
        DispatchResult d = solve_dcopf(f.net);
        MetricSet m = compute_all_metrics(f.net, d);
        for (const auto& [bi, li] : m.lmce) {
            for (const auto& [bj, lj] : m.lmce) {
                if (std::isnan(li) || std::isnan(lj)) continue;
                double ai = m.almce.at(bi);
                double aj = m.almce.at(bj);
                // The adjustment is a common shift: differences are preserved.
                CHECK(ai - aj == doctest::Approx(li - lj).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("ALMCE leaves NaN entries NaN and conserves over the covered load") {
    Network net = fixtures::radial4(); // loads 80@2, 60@3; true emissions 140
    DispatchResult d = solve_dcopf(net);
    IntensityVector broken;
    broken[1] = 1.0;
    broken[2] = kNaN;
    broken[3] = 0.5;
    // Bus 4 deliberately missing: treated the same as NaN.
    IntensityVector adjusted = almce(net, d, broken);
    CHECK(std::isnan(adjusted.at(2)));
    CHECK(std::isnan(adjusted.at(4)));
    // Only bus 3's 60 MW is covered: adjustment = (140 - 0.5*60) / 60.
    double adj = (140.0 - 30.0) / 60.0;
    CHECK(adjusted.at(1) == doctest::Approx(1.0 + adj).epsilon(1e-12));
    CHECK(adjusted.at(3) == doctest::Approx(0.5 + adj).epsilon(1e-12));
    // Accounting over the covered load lands exactly on true emissions.
    AccountingReport rep = account(net, d, adjusted);
    CHECK(rep.skipped_load == doctest::Approx(80.0));
    CHECK(rep.accounted_total == doctest::Approx(140.0).epsilon(1e-12));
}

TEST_CASE("account skips NaN intensities and reports the skipped load") {
    Network net = fixtures::radial4(); // loads at buses 2 and 3
    DispatchResult d = solve_dcopf(net);
    IntensityVector v;
    for (const Bus& b : net.buses) v[b.id] = 1.0;
    v[2] = kNaN;
    AccountingReport rep = account(net, d, v);
    CHECK(rep.skipped_load == doctest::Approx(80.0));
    CHECK(rep.accounted_total == doctest::Approx(60.0)); // only bus 3 counted
}

TEST_CASE("carbon flow graph matches the triangle dispatch") {
    Network net = fixtures::case3();
    DispatchResult d = solve_dcopf(net);
    FlowGraph g = build_flow_graph(net, d);
    // All three lines carry power; arcs point 2->1, 1->3, 2->3.
    REQUIRE(g.arcs.size() == 3);
    CHECK(g.arcs[0].from_bus == 2);
    CHECK(g.arcs[0].to_bus == 1);
    CHECK(g.arcs[0].mw == doctest::Approx(50.0 / 3.0));
    CHECK(g.throughput.at(1) == doctest::Approx(50.0 + 50.0 / 3.0));
    CHECK(g.throughput.at(3) == doctest::Approx(150.0));
    CHECK(g.gen_emissions.at(1) == doctest::Approx(48.03));
}

TEST_CASE("LACE triangle values are the proportional-sharing solution") {
    Network net = fixtures::case3();
    DispatchResult d = solve_dcopf(net);
    IntensityVector v = lace(net, d);
    CHECK(v.at(1) == doctest::Approx(48.03 / (50.0 + 50.0 / 3.0)).epsilon(1e-12));
    CHECK(v.at(2) == doctest::Approx(0.0));
    CHECK(v.at(3) == doctest::Approx(0.3202).epsilon(1e-12));
}

TEST_CASE("equal mixture: bus fed 50 MW clean and 50 MW at 1.0 sees 0.5") {
    Network net;
    fixtures::add_bus(net, 1, true);
    fixtures::add_bus(net, 2);
    fixtures::add_bus(net, 3);
    fixtures::add_line(net, 1, 3, 0.1);
    fixtures::add_line(net, 2, 3, 0.1);
    fixtures::add_line(net, 1, 2, 0.1);
    fixtures::add_gen(net, 1, 1, 50.0, 50.0, 10.0, 1.0); // pinned at 50
    fixtures::add_gen(net, 2, 2, 50.0, 50.0, 12.0, 0.0); // pinned at 50
    fixtures::add_load(net, 1, 3, 100.0);
    DispatchResult d = solve_dcopf(net);
    IntensityVector v = lace(net, d);
    CHECK(v.at(3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("radial chain carries the source intensity to the sink") {
    Network net = fixtures::radial4();
    DispatchResult d = solve_dcopf(net);
    IntensityVector v = lace(net, d);
    CHECK(v.at(1) == doctest::Approx(1.0));
    CHECK(v.at(2) == doctest::Approx(1.0));
    CHECK(v.at(3) == doctest::Approx(1.0));
    // Bus 4's generator is off and no power flows there: zero-inflow bus.
    FlowGraph g = build_flow_graph(net, d);
    CHECK(g.throughput.at(4) == doctest::Approx(0.0));
    CHECK(v.at(4) == 0.0);
}

TEST_CASE("LACE is bounded by the running generators' intensities") {
    for (const auto& f : fixtures::all_fixtures()) {
        CAPTURE(f.name);
        DispatchResult d = solve_dcopf(f.net);
        FlowGraph g = build_flow_graph(f.net, d);
        IntensityVector v = lace(f.net, d);
        double lo = kInf, hi = -kInf;
        for (const Generator& gen : f.net.generators) {
            if (d.p_g.at(gen.id) > 1e-9) {
                lo = std::min(lo, gen.emission_intensity);
                hi = std::max(hi, gen.emission_intensity);
            }
        }
        for (const auto& [bus, value] : v) {
            if (g.throughput.at(bus) <= 1e-9) continue;
            CHECK(value >= lo - 1e-9);
            CHECK(value <= hi + 1e-9);
        }
    }
}

TEST_CASE("compute_all_metrics bundles the four metrics consistently") {
    Network net = fixtures::case3_congested();
    DispatchResult d = solve_dcopf(net);
    MetricSet m = compute_all_metrics(net, d);
    CHECK(m.ace == ace(net, d));
    CHECK(m.lace == lace(net, d));
    CHECK(m.lmce == lmce(net, d));
    CHECK(m.total_load == doctest::Approx(150.0));
    CHECK_FALSE(m.lmce_fallback);
    CHECK(&m.get(Metric::Ace) == &m.ace);
    CHECK(&m.get(Metric::Lace) == &m.lace);

    Network degen = fixtures::case3_windcap();
    DispatchResult dd = solve_dcopf(degen);
    MetricSet md = compute_all_metrics(degen, dd);
    CHECK(md.lmce_fallback);
}
