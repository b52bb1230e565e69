#include <doctest.h>

#include <cmath>

#include "core/circularity.hpp"
#include "core/rng.hpp"

using namespace recirc;

namespace {

SolidScenario example_scenario(double mass = 8.0, double success = 25.0) {
    SolidScenario sc;
    sc.total_mass = mass;
    sc.sorting_success_pct = success;
    sc.sorting_duration = 3600.0;
    sc.extraction_exit_time = 100.0;
    sc.first_use_duration = 5000.0;
    sc.transport_unsorted_duration = 400.0;
    sc.second_life_duration = 90000.0;
    return sc;
}

SolidScenario random_scenario(Rng& rng) {
    SolidScenario sc;
    sc.total_mass = rng.uniform(0.0, 5e4);
    sc.sorting_success_pct = rng.uniform(0.0, 100.0);
    sc.sorting_duration = rng.uniform(0.0, 1e5);
    sc.extraction_exit_time = rng.uniform(0.0, 1e4);
    sc.first_use_duration = rng.uniform(0.0, 1e6);
    sc.transport_unsorted_duration = rng.uniform(0.0, 1e4);
    sc.second_life_duration = sc.transport_unsorted_duration + rng.uniform(1.0, 1e6);
    return sc;
}

}  // namespace

TEST_CASE("mass_split hits the boundary and interior examples") {
    auto s0 = mass_split(10.0, 0.0);
    CHECK(s0.recycled == 0.0);
    CHECK(s0.unsorted == 10.0);

    auto s100 = mass_split(10.0, 100.0);
    CHECK(s100.recycled == 10.0);
    CHECK(s100.unsorted == 0.0);

    auto s25 = mass_split(8.0, 25.0);
    CHECK(s25.recycled == 2.0);
    CHECK(s25.unsorted == 6.0);
}

TEST_CASE("mass_split rejects out-of-range inputs") {
    CHECK_THROWS_AS(mass_split(-1.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(mass_split(1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(mass_split(1.0, 100.5), std::invalid_argument);
    CHECK_THROWS_AS(mass_split(std::nan(""), 50.0), std::invalid_argument);
}

TEST_CASE("mass_split conserves the batch exactly for random inputs") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double mass = rng.uniform01() < 0.05 ? 0.0 : rng.uniform(0.0, 1e9);
        const double success = rng.uniform(0.0, 100.0);
        const auto split = mass_split(mass, success);
        CHECK(split.recycled + split.unsorted == mass);  // bitwise, not approximate
        CHECK(split.recycled >= 0.0);
        CHECK(split.unsorted >= 0.0);
        CHECK(split.recycled == doctest::Approx(mass * success / 100.0).epsilon(1e-12));
    }
}

TEST_CASE("solid-scenario lambda follows the three-plateau profile") {
    const auto sc = example_scenario();
    // extraction exits at 100 s, enters the sorter at 5100 s, exits at
    // 8700 s; the unsorted share arrives at 9100 s, the recycled at 98700 s.
    CHECK(sc.sorter_entry_time() == 5100.0);
    CHECK(sc.sorter_exit_time() == 8700.0);
    CHECK(sc.unsorted_arrival_time() == 9100.0);
    CHECK(sc.recycled_arrival_time() == 98700.0);
    CHECK(sc.life_extension() == 89600.0);

    CHECK(lambda_solid_scenario(sc, 0.0) == -8.0);
    CHECK(lambda_solid_scenario(sc, 9099.999) == -8.0);
    CHECK(lambda_solid_scenario(sc, 9100.0) == -14.0);  // -(m + m_u), m_u = 6
    CHECK(lambda_solid_scenario(sc, 98699.0) == -14.0);
    CHECK(lambda_solid_scenario(sc, 98700.0) == -16.0);
    CHECK(lambda_solid_scenario(sc, 1e9) == -16.0);
}

TEST_CASE("solid-scenario anchors") {
    auto sc = example_scenario(8.0, 0.0);
    CHECK(lambda_solid_scenario(sc, sc.unsorted_arrival_time()) == -2.0 * sc.total_mass);

    sc.sorting_success_pct = 100.0;
    CHECK(lambda_solid_scenario(sc, sc.unsorted_arrival_time()) == -sc.total_mass);

    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        sc.sorting_success_pct = rng.uniform(0.0, 100.0);
        CHECK(lambda_solid_scenario(sc, sc.recycled_arrival_time()) == -2.0 * sc.total_mass);
        CHECK(lambda_solid_scenario(sc, sc.recycled_arrival_time() + 1.0) ==
              -2.0 * sc.total_mass);
    }
}

TEST_CASE("longer sorting delays both arrivals by exactly that amount") {
    const auto sc = example_scenario();
    auto delayed = sc;
    const double extra = 1234.5;
    delayed.sorting_duration += extra;
    CHECK(delayed.unsorted_arrival_time() == sc.unsorted_arrival_time() + extra);
    CHECK(delayed.recycled_arrival_time() == sc.recycled_arrival_time() + extra);
}

TEST_CASE("solid-scenario lambda is non-increasing in time") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sc = random_scenario(rng);
        double t1 = rng.uniform(0.0, 2.0 * sc.recycled_arrival_time());
        double t2 = rng.uniform(0.0, 2.0 * sc.recycled_arrival_time());
        if (t1 > t2) std::swap(t1, t2);
        CHECK(lambda_solid_scenario(sc, t1) >= lambda_solid_scenario(sc, t2));
    }
}

TEST_CASE("on the middle plateau lambda improves with sorting success") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto sc = random_scenario(rng);
        double s1 = rng.uniform(0.0, 100.0);
        double s2 = rng.uniform(0.0, 100.0);
        if (s1 > s2) std::swap(s1, s2);
        const double t = sc.unsorted_arrival_time();
        sc.sorting_success_pct = s1;
        const double lo = lambda_solid_scenario(sc, t);
        sc.sorting_success_pct = s2;
        const double hi = lambda_solid_scenario(sc, t);
        CHECK(lo <= hi);
    }
}

TEST_CASE("scenario invariants are enforced") {
    auto sc = example_scenario();
    sc.second_life_duration = sc.transport_unsorted_duration;  // must strictly exceed
    CHECK_THROWS_AS(lambda_solid_scenario(sc, 0.0), std::invalid_argument);
    sc = example_scenario();
    sc.sorting_success_pct = 101.0;
    CHECK_THROWS_AS(lambda_solid_scenario(sc, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_solid_scenario(example_scenario(), -1.0), std::invalid_argument);
}

TEST_CASE("ledger: empty inputs give perfect circularity") {
    CHECK(lambda_from_ledger(solid_cycle_network(), {}, {}, 100.0) == 0.0);
}

TEST_CASE("ledger: one reservoir exit counts once, from its timestamp on") {
    const std::vector<FlowEvent> events{{1.0, 5.0, 1, 4}};
    const Tmn net = solid_cycle_network();
    CHECK(lambda_from_ledger(net, events, {}, 0.5) == 0.0);
    CHECK(lambda_from_ledger(net, events, {}, 1.0) == -5.0);  // boundary included
    CHECK(lambda_from_ledger(net, events, {}, 2.0) == -5.0);
}

TEST_CASE("ledger: exit-and-enter in one transfer counts twice") {
    Tmn net;
    net.compartments = {
        {{1, 1, 1}, CompartmentKind::node, {Role::nonrenewable_reservoir}, ""},
        {{2, 2, 2}, CompartmentKind::node, {Role::landfill}, ""},
        {{3, 1, 2}, CompartmentKind::arc, {Role::transport}, ""},
    };
    CHECK(net_multiplicity(net, 1, 2) == 2);
    const std::vector<FlowEvent> events{{0.0, 3.0, 1, 2}};
    CHECK(lambda_from_ledger(net, events, {}, 1.0) == -6.0);
}

TEST_CASE("ledger rejects unknown compartments and invalid networks") {
    const Tmn net = solid_cycle_network();
    const std::vector<FlowEvent> unknown{{0.0, 1.0, 1, 99}};
    CHECK_THROWS_AS(lambda_from_ledger(net, unknown, {}, 1.0), std::invalid_argument);

    Tmn broken = net;
    broken.compartments.push_back(broken.compartments[0]);  // duplicate id
    CHECK_THROWS_AS(lambda_from_ledger(broken, {}, {}, 1.0), std::invalid_argument);

    const std::vector<FlowEvent> nonpositive{{0.0, 0.0, 1, 4}};
    CHECK_THROWS_AS(lambda_from_ledger(net, nonpositive, {}, 1.0), std::invalid_argument);
}

TEST_CASE("ledger replay of the solid timeline reproduces the closed form") {
    Rng rng(19);
    const Tmn net = solid_cycle_network();
    for (int trial = 0; trial < 50; ++trial) {
        const auto sc = random_scenario(rng);
        const auto events = solid_scenario_events(sc);
        auto check_at = [&](double t) {
            const double expected = lambda_solid_scenario(sc, t);
            const double actual = lambda_from_ledger(net, events, {}, t);
            CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
        };
        for (int i = 0; i < 20; ++i) check_at(rng.uniform(0.0, 1.2 * sc.recycled_arrival_time()));
        for (const double t :
             {0.0, sc.sorter_entry_time(), sc.sorter_exit_time(), sc.unsorted_arrival_time(),
              sc.recycled_arrival_time()})
            check_at(t);
    }
}

TEST_CASE("ledger is additive over disjoint event sets") {
    Rng rng(23);
    const Tmn net = solid_cycle_network();
    std::vector<FlowEvent> all, first, second;
    for (int i = 0; i < 60; ++i) {
        const int endpoints[4][2] = {{1, 4}, {4, 2}, {2, 6}, {6, 3}};
        const auto& e = endpoints[rng.next_u64() % 4];
        FlowEvent ev{rng.uniform(0.0, 100.0), rng.uniform(0.1, 10.0), e[0], e[1]};
        all.push_back(ev);
        (rng.uniform01() < 0.5 ? first : second).push_back(ev);
    }
    for (const double t : {0.0, 25.0, 50.0, 150.0}) {
        const double whole = lambda_from_ledger(net, all, {}, t);
        const double parts =
            lambda_from_ledger(net, first, {}, t) + lambda_from_ledger(net, second, {}, t);
        CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
    }
}

TEST_CASE("continuous flows: interpolation, span edges and delta scaling") {
    ContinuousFlow flow{1, 2, {0.0, 10.0}, {0.0, 10.0}};
    CHECK(flow.rate_at(-0.1) == 0.0);
    CHECK(flow.rate_at(0.0) == 0.0);
    CHECK(flow.rate_at(5.0) == doctest::Approx(5.0));
    CHECK(flow.rate_at(10.0) == 10.0);
    CHECK(flow.rate_at(10.1) == 0.0);

    const Tmn net = netzero_network();
    const std::vector<ContinuousFlow> flows{flow};
    // emitter flow enters the atmosphere: counts positive, scaled by delta
    CHECK(lambda_from_ledger(net, {}, flows, 5.0, {1.0}) == doctest::Approx(-5.0));
    CHECK(lambda_from_ledger(net, {}, flows, 5.0, {2.5}) == doctest::Approx(-12.5));
    // with no continuous flows, delta is irrelevant
    const std::vector<FlowEvent> events{{0.0, 4.0, 1, 4}};
    CHECK(lambda_from_ledger(solid_cycle_network(), events, {}, 5.0, {1.0}) ==
          lambda_from_ledger(solid_cycle_network(), events, {}, 5.0, {97.0}));
}

TEST_CASE("ledger matches the two-flow net-zero form") {
    const Tmn net = netzero_network();
    ContinuousFlow emitter{1, 2, {0.0, 100.0}, {3.0, 5.0}};
    ContinuousFlow remover{2, 3, {0.0, 100.0}, {1.0, 4.0}};
    const std::vector<ContinuousFlow> flows{emitter, remover};
    for (const double t : {0.0, 10.0, 50.0, 100.0}) {
        CHECK(lambda_from_ledger(net, {}, flows, t, {2.0}) ==
              doctest::Approx(lambda_netzero(emitter, remover, t, {2.0})).epsilon(1e-14));
    }
}

TEST_CASE("net-zero lambda") {
    ContinuousFlow emitter{1, 2, {0.0, 10.0}, {3.0, 3.0}};
    ContinuousFlow remover{2, 3, {0.0, 10.0}, {3.0, 3.0}};
    SUBCASE("balanced flows give zero") {
        for (double t = 0.0; t <= 10.0; t += 0.5)
            CHECK(lambda_netzero(emitter, remover, t) == 0.0);
    }
    SUBCASE("uncompensated emission") {
        remover.rates = {0.0, 0.0};
        CHECK(lambda_netzero(emitter, remover, 5.0, {1.0}) == doctest::Approx(-3.0));
        emitter.rates = {2.0, 2.0};
        CHECK(lambda_netzero(emitter, remover, 5.0, {1.0}) == doctest::Approx(-2.0));
    }
    SUBCASE("no flows at all") {
        emitter.rates = {0.0, 0.0};
        remover.rates = {0.0, 0.0};
        CHECK(lambda_netzero(emitter, remover, 5.0) == 0.0);
    }
    SUBCASE("removal exceeding emission yields the signed value, unclamped") {
        remover.rates = {5.0, 5.0};
        CHECK(lambda_netzero(emitter, remover, 5.0, {1.0}) == doctest::Approx(2.0));
    }
}

TEST_CASE("event-log and flow files round-trip") {
    const auto events = solid_scenario_events(example_scenario());
    CHECK(parse_event_log(serialize_event_log(events)) == events);

    std::vector<ContinuousFlow> flows{{1, 2, {0.0, 1.5, 3.0}, {0.25, 0.5, 0.125}},
                                      {2, 3, {0.5, 2.5}, {1.0, 2.0}}};
    const auto back = parse_flow_file(serialize_flow_file(flows));
    REQUIRE(back.size() == 2);
    CHECK(back[0].times == flows[0].times);
    CHECK(back[0].rates == flows[0].rates);
    CHECK(back[1].from_k == 2);
    CHECK(back[1].to_k == 3);
}

TEST_CASE("ledger file parsers reject malformed content") {
    CHECK_THROWS_WITH_AS(parse_event_log("1.0 2.0 1\n"), doctest::Contains("line 1"),
                         std::runtime_error);
    CHECK_THROWS_AS(parse_event_log("1.0 2.0 1 4 extra\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_flow_file("0.0 1.0\n"), std::runtime_error);        // sample first
    CHECK_THROWS_AS(parse_flow_file("flow 1 2\n5 1\n4 1\n"), std::runtime_error);  // not increasing
}
