#include <doctest.h>

#include <fstream>
#include <sstream>

#include "core/network.hpp"
#include "core/rng.hpp"

using namespace recirc;

namespace {

bool has_error(const ValidationReport& report, const std::string& code) {
    for (const auto& v : report.errors)
        if (v.code == code) return true;
    return false;
}

Compartment node(int k, std::set<Role> roles = {}, std::string label = "") {
    return {{k, k, k}, CompartmentKind::node, std::move(roles), std::move(label)};
}

Compartment arc(int k, int i, int j) {
    return {{k, i, j}, CompartmentKind::arc, {Role::transport}, ""};
}

std::string data_file(const char* name) {
    return std::string(RECIRC_DATA_DIR) + "/networks/" + name;
}

}  // namespace

TEST_CASE("canonical networks validate with the expected counts") {
    const Tmn solid = solid_cycle_network();
    CHECK(validate_tmn(solid).ok());
    CHECK(solid.node_count() == 3);
    CHECK(solid.arc_count() == 3);
    CHECK(solid.total_count() == 6);

    const Tmn netzero = netzero_network();
    CHECK(validate_tmn(netzero).ok());
    CHECK(netzero.node_count() == 3);
    CHECK(netzero.arc_count() == 2);
    CHECK(netzero.total_count() == 5);
}

TEST_CASE("empty network is vacuously valid") {
    Tmn tmn;
    CHECK(validate_tmn(tmn).ok());
    CHECK(tmn.total_count() == 0);
}

TEST_CASE("validation itemises each kind of violation") {
    SUBCASE("duplicate identifier") {
        Tmn tmn;
        tmn.compartments = {node(1), node(2), arc(2, 1, 2)};
        CHECK(has_error(validate_tmn(tmn), "duplicate-id"));
    }
    SUBCASE("dangling arc endpoint") {
        Tmn tmn;
        tmn.compartments = {node(1), arc(4, 1, 5)};
        CHECK(has_error(validate_tmn(tmn), "dangling-arc"));
    }
    SUBCASE("node breaking the i = j = k rule") {
        Tmn tmn;
        tmn.compartments = {{{2, 2, 3}, CompartmentKind::node, {}, ""}};
        CHECK(has_error(validate_tmn(tmn), "node-index-rule"));
    }
    SUBCASE("arc with i = j") {
        Tmn tmn;
        tmn.compartments = {node(1), {{2, 1, 1}, CompartmentKind::arc, {}, ""}};
        CHECK(has_error(validate_tmn(tmn), "arc-self-loop"));
    }
    SUBCASE("declared counts that do not match") {
        Tmn tmn = solid_cycle_network();
        tmn.declared_nodes = 5;
        CHECK(has_error(validate_tmn(tmn), "count-mismatch"));
    }
    SUBCASE("transport role on a node") {
        Tmn tmn;
        tmn.compartments = {node(1, {Role::transport})};
        CHECK(has_error(validate_tmn(tmn), "role-kind"));
    }
    SUBCASE("storage role on an arc") {
        Tmn tmn;
        tmn.compartments = {node(1), node(2),
                            {{3, 1, 2}, CompartmentKind::arc, {Role::landfill}, ""}};
        CHECK(has_error(validate_tmn(tmn), "role-kind"));
    }
}

TEST_CASE("weak connectivity is a warning, not an error") {
    Tmn tmn;
    tmn.compartments = {node(1), node(2)};
    const auto report = validate_tmn(tmn);
    CHECK(report.ok());
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].code == "disconnected");
}

TEST_CASE("compartmental digraph of the solid cycle keeps parallel arcs") {
    const auto g = compartmental_digraph(solid_cycle_network());
    CHECK(g.nodes == std::vector<int>{1, 2, 3});
    REQUIRE(g.edges.size() == 3);
    CHECK(g.edges[0] == DigraphEdge{1, 2, 4});
    CHECK(g.edges[1] == DigraphEdge{2, 3, 5});
    CHECK(g.edges[2] == DigraphEdge{2, 3, 6});
}

TEST_CASE("digraph of the net-zero cycle") {
    const auto g = compartmental_digraph(netzero_network());
    CHECK(g.nodes == std::vector<int>{1, 2, 3});
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == DigraphEdge{1, 2, 4});
    CHECK(g.edges[1] == DigraphEdge{2, 3, 5});
}

TEST_CASE("single node yields a trivial digraph") {
    Tmn tmn;
    tmn.compartments = {node(1)};
    const auto g = compartmental_digraph(tmn);
    CHECK(g.nodes == std::vector<int>{1});
    CHECK(g.edges.empty());
}

TEST_CASE("digraph construction rejects invalid networks") {
    Tmn tmn;
    tmn.compartments = {node(1), arc(4, 1, 5)};
    CHECK_THROWS_AS(compartmental_digraph(tmn), std::invalid_argument);
}

TEST_CASE("finite-time sustainable classification") {
    const auto reservoir = node(1, {Role::nonrenewable_reservoir});
    const auto incinerator = node(2, {Role::incinerator});
    const auto landfill = node(3, {Role::landfill});
    const auto atmosphere = node(4, {Role::natural_environment});
    const auto process = node(5, {Role::process});

    CHECK(is_finite_time_sustainable(reservoir, FlowDirection::exiting));
    CHECK_FALSE(is_finite_time_sustainable(reservoir, FlowDirection::entering));
    CHECK(is_finite_time_sustainable(incinerator, FlowDirection::entering));
    CHECK(is_finite_time_sustainable(landfill, FlowDirection::entering));
    CHECK(is_finite_time_sustainable(atmosphere, FlowDirection::entering));
    CHECK_FALSE(is_finite_time_sustainable(process, FlowDirection::entering));
    CHECK_FALSE(is_finite_time_sustainable(process, FlowDirection::exiting));
}

TEST_CASE("serialize/parse round-trips the canonical networks") {
    for (const Tmn& tmn : {solid_cycle_network(), netzero_network()}) {
        const Tmn back = parse_network(serialize_network(tmn));
        CHECK(back == tmn);
    }
}

TEST_CASE("shipped network files match the built-in definitions") {
    CHECK(load_network_file(data_file("solid_cycle.tmn")) == solid_cycle_network());
    CHECK(load_network_file(data_file("netzero.tmn")) == netzero_network());
}

TEST_CASE("parser reports line numbers and rejects unknown content") {
    CHECK_THROWS_WITH_AS(parse_network("node 1\nbogus 2\n"),
                         doctest::Contains("line 2"), NetworkParseError);
    CHECK_THROWS_AS(parse_network("node 1 roles=warehouse\n"), NetworkParseError);
    CHECK_THROWS_AS(parse_network("arc 4 1\n"), NetworkParseError);
    CHECK_THROWS_AS(parse_network("node 1 label=\"unterminated\n"), NetworkParseError);
    CHECK_THROWS_AS(parse_network("counts: 3\n"), NetworkParseError);
}

TEST_CASE("declared counts are parsed and checked") {
    const Tmn ok = parse_network("counts: 1 0\nnode 1\n");
    CHECK(validate_tmn(ok).ok());
    const Tmn bad = parse_network("counts: 2 0\nnode 1\n");
    CHECK(has_error(validate_tmn(bad), "count-mismatch"));
}

TEST_CASE("random valid networks survive round-trip and digraph extraction") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        Tmn tmn;
        tmn.material = "m" + std::to_string(trial);
        const int n_nodes = 1 + static_cast<int>(rng.next_u64() % 6);
        for (int k = 1; k <= n_nodes; ++k)
            tmn.compartments.push_back(
                node(k, rng.uniform01() < 0.5 ? std::set<Role>{Role::process}
                                              : std::set<Role>{Role::use}));
        const int n_arcs = static_cast<int>(rng.next_u64() % 6);
        for (int a = 0; a < n_arcs && n_nodes >= 2; ++a) {
            const int i = 1 + static_cast<int>(rng.next_u64() % n_nodes);
            int j = 1 + static_cast<int>(rng.next_u64() % n_nodes);
            if (i == j) j = (j % n_nodes) + 1;
            tmn.compartments.push_back(arc(n_nodes + 1 + a, i, j));
        }
        REQUIRE(validate_tmn(tmn).ok());
        CHECK(parse_network(serialize_network(tmn)) == tmn);
        const auto g = compartmental_digraph(tmn);
        CHECK(g.nodes.size() == tmn.node_count());
        CHECK(g.edges.size() == tmn.arc_count());
    }
}
