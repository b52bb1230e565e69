#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace recirc {

// Material networks are sets of thermodynamic compartments: node compartments
// store, transform, or use a target material; arc compartments move it
// between nodes. The digraph of a network has the nodes as vertices and the
// arcs as flow-directed edges.

enum class Role {
    nonrenewable_reservoir,
    landfill,
    incinerator,
    natural_environment,
    process,
    use,
    transport,
};

Role role_from_string(const std::string& name);
std::string to_string(Role r);

enum class CompartmentKind { node, arc };

struct CompartmentId {
    int k = 0;  // unique identifier within the network
    int i = 0;  // origin node index
    int j = 0;  // destination node index

    auto operator<=>(const CompartmentId&) const = default;
};

struct Compartment {
    CompartmentId id;
    CompartmentKind kind = CompartmentKind::node;
    std::set<Role> roles;
    std::string label;

    bool has_role(Role r) const { return roles.count(r) != 0; }
    bool operator==(const Compartment&) const = default;
};

struct Tmn {
    std::string material;  // target-material tag
    std::vector<Compartment> compartments;
    // Counts declared by the source description, cross-checked by validation.
    std::optional<int> declared_nodes;
    std::optional<int> declared_arcs;

    std::size_t node_count() const;
    std::size_t arc_count() const;
    std::size_t total_count() const { return compartments.size(); }

    const Compartment* find(int k) const;

    bool operator==(const Tmn&) const = default;
};

struct Violation {
    std::string code;  // stable machine-readable tag
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> errors;
    std::vector<Violation> warnings;

    bool ok() const { return errors.empty(); }
    std::string to_text() const;
};

// Violations are data, not failures: an invalid network yields a report, not
// an exception. Checks: duplicate identifiers, node index rule (i = j = k),
// arc index rule (i != j) with existing endpoints, role/kind compatibility,
// declared-count consistency. Weak connectivity is reported as a warning
// only.
ValidationReport validate_tmn(const Tmn& tmn);

struct DigraphEdge {
    int from = 0;
    int to = 0;
    int key = 0;  // identifier of the arc compartment realising the edge

    bool operator==(const DigraphEdge&) const = default;
};

struct Digraph {
    std::vector<int> nodes;
    std::vector<DigraphEdge> edges;  // parallel edges allowed, keyed by arc id
};

// Throws std::invalid_argument when validate_tmn reports errors.
Digraph compartmental_digraph(const Tmn& tmn);

enum class FlowDirection { exiting, entering };

// A mass or flow is finite-time sustainable when it exits a nonrenewable
// reservoir or enters a landfill, an incinerator, or the natural environment.
bool is_finite_time_sustainable(const Compartment& c, FlowDirection direction);

// Canonical networks shipped with the library: the solid-material life cycle
// (reservoir -> sorting -> incinerator with a direct and a recycled route)
// and the net-zero CO2 cycle (emitter -> atmosphere -> remover).
Tmn solid_cycle_network();
Tmn netzero_network();

class NetworkParseError : public std::runtime_error {
public:
    NetworkParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Text format, one declaration per line ('#' starts a comment):
//   material: <free text>
//   counts: <n_nodes> <n_arcs>            (optional)
//   node <k> [roles=r1,r2] [label="..."]
//   arc <k> <i> <j> [roles=r1] [label="..."]
Tmn parse_network(const std::string& text);
std::string serialize_network(const Tmn& tmn);
Tmn load_network_file(const std::string& path);

}  // namespace recirc
