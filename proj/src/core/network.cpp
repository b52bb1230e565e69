#include "core/network.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace recirc {

namespace {

const std::map<std::string, Role>& role_table() {
    static const std::map<std::string, Role> table = {
        {"nonrenewable-reservoir", Role::nonrenewable_reservoir},
        {"landfill", Role::landfill},
        {"incinerator", Role::incinerator},
        {"natural-environment", Role::natural_environment},
        {"process", Role::process},
        {"use", Role::use},
        {"transport", Role::transport},
    };
    return table;
}

}  // namespace

Role role_from_string(const std::string& name) {
    const auto& table = role_table();
    const auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown compartment role '" + name + "'");
    return it->second;
}

std::string to_string(Role r) {
    for (const auto& [name, role] : role_table())
        if (role == r) return name;
    return "?";
}

std::size_t Tmn::node_count() const {
    return static_cast<std::size_t>(std::count_if(
        compartments.begin(), compartments.end(),
        [](const Compartment& c) { return c.kind == CompartmentKind::node; }));
}

std::size_t Tmn::arc_count() const { return compartments.size() - node_count(); }

const Compartment* Tmn::find(int k) const {
    for (const auto& c : compartments)
        if (c.id.k == k) return &c;
    return nullptr;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    for (const auto& v : errors) out << "error [" << v.code << "] " << v.message << "\n";
    for (const auto& v : warnings) out << "warning [" << v.code << "] " << v.message << "\n";
    if (errors.empty() && warnings.empty()) out << "ok\n";
    return out.str();
}

ValidationReport validate_tmn(const Tmn& tmn) {
    ValidationReport report;
    auto error = [&](std::string code, std::string message) {
        report.errors.push_back({std::move(code), std::move(message)});
    };

    std::map<int, int> id_count;
    for (const auto& c : tmn.compartments) ++id_count[c.id.k];
    for (const auto& [k, n] : id_count)
        if (n > 1)
            error("duplicate-id", "identifier " + std::to_string(k) + " used by " +
                                      std::to_string(n) + " compartments");

    std::set<int> node_ids;
    for (const auto& c : tmn.compartments)
        if (c.kind == CompartmentKind::node) node_ids.insert(c.id.k);

    for (const auto& c : tmn.compartments) {
        const std::string tag = "compartment " + std::to_string(c.id.k);
        if (c.kind == CompartmentKind::node) {
            if (c.id.i != c.id.k || c.id.j != c.id.k)
                error("node-index-rule", tag + ": node requires i = j = k, got (" +
                                             std::to_string(c.id.i) + ", " +
                                             std::to_string(c.id.j) + ")");
            if (c.has_role(Role::transport))
                error("role-kind", tag + ": transport role on a node compartment");
        } else {
            if (c.id.i == c.id.j)
                error("arc-self-loop",
                      tag + ": arc requires i != j (i = j is reserved for nodes)");
            for (const int endpoint : {c.id.i, c.id.j})
                if (!node_ids.count(endpoint))
                    error("dangling-arc", tag + ": endpoint " + std::to_string(endpoint) +
                                              " is not a node compartment");
            for (const Role r : c.roles)
                if (r != Role::transport)
                    error("role-kind", tag + ": role '" + to_string(r) + "' on an arc");
        }
        if (c.id.k <= 0 || c.id.i <= 0 || c.id.j <= 0)
            error("index-positive", tag + ": indices must be positive");
    }

    const auto n_v = tmn.node_count();
    const auto n_a = tmn.arc_count();
    if (tmn.declared_nodes && *tmn.declared_nodes != static_cast<int>(n_v))
        error("count-mismatch", "declared " + std::to_string(*tmn.declared_nodes) +
                                    " nodes, found " + std::to_string(n_v));
    if (tmn.declared_arcs && *tmn.declared_arcs != static_cast<int>(n_a))
        error("count-mismatch", "declared " + std::to_string(*tmn.declared_arcs) +
                                    " arcs, found " + std::to_string(n_a));

    // Weak connectivity: informational only, the definition does not pin it down.
    if (report.ok() && node_ids.size() > 1) {
        std::map<int, std::set<int>> adjacency;
        for (const auto& c : tmn.compartments)
            if (c.kind == CompartmentKind::arc) {
                adjacency[c.id.i].insert(c.id.j);
                adjacency[c.id.j].insert(c.id.i);
            }
        std::set<int> seen;
        std::queue<int> frontier;
        frontier.push(*node_ids.begin());
        seen.insert(*node_ids.begin());
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop();
            for (const int w : adjacency[v])
                if (seen.insert(w).second) frontier.push(w);
        }
        if (seen.size() != node_ids.size())
            report.warnings.push_back(
                {"disconnected", "network is not weakly connected (" +
                                     std::to_string(seen.size()) + " of " +
                                     std::to_string(node_ids.size()) + " nodes reachable)"});
    }
    return report;
}

Digraph compartmental_digraph(const Tmn& tmn) {
    const auto report = validate_tmn(tmn);
    if (!report.ok())
        throw std::invalid_argument("compartmental_digraph: invalid network:\n" + report.to_text());

    Digraph g;
    for (const auto& c : tmn.compartments) {
        if (c.kind == CompartmentKind::node)
            g.nodes.push_back(c.id.k);
        else
            g.edges.push_back({c.id.i, c.id.j, c.id.k});
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    std::sort(g.edges.begin(), g.edges.end(),
              [](const DigraphEdge& a, const DigraphEdge& b) { return a.key < b.key; });
    return g;
}

bool is_finite_time_sustainable(const Compartment& c, FlowDirection direction) {
    if (direction == FlowDirection::exiting) return c.has_role(Role::nonrenewable_reservoir);
    return c.has_role(Role::landfill) || c.has_role(Role::incinerator) ||
           c.has_role(Role::natural_environment);
}

Tmn solid_cycle_network() {
    Tmn tmn;
    tmn.material = "solid waste";
    tmn.compartments = {
        {{1, 1, 1}, CompartmentKind::node, {Role::nonrenewable_reservoir}, "raw material reservoir"},
        {{2, 2, 2}, CompartmentKind::node, {Role::process}, "waste sorting facility"},
        {{3, 3, 3}, CompartmentKind::node, {Role::incinerator}, "incinerator"},
        {{4, 1, 2}, CompartmentKind::arc, {Role::transport}, "extraction, first use and delivery to sorting"},
        {{5, 2, 3}, CompartmentKind::arc, {Role::transport}, "recycling, second use and delivery to incinerator"},
        {{6, 2, 3}, CompartmentKind::arc, {Role::transport}, "truck carrying unsorted waste to incinerator"},
    };
    return tmn;
}

Tmn netzero_network() {
    Tmn tmn;
    tmn.material = "carbon dioxide";
    tmn.compartments = {
        {{1, 1, 1}, CompartmentKind::node, {Role::process}, "CO2 emitter"},
        {{2, 2, 2}, CompartmentKind::node, {Role::natural_environment}, "atmosphere"},
        {{3, 3, 3}, CompartmentKind::node, {Role::process}, "microalgae cultivation"},
        {{4, 1, 2}, CompartmentKind::arc, {Role::transport}, "emitted CO2 flow"},
        {{5, 2, 3}, CompartmentKind::arc, {Role::transport}, "absorbed CO2 flow"},
    };
    return tmn;
}

namespace {

std::vector<std::string> tokenize_declaration(const std::string& line, int line_no) {
    // Splits on whitespace but keeps label="..." intact.
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        bool in_quote = false;
        while (end < line.size() &&
               (in_quote || !std::isspace(static_cast<unsigned char>(line[end])))) {
            if (line[end] == '"') in_quote = !in_quote;
            ++end;
        }
        if (in_quote) throw NetworkParseError(line_no, "unterminated quote");
        tokens.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

int parse_positive_int(const std::string& tok, int line_no, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v <= 0) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw NetworkParseError(line_no, std::string("expected positive integer for ") + what +
                                             ", got '" + tok + "'");
    }
}

std::set<Role> parse_roles(const std::string& spec, int line_no) {
    std::set<Role> roles;
    if (spec == "-" || spec.empty()) return roles;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            roles.insert(role_from_string(item));
        } catch (const std::exception& e) {
            throw NetworkParseError(line_no, e.what());
        }
    }
    return roles;
}

// Applies roles=... / label="..." attributes shared by node and arc lines.
void parse_attributes(Compartment& c, const std::vector<std::string>& tokens, std::size_t first,
                      int line_no) {
    for (std::size_t idx = first; idx < tokens.size(); ++idx) {
        const std::string& tok = tokens[idx];
        if (tok.rfind("roles=", 0) == 0) {
            c.roles = parse_roles(tok.substr(6), line_no);
        } else if (tok.rfind("label=", 0) == 0) {
            std::string v = tok.substr(6);
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
            c.label = v;
        } else {
            throw NetworkParseError(line_no, "unknown attribute '" + tok + "'");
        }
    }
}

}  // namespace

Tmn parse_network(const std::string& text) {
    Tmn tmn;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto tokens = tokenize_declaration(line, line_no);
        if (tokens.empty()) continue;

        const std::string& head = tokens[0];
        if (head == "material:") {
            std::string value;
            for (std::size_t idx = 1; idx < tokens.size(); ++idx) {
                if (idx > 1) value += ' ';
                value += tokens[idx];
            }
            tmn.material = value;
        } else if (head == "counts:") {
            if (tokens.size() != 3)
                throw NetworkParseError(line_no, "counts: expects <n_nodes> <n_arcs>");
            tmn.declared_nodes = parse_positive_int(tokens[1], line_no, "node count");
            tmn.declared_arcs = parse_positive_int(tokens[2], line_no, "arc count");
        } else if (head == "node") {
            if (tokens.size() < 2) throw NetworkParseError(line_no, "node expects <k>");
            Compartment c;
            const int k = parse_positive_int(tokens[1], line_no, "node id");
            c.id = {k, k, k};
            c.kind = CompartmentKind::node;
            parse_attributes(c, tokens, 2, line_no);
            tmn.compartments.push_back(std::move(c));
        } else if (head == "arc") {
            if (tokens.size() < 4) throw NetworkParseError(line_no, "arc expects <k> <i> <j>");
            Compartment c;
            c.id.k = parse_positive_int(tokens[1], line_no, "arc id");
            c.id.i = parse_positive_int(tokens[2], line_no, "arc origin");
            c.id.j = parse_positive_int(tokens[3], line_no, "arc destination");
            c.kind = CompartmentKind::arc;
            parse_attributes(c, tokens, 4, line_no);
            tmn.compartments.push_back(std::move(c));
        } else {
            throw NetworkParseError(line_no, "unknown declaration '" + head + "'");
        }
    }
    return tmn;
}

std::string serialize_network(const Tmn& tmn) {
    std::ostringstream out;
    if (!tmn.material.empty()) out << "material: " << tmn.material << "\n";
    if (tmn.declared_nodes && tmn.declared_arcs)
        out << "counts: " << *tmn.declared_nodes << " " << *tmn.declared_arcs << "\n";
    auto attributes = [&](const Compartment& c) {
        if (!c.roles.empty()) {
            out << " roles=";
            bool first = true;
            for (const Role r : c.roles) {
                if (!first) out << ",";
                out << to_string(r);
                first = false;
            }
        }
        if (!c.label.empty()) out << " label=\"" << c.label << "\"";
        out << "\n";
    };
    for (const auto& c : tmn.compartments) {
        if (c.kind == CompartmentKind::node) {
            out << "node " << c.id.k;
        } else {
            out << "arc " << c.id.k << " " << c.id.i << " " << c.id.j;
        }
        attributes(c);
    }
    return out.str();
}

Tmn load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_network(buffer.str());
}

}  // namespace recirc
