#include "core/circularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace recirc {

void ContinuousFlow::validate() const {
    if (times.empty()) throw std::invalid_argument("continuous flow: empty sample series");
    if (times.size() != rates.size())
        throw std::invalid_argument("continuous flow: times/rates length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(rates[i]))
            throw std::invalid_argument("continuous flow: non-finite sample");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("continuous flow: times must be strictly increasing");
    }
}

double ContinuousFlow::rate_at(double t) const {
    if (times.empty()) return 0.0;
    if (t < times.front() || t > times.back()) return 0.0;
    const auto upper = std::upper_bound(times.begin(), times.end(), t);
    if (upper == times.begin()) return rates.front();
    if (upper == times.end()) return rates.back();
    const auto hi = static_cast<std::size_t>(upper - times.begin());
    const auto lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return rates[lo] + w * (rates[hi] - rates[lo]);
}

void SolidScenario::validate() const {
    if (!(total_mass >= 0.0) || !std::isfinite(total_mass))
        throw std::invalid_argument("solid scenario: total_mass must be >= 0");
    if (!(sorting_success_pct >= 0.0 && sorting_success_pct <= 100.0))
        throw std::invalid_argument("solid scenario: sorting_success_pct must be in [0, 100]");
    for (const double d : {sorting_duration, extraction_exit_time, first_use_duration,
                           transport_unsorted_duration, second_life_duration})
        if (!(d >= 0.0) || !std::isfinite(d))
            throw std::invalid_argument("solid scenario: durations must be >= 0");
    if (!(second_life_duration > transport_unsorted_duration))
        throw std::invalid_argument(
            "solid scenario: second_life_duration must exceed transport_unsorted_duration");
}

MassSplit mass_split(double mass, double success_pct) {
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("mass_split: mass must be >= 0");
    if (!(success_pct >= 0.0 && success_pct <= 100.0))
        throw std::invalid_argument("mass_split: success_pct must be in [0, 100]");
    MassSplit split;
    if (success_pct >= 50.0) {
        split.recycled = mass * (success_pct / 100.0);
        split.unsorted = mass - split.recycled;  // exact: recycled >= mass/2 (Sterbenz)
    } else {
        split.unsorted = mass * (1.0 - success_pct / 100.0);
        split.recycled = mass - split.unsorted;  // exact: unsorted >= mass/2
    }
    return split;
}

double lambda_solid_scenario(const SolidScenario& sc, double t) {
    sc.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("lambda_solid_scenario: t must be >= 0");
    if (t < sc.unsorted_arrival_time()) return -sc.total_mass;
    if (t < sc.recycled_arrival_time()) return -(sc.total_mass + mass_split(sc.total_mass, sc.sorting_success_pct).unsorted);
    return -2.0 * sc.total_mass;
}

std::vector<FlowEvent> solid_scenario_events(const SolidScenario& sc) {
    sc.validate();
    const auto split = mass_split(sc.total_mass, sc.sorting_success_pct);
    std::vector<FlowEvent> events;
    auto add = [&](double time, double mass, int from_k, int to_k) {
        if (mass > 0.0) events.push_back({time, mass, from_k, to_k});
    };
    // Compartment ids follow solid_cycle_network(): 1 reservoir, 2 sorter,
    // 3 incinerator, 4 first-use arc, 5 recycled arc, 6 truck arc.
    add(0.0, sc.total_mass, 1, 4);
    add(sc.sorter_entry_time(), sc.total_mass, 4, 2);
    add(sc.sorter_exit_time(), split.unsorted, 2, 6);
    add(sc.sorter_exit_time(), split.recycled, 2, 5);
    add(sc.unsorted_arrival_time(), split.unsorted, 6, 3);
    add(sc.recycled_arrival_time(), split.recycled, 5, 3);
    return events;
}

int net_multiplicity(const Tmn& tmn, int from_k, int to_k) {
    const Compartment* from = tmn.find(from_k);
    const Compartment* to = tmn.find(to_k);
    if (!from)
        throw std::invalid_argument("transfer references unknown compartment " +
                                    std::to_string(from_k));
    if (!to)
        throw std::invalid_argument("transfer references unknown compartment " +
                                    std::to_string(to_k));
    int multiplicity = 0;
    if (is_finite_time_sustainable(*from, FlowDirection::exiting)) multiplicity += 1;
    if (is_finite_time_sustainable(*to, FlowDirection::entering)) multiplicity += 1;
    if (is_finite_time_sustainable(*to, FlowDirection::exiting)) multiplicity -= 1;
    if (is_finite_time_sustainable(*from, FlowDirection::entering)) multiplicity -= 1;
    return multiplicity;
}

double lambda_from_ledger(const Tmn& tmn, std::span<const FlowEvent> events,
                          std::span<const ContinuousFlow> flows, double t,
                          const CircularityConfig& cfg) {
    const auto report = validate_tmn(tmn);
    if (!report.ok())
        throw std::invalid_argument("lambda_from_ledger: invalid network:\n" + report.to_text());
    if (!(t >= 0.0)) throw std::invalid_argument("lambda_from_ledger: t must be >= 0");
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("lambda_from_ledger: delta must be > 0");

    double batch_mass = 0.0;
    for (const auto& ev : events) {
        if (!(ev.mass > 0.0) || !std::isfinite(ev.mass))
            throw std::invalid_argument("event mass must be strictly positive");
        if (!(ev.time >= 0.0)) throw std::invalid_argument("event time must be >= 0");
        const int multiplicity = net_multiplicity(tmn, ev.from_k, ev.to_k);
        if (ev.time <= t && multiplicity != 0) batch_mass += multiplicity * ev.mass;
    }

    double flow_rate = 0.0;
    for (const auto& flow : flows) {
        flow.validate();
        const int multiplicity = net_multiplicity(tmn, flow.from_k, flow.to_k);
        if (multiplicity != 0) flow_rate += multiplicity * flow.rate_at(t);
    }

    return -(batch_mass + cfg.delta * flow_rate);
}

double lambda_netzero(const ContinuousFlow& emitter, const ContinuousFlow& remover, double t,
                      const CircularityConfig& cfg) {
    emitter.validate();
    remover.validate();
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("lambda_netzero: delta must be > 0");
    return -cfg.delta * (emitter.rate_at(t) - remover.rate_at(t));
}

namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Strips comments/blank lines, returns (line_no, content) pairs.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> lines;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.emplace_back(line_no, line);
    }
    return lines;
}

}  // namespace

std::vector<FlowEvent> parse_event_log(const std::string& text) {
    std::vector<FlowEvent> events;
    for (const auto& [line_no, line] : content_lines(text)) {
        std::istringstream in(line);
        FlowEvent ev;
        if (!(in >> ev.time >> ev.mass >> ev.from_k >> ev.to_k))
            throw std::runtime_error("event log line " + std::to_string(line_no) +
                                     ": expected 'time mass from_k to_k'");
        std::string extra;
        if (in >> extra)
            throw std::runtime_error("event log line " + std::to_string(line_no) +
                                     ": trailing content '" + extra + "'");
        events.push_back(ev);
    }
    return events;
}

std::string serialize_event_log(std::span<const FlowEvent> events) {
    std::ostringstream out;
    out << "# time mass from_k to_k\n";
    for (const auto& ev : events)
        out << format_g17(ev.time) << " " << format_g17(ev.mass) << " " << ev.from_k << " "
            << ev.to_k << "\n";
    return out.str();
}

std::vector<ContinuousFlow> parse_flow_file(const std::string& text) {
    std::vector<ContinuousFlow> flows;
    for (const auto& [line_no, line] : content_lines(text)) {
        std::istringstream in(line);
        std::string head;
        in >> head;
        if (head == "flow") {
            ContinuousFlow flow;
            std::string extra;
            if (!(in >> flow.from_k >> flow.to_k) || (in >> extra))
                throw std::runtime_error("flow file line " + std::to_string(line_no) +
                                         ": expected 'flow from_k to_k'");
            flows.push_back(std::move(flow));
        } else {
            if (flows.empty())
                throw std::runtime_error("flow file line " + std::to_string(line_no) +
                                         ": sample before any 'flow' header");
            std::istringstream sample(line);
            double t = 0.0, rate = 0.0;
            std::string extra;
            if (!(sample >> t >> rate) || (sample >> extra))
                throw std::runtime_error("flow file line " + std::to_string(line_no) +
                                         ": expected 'time rate'");
            flows.back().times.push_back(t);
            flows.back().rates.push_back(rate);
        }
    }
    for (const auto& flow : flows) flow.validate();
    return flows;
}

std::string serialize_flow_file(std::span<const ContinuousFlow> flows) {
    std::ostringstream out;
    for (const auto& flow : flows) {
        out << "flow " << flow.from_k << " " << flow.to_k << "\n";
        for (std::size_t i = 0; i < flow.times.size(); ++i)
            out << format_g17(flow.times[i]) << " " << format_g17(flow.rates[i]) << "\n";
    }
    return out.str();
}

}  // namespace recirc
