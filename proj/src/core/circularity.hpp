#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/network.hpp"

namespace recirc {

// Instantaneous circularity of a material network:
//
//     lambda(t) = -( m_b(t) + delta * f_c(t) )
//
// where m_b accumulates the finite-time sustainable batch masses moved up to
// time t and f_c is the net finite-time sustainable continuous flow at time
// t, scaled by a fixed interval delta so both terms are masses. Zero is
// maximal circularity; every qualifying transfer pushes lambda down.

// One batch transfer between compartments, identified by their k ids.
struct FlowEvent {
    double time = 0.0;  // seconds, >= 0
    double mass = 0.0;  // kg, strictly positive
    int from_k = 0;
    int to_k = 0;

    bool operator==(const FlowEvent&) const = default;
};

// Sampled continuous flow between two compartments. Rates interpolate
// piecewise-linearly between samples and are zero outside the sampled span;
// densify the sampling if that is too coarse.
struct ContinuousFlow {
    int from_k = 0;
    int to_k = 0;
    std::vector<double> times;  // strictly increasing
    std::vector<double> rates;  // kg/s, same length as times

    double rate_at(double t) const;
    void validate() const;
};

struct CircularityConfig {
    // Fixed flow-to-mass conversion interval. Arbitrary, but must be held
    // constant across every lambda computation being compared.
    double delta = 1.0;  // seconds
};

// Timing of one batch of extracted solid material: first use, sorting, then
// the split journeys to the incinerator. The unsorted share rides a truck
// straight there; the recycled share lives a second life first, so
// second_life_duration must exceed transport_unsorted_duration.
struct SolidScenario {
    double total_mass = 0.0;            // kg extracted from the reservoir
    double sorting_success_pct = 0.0;   // in [0, 100]
    double sorting_duration = 0.0;      // time spent in the sorting facility
    double extraction_exit_time = 0.0;  // material leaves the reservoir
    double first_use_duration = 0.0;
    double transport_unsorted_duration = 0.0;  // sorter -> incinerator, direct
    double second_life_duration = 0.0;         // recycled use + transport

    double sorter_entry_time() const { return extraction_exit_time + first_use_duration; }
    double sorter_exit_time() const { return sorter_entry_time() + sorting_duration; }
    double unsorted_arrival_time() const { return sorter_exit_time() + transport_unsorted_duration; }
    double recycled_arrival_time() const { return sorter_exit_time() + second_life_duration; }
    // How much longer the recycled share stayed in use.
    double life_extension() const { return recycled_arrival_time() - unsorted_arrival_time(); }

    void validate() const;  // throws std::invalid_argument
};

struct MassSplit {
    double recycled = 0.0;  // share sorted successfully
    double unsorted = 0.0;  // share sent straight to the incinerator
};

// Splits a batch by sorting success percentage. The smaller share is derived
// by subtraction from the larger one, so recycled + unsorted == mass holds
// exactly in floating point.
MassSplit mass_split(double mass, double success_pct);

// Closed-form lambda of the solid scenario: -m before the unsorted share
// arrives at the incinerator, -(m + m_u) until the recycled share arrives,
// -2m afterwards.
double lambda_solid_scenario(const SolidScenario& sc, double t);

// The same timeline as discrete ledger events against solid_cycle_network().
// The extracted batch is on the books from t = 0, matching the closed form,
// which charges -m over the whole first interval. Zero-mass transfers are
// omitted.
std::vector<FlowEvent> solid_scenario_events(const SolidScenario& sc);

// Ledger evaluation of lambda at time t. Events with time <= t contribute
// their mass once per qualifying endpoint, with sign following the net
// accounting: +1 leaving a reservoir, +1 entering a terminal location
// (landfill, incinerator, natural environment), -1 entering a reservoir,
// -1 leaving a terminal location (removal). Continuous flows contribute
// delta * rate(t) with the same multiplicity rule.
double lambda_from_ledger(const Tmn& tmn, std::span<const FlowEvent> events,
                          std::span<const ContinuousFlow> flows, double t,
                          const CircularityConfig& cfg = {});

// Two-flow special case of the net-zero cycle:
// lambda = -delta * (emitted(t) - removed(t)).
double lambda_netzero(const ContinuousFlow& emitter, const ContinuousFlow& remover, double t,
                      const CircularityConfig& cfg = {});

// Signed qualifying multiplicity of a transfer from from_k to to_k. Throws if
// either compartment is absent from the network.
int net_multiplicity(const Tmn& tmn, int from_k, int to_k);

// Event-log format: one "time mass from_k to_k" record per line.
std::vector<FlowEvent> parse_event_log(const std::string& text);
std::string serialize_event_log(std::span<const FlowEvent> events);

// Flow format: "flow <from_k> <to_k>" header, then "time rate" sample lines.
std::vector<ContinuousFlow> parse_flow_file(const std::string& text);
std::string serialize_flow_file(std::span<const ContinuousFlow> flows);

}  // namespace recirc
