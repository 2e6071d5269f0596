#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpwn/net.hpp"

namespace tpwn {

inline constexpr std::size_t default_marking_cap = 10'000'000;

// Breadth-first marking graph. Index 0 is the initial marking; indices are
// assigned in discovery order with transitions expanded in ascending index
// order, so the numbering is reproducible.
struct ReachabilityGraph {
    std::vector<Marking> markings;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;  // (transition, target)
    std::unordered_map<Marking, std::uint32_t, MarkingHash> index;
    std::optional<std::uint32_t> final_index;  // position of {o}, if reached

    std::size_t size() const { return markings.size(); }
};

namespace detail {

// Reconstructs a firing sequence to state `to` from BFS parents.
inline std::vector<std::uint32_t> path_to(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& parent, std::uint32_t to) {
    std::vector<std::uint32_t> seq;
    for (std::uint32_t s = to; s != 0; s = parent[s].first) seq.push_back(parent[s].second);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

}  // namespace detail

// Explores all markings reachable from {i}, enforcing 1-safety on the way.
// Throws Unsafe1Error with a witness trace if a firing would double-mark a
// place, StateExplosionError past max_markings.
inline ReachabilityGraph explore(const WorkflowNet& net,
                                 std::size_t max_markings = default_marking_cap) {
    ReachabilityGraph rg;
    Marking final = net.final_marking();
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parent{{0, 0}};  // (state, transition)

    rg.markings.push_back(net.initial_marking());
    rg.index.emplace(rg.markings[0], 0);
    rg.edges.emplace_back();
    if (rg.markings[0] == final) rg.final_index = 0;

    for (std::uint32_t s = 0; s < rg.markings.size(); ++s) {
        Marking m = rg.markings[s];  // copy: rg.markings may reallocate below
        for (std::uint32_t t = 0; t < net.transitions.size(); ++t) {
            if (!enabled(net, m, t)) continue;
            const auto& rec = net.transitions[t];
            Marking without = m - rec.pre;
            if (without.intersects(rec.post)) {
                auto p = (without & rec.post).find_first();
                auto seq = detail::path_to(parent, s);
                seq.push_back(t);
                throw Unsafe1Error("firing '" + rec.name + "' after '" + trace_name(net, seq) +
                                       "' puts a second token on '" + net.places[p] + "'",
                                   net.places[p], trace_name(net, seq));
            }
            Marking succ = without | rec.post;
            auto [it, fresh] = rg.index.try_emplace(succ, static_cast<std::uint32_t>(rg.markings.size()));
            if (fresh) {
                if (rg.markings.size() >= max_markings)
                    throw StateExplosionError("reachable marking cap of " +
                                                  std::to_string(max_markings) + " exceeded",
                                              max_markings);
                rg.markings.push_back(succ);
                rg.edges.emplace_back();
                parent.emplace_back(s, t);
                if (succ == final) rg.final_index = it->second;
            }
            rg.edges[s].emplace_back(t, it->second);
        }
    }
    return rg;
}

// Workflow shape: i has no incoming arcs, o no outgoing arcs, and the flow
// relation plus a return arc o -> i strongly connects all places and
// transitions. `why` gets a one-line reason on failure.
inline bool check_workflow_shape(const WorkflowNet& net, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!net.producers[net.initial].empty())
        return fail("initial place '" + net.places[net.initial] + "' has incoming arcs");
    if (!net.consumers[net.final].empty())
        return fail("final place '" + net.places[net.final] + "' has outgoing arcs");

    // Nodes: places then transitions. Arcs of F plus o -> i.
    const auto np = net.place_count();
    const auto nodes = np + net.transition_count();
    std::vector<std::vector<std::uint32_t>> fwd(nodes), bwd(nodes);
    auto add = [&](std::size_t a, std::size_t b) {
        fwd[a].push_back(static_cast<std::uint32_t>(b));
        bwd[b].push_back(static_cast<std::uint32_t>(a));
    };
    for (std::uint32_t t = 0; t < net.transitions.size(); ++t) {
        for (auto p : net.transitions[t].pre_places) add(p, np + t);
        for (auto p : net.transitions[t].post_places) add(np + t, p);
    }
    add(net.final, net.initial);

    auto reaches_all = [&](const std::vector<std::vector<std::uint32_t>>& adj) {
        std::vector<char> seen(nodes, 0);
        std::deque<std::uint32_t> queue{net.initial};
        seen[net.initial] = 1;
        std::size_t count = 0;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            ++count;
            for (auto w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
        }
        return count == nodes;
    };
    if (!reaches_all(fwd) || !reaches_all(bwd))
        return fail("net is not strongly connected once o is fed back to i");
    return true;
}

struct SoundnessResult {
    bool sound = false;
    std::optional<Marking> witness;  // a reachable marking that cannot reach {o}
};

// Easy soundness over an explored graph: {o} must be reachable from every
// reachable marking. Witness prefers a dead marking (nothing enabled).
inline SoundnessResult check_soundness(const WorkflowNet& net, const ReachabilityGraph& rg) {
    std::vector<char> coreach(rg.size(), 0);
    if (rg.final_index) {
        std::vector<std::vector<std::uint32_t>> rev(rg.size());
        for (std::uint32_t s = 0; s < rg.size(); ++s)
            for (auto [t, succ] : rg.edges[s]) rev[succ].push_back(s);
        std::deque<std::uint32_t> queue{*rg.final_index};
        coreach[*rg.final_index] = 1;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto w : rev[v])
                if (!coreach[w]) {
                    coreach[w] = 1;
                    queue.push_back(w);
                }
        }
    }
    SoundnessResult result;
    result.sound = true;
    std::optional<std::uint32_t> any_bad;
    for (std::uint32_t s = 0; s < rg.size(); ++s) {
        if (coreach[s]) continue;
        result.sound = false;
        if (!any_bad) any_bad = s;
        if (rg.edges[s].empty()) {  // dead end: the most telling witness
            result.witness = rg.markings[s];
            return result;
        }
    }
    if (any_bad) result.witness = rg.markings[*any_bad];
    return result;
}

struct FreeChoiceResult {
    bool free_choice = false;
    std::string witness;  // pair of places with overlapping, unequal postsets
};

// Free choice: any two places sharing an output transition have identical
// postsets. Purely structural.
inline FreeChoiceResult check_free_choice(const WorkflowNet& net) {
    for (std::uint32_t p = 0; p < net.place_count(); ++p) {
        for (std::uint32_t q = p + 1; q < net.place_count(); ++q) {
            const auto& cp = net.consumers[p];
            const auto& cq = net.consumers[q];
            bool overlap = false;
            for (auto t : cp)
                if (std::find(cq.begin(), cq.end(), t) != cq.end()) {
                    overlap = true;
                    break;
                }
            if (overlap && cp != cq)
                return {false, "places '" + net.places[p] + "' and '" + net.places[q] +
                                   "' share an output transition but their postsets differ"};
        }
    }
    return {true, ""};
}

struct ConfusionWitness {
    Marking marking;
    std::uint32_t fired;     // t: the transition whose firing shifts u's conflict set
    std::uint32_t observed;  // u
};

struct ConfusionResult {
    bool confusion_free = false;
    std::optional<ConfusionWitness> witness;
};

// Behavioural confusion-freeness: for every reachable marking m and every
// pair of concurrently enabled t, u, the conflict set of u is unchanged by
// removing t's input tokens and by adding t's output tokens.
inline ConfusionResult check_confusion_free(const WorkflowNet& net, const ReachabilityGraph& rg) {
    for (const auto& m : rg.markings) {
        auto enabled_here = enabled_transitions(net, m);
        for (auto t : enabled_here) {
            const auto& rec = net.transitions[t];
            Marking removed = m - rec.pre;
            Marking fired_m = removed | rec.post;  // 1-safety already enforced by explore
            for (auto u : enabled_here) {
                if (u == t || !independent(net, t, u)) continue;
                auto base = conflict_set(net, m, u);
                if (conflict_set(net, removed, u) != base ||
                    conflict_set(net, fired_m, u) != base)
                    return {false, ConfusionWitness{m, t, u}};
            }
        }
    }
    return {true, std::nullopt};
}

// Everything the `check` pipeline reports. confusion_free and sound stay
// unset when 1-safety already failed (they are undefined then).
struct StructuralReport {
    bool workflow_shape = false;
    bool one_safe = false;
    bool free_choice = false;
    std::optional<bool> confusion_free;
    std::optional<bool> sound;
    std::size_t marking_count = 0;
    std::string shape_reason;
    std::string free_choice_witness;
    std::optional<std::string> unsafe_place;
    std::optional<std::string> unsafe_trace;
    std::optional<Marking> unsound_witness;
    std::optional<ConfusionWitness> confusion_witness;

    // A net is a valid model iff it has workflow shape, is 1-safe and
    // confusion-free. Soundness is a separate verdict (finite vs infinite).
    bool valid_model() const {
        return workflow_shape && one_safe && confusion_free.value_or(false);
    }
};

// Runs every check, converting 1-safety violations into report fields.
// StateExplosionError still propagates: a truncated exploration proves nothing.
inline StructuralReport analyze_structure(const WorkflowNet& net,
                                          std::size_t max_markings = default_marking_cap) {
    StructuralReport report;
    report.workflow_shape = check_workflow_shape(net, &report.shape_reason);
    auto fc = check_free_choice(net);
    report.free_choice = fc.free_choice;
    report.free_choice_witness = fc.witness;
    try {
        auto rg = explore(net, max_markings);
        report.one_safe = true;
        report.marking_count = rg.size();
        if (report.free_choice) {
            // Free choice already implies confusion-freeness; skip the
            // quadratic scan over the marking graph.
            report.confusion_free = true;
        } else {
            auto cf = check_confusion_free(net, rg);
            report.confusion_free = cf.confusion_free;
            report.confusion_witness = cf.witness;
        }
        auto sound = check_soundness(net, rg);
        report.sound = sound.sound;
        report.unsound_witness = sound.witness;
    } catch (const Unsafe1Error& e) {
        report.one_safe = false;
        report.unsafe_place = e.place;
        report.unsafe_trace = e.trace;
    }
    return report;
}

}  // namespace tpwn
