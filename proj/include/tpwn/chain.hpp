#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "tpwn/analysis.hpp"
#include "tpwn/timing.hpp"

namespace tpwn {

inline constexpr std::size_t default_chain_cap = 1'000'000;

struct ChainEdge {
    std::uint32_t transition = 0;
    Rational probability;
    std::uint32_t target = 0;
};

struct ChainState {
    AbstractState state;
    bool final_state = false;
    std::int64_t terminal_value = 0;       // max entry, final states only
    std::int64_t reward = 0;               // earliest start, non-final states only
    std::vector<std::uint32_t> scheduled;  // the conflict set the scheduler picks
    std::vector<ChainEdge> edges;          // one per member of `scheduled`
};

// The Markov chain induced by an earliest-first scheduler on the rebased
// timestamp abstraction. State 0 is {i:0}; discovery is breadth-first with
// successors in ascending transition order, so indices are reproducible.
struct SchedulerChain {
    std::vector<ChainState> states;
    std::size_t final_count() const {
        std::size_t n = 0;
        for (const auto& s : states) n += s.final_state;
        return n;
    }
};

// Builds the chain. Soundness of the net is assumed here (the caller either
// verified it or asserted it); a reachable dead end raises DeadlockError and
// a conflict-set family that fails to partition the enabled transitions
// raises NotConfusionFreeError, so asserting wrongly is detected rather than
// silently mispriced.
inline SchedulerChain build_chain(const WorkflowNet& net, TieBreak tie = TieBreak::least_index,
                                  std::size_t max_states = default_chain_cap) {
    SchedulerChain chain;
    std::unordered_map<AbstractState, std::uint32_t, TimestampVectorHash> index;
    Marking final = net.final_marking();

    AbstractState init = initial_timestamps(net);
    chain.states.push_back({init});
    index.emplace(init, 0);

    for (std::uint32_t s = 0; s < chain.states.size(); ++s) {
        AbstractState x = chain.states[s].state;  // copy: vector may grow
        Marking m = x.support();
        if (m == final) {
            chain.states[s].final_state = true;
            chain.states[s].terminal_value = x.max_entry();
            continue;
        }

        auto sets = timed_conflict_sets(net, x);
        if (sets.empty())
            throw DeadlockError("dead end at " + timestamps_name(net, x) +
                                    "; the net is not sound",
                                net.marking_name(m));
        std::size_t members = 0;
        for (const auto& c : sets) members += c.transitions.size();
        if (members != enabled_transitions(net, m).size())
            throw NotConfusionFreeError("conflict sets at " + net.marking_name(m) +
                                        " do not partition the enabled transitions");

        auto chosen = earliest_conflict_set(net, x, tie);
        Rational total = 0;
        for (auto t : chosen.transitions) total += net.transitions[t].weight;

        chain.states[s].reward = chosen.start;
        chain.states[s].scheduled = chosen.transitions;
        for (auto t : chosen.transitions) {
            AbstractState succ = local_step(net, x, t);
            auto [it, fresh] = index.try_emplace(succ, static_cast<std::uint32_t>(chain.states.size()));
            if (fresh) {
                if (chain.states.size() >= max_states)
                    throw StateExplosionError("chain state cap of " + std::to_string(max_states) +
                                                  " exceeded",
                                              max_states);
                chain.states.push_back({succ});
            }
            chain.states[s].edges.push_back({t, net.transitions[t].weight / total, it->second});
        }
    }
    return chain;
}

// Graphviz rendering; nodes show the rebased timestamps plus reward or
// terminal value, edges the transition and its branching probability.
inline std::string chain_to_dot(const WorkflowNet& net, const SchedulerChain& chain) {
    std::string out = "digraph chain {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
    for (std::uint32_t s = 0; s < chain.states.size(); ++s) {
        const auto& st = chain.states[s];
        out += "  s" + std::to_string(s) + " [label=\"" + timestamps_name(net, st.state);
        if (st.final_state)
            out += " value=" + std::to_string(st.terminal_value) + "\", peripheries=2];\n";
        else
            out += " r=" + std::to_string(st.reward) + "\"];\n";
    }
    for (std::uint32_t s = 0; s < chain.states.size(); ++s)
        for (const auto& e : chain.states[s].edges)
            out += "  s" + std::to_string(s) + " -> s" + std::to_string(e.target) + " [label=\"" +
                   net.transitions[e.transition].name + " " + to_fraction_string(e.probability) +
                   "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace tpwn
