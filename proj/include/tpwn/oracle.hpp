#pragma once

// Reference evaluators for the expected completion time, kept deliberately
// independent of the chain/linear-solve pipeline so the two can cross-check
// each other. Enumeration walks scheduler runs one by one and sums
// probability-weighted completion times; the Mazurkiewicz helper permutes
// firing sequences without changing what they compute.

#include <cstdint>
#include <utility>
#include <vector>

#include <tpwn/errors.hpp>
#include <tpwn/net.hpp>
#include <tpwn/rng.hpp>
#include <tpwn/timing.hpp>

namespace tpwn {

// Which conflict set the enumerated scheduler fires from at each step. All
// rules must yield the same expected value; only the run trees differ.
enum class SchedulerRule {
    earliest,   // smallest start time, least-index tie break
    leftmost,   // set containing the lowest-numbered enabled transition
    rightmost,  // set containing the highest-numbered enabled transition
};

struct EnumerationResult {
    Rational lower_bound = 0;   // sum of prob * completion over finished runs
    Rational covered_mass = 0;  // total probability of those runs
    bool exact = false;         // nothing truncated, no dead ends: the bound is the value
    std::uint64_t completed_runs = 0;
    std::uint64_t truncated_branches = 0;
    std::uint64_t dead_ends = 0;
};

namespace detail {

inline const TimedConflictSet& choose_set(const WorkflowNet& net,
                                          const TimestampVector& x,
                                          const std::vector<TimedConflictSet>& sets,
                                          SchedulerRule rule) {
    switch (rule) {
        case SchedulerRule::earliest: {
            // same choice earliest_conflict_set makes; recomputed here to keep
            // a reference into `sets` instead of a copy
            std::size_t best = 0;
            for (std::size_t j = 1; j < sets.size(); ++j) {
                if (sets[j].start < sets[best].start) best = j;
            }
            return sets[best];
        }
        case SchedulerRule::leftmost:
            // sets are ordered by their smallest member
            return sets.front();
        case SchedulerRule::rightmost: {
            std::size_t best = 0;
            for (std::size_t j = 1; j < sets.size(); ++j) {
                if (sets[j].transitions.back() > sets[best].transitions.back()) best = j;
            }
            return sets[best];
        }
    }
    return sets.front();  // unreachable
}

}  // namespace detail

// Expected completion time by direct enumeration of the chosen scheduler's
// runs. Branches whose probability drops below mass_epsilon are cut, so the
// result is a lower bound covering covered_mass of the run space; with
// mass_epsilon = 0 the walk either exhausts every run (exact) or throws
// NonTerminationError once some branch exceeds depth_cap firings.
inline EnumerationResult enumerate_expected_time(const WorkflowNet& net, SchedulerRule rule,
                                                 const Rational& mass_epsilon,
                                                 std::size_t depth_cap = 10000) {
    EnumerationResult res;
    const Marking final = net.final_marking();

    struct Node {
        TimestampVector x;
        Rational prob;
        std::size_t depth;
    };
    std::vector<Node> todo;
    todo.push_back({initial_timestamps(net), 1, 0});

    while (!todo.empty()) {
        Node n = std::move(todo.back());
        todo.pop_back();

        const Marking m = n.x.support();
        if (m == final) {
            res.lower_bound += n.prob * n.x.max_entry();
            res.covered_mass += n.prob;
            ++res.completed_runs;
            continue;
        }
        const auto sets = timed_conflict_sets(net, n.x);
        if (sets.empty()) {
            ++res.dead_ends;
            continue;
        }
        if (n.prob < mass_epsilon) {
            ++res.truncated_branches;
            continue;
        }
        if (n.depth >= depth_cap) {
            if (mass_epsilon == 0)
                throw NonTerminationError("enumeration hit the depth cap at " +
                                          timestamps_name(net, n.x) +
                                          " with mass_epsilon = 0; the run set is infinite");
            ++res.truncated_branches;
            continue;
        }

        const TimedConflictSet& chosen = detail::choose_set(net, n.x, sets, rule);
        Rational total = 0;
        for (auto t : chosen.transitions) total += net.transitions[t].weight;
        for (auto t : chosen.transitions) {
            todo.push_back({advance_timestamps(net, n.x, t),
                            n.prob * (net.transitions[t].weight / total), n.depth + 1});
        }
    }

    res.exact = res.truncated_branches == 0 && res.dead_ends == 0;
    return res;
}

// Random adjacent swaps of independent transitions in a firing sequence.
// A swap is committed only if the permuted sequence is still firable from the
// initial marking, which is checked by actually firing it; everything else is
// rejected silently. Returns the permuted run.
inline std::vector<std::uint32_t> mazurkiewicz_swaps(const WorkflowNet& net,
                                                     std::vector<std::uint32_t> run,
                                                     std::size_t attempts, std::uint64_t seed) {
    if (run.size() < 2) return run;

    // prefix[k] is the marking before run[k]
    std::vector<Marking> prefix(run.size() + 1);
    prefix[0] = net.initial_marking();
    for (std::size_t k = 0; k < run.size(); ++k) prefix[k + 1] = fire(net, prefix[k], run[k]);

    Rng rng(seed);
    for (std::size_t a = 0; a < attempts; ++a) {
        const std::size_t p = uniform_below(rng, run.size() - 1);
        const std::uint32_t first = run[p];
        const std::uint32_t second = run[p + 1];
        if (!independent(net, first, second)) continue;
        if (!enabled(net, prefix[p], second)) continue;  // `first` enabled `second`
        Marking mid;
        try {
            mid = fire(net, prefix[p], second);
            if (!enabled(net, mid, first)) continue;
            if (fire(net, mid, first) != prefix[p + 2]) continue;
        } catch (const UnsafeFiringError&) {
            continue;  // reordering would double-mark a place
        }
        run[p] = second;
        run[p + 1] = first;
        prefix[p + 1] = mid;
    }
    return run;
}

}  // namespace tpwn
