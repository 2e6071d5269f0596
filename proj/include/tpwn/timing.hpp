#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpwn/net.hpp"

namespace tpwn {

// Per-place token arrival times. Unmarked places carry `unmarked` (the bottom
// value); it is absorbing for addition and below every timestamp, so max()
// ignores it and comparisons treat it as smallest.
struct TimestampVector {
    static constexpr std::int64_t unmarked = -1;
    std::vector<std::int64_t> at;  // one entry per place

    explicit TimestampVector(std::size_t places = 0)
        : at(places, unmarked) {}

    bool marked(std::size_t p) const { return at[p] != unmarked; }

    Marking support() const {
        Marking m(at.size());
        for (std::size_t p = 0; p < at.size(); ++p)
            if (at[p] != unmarked) m.set(p);
        return m;
    }

    // max over marked places; 0 when nothing is marked.
    std::int64_t max_entry() const {
        std::int64_t best = 0;
        for (auto v : at)
            if (v != unmarked && v > best) best = v;
        return best;
    }

    bool operator==(const TimestampVector& o) const { return at == o.at; }
};

struct TimestampVectorHash {
    std::size_t operator()(const TimestampVector& x) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto v : x.at) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// States of the finite abstraction are timestamp vectors rebased to the
// running start time; entries of reachable ones lie in [0, max_duration].
using AbstractState = TimestampVector;

inline std::string timestamps_name(const WorkflowNet& net, const TimestampVector& x) {
    std::string out = "{";
    bool first = true;
    for (std::size_t p = 0; p < x.at.size(); ++p) {
        if (!x.marked(p)) continue;
        if (!first) out += ",";
        out += net.places[p] + ":" + std::to_string(x.at[p]);
        first = false;
    }
    return out + "}";
}

inline TimestampVector initial_timestamps(const WorkflowNet& net) {
    TimestampVector x(net.place_count());
    x.at[net.initial] = 0;
    return x;
}

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("timestamp arithmetic overflowed 64 bits");
    return r;
}

}  // namespace detail

// Latest arrival among t's input tokens: when t starts if fired now.
inline std::int64_t start_of(const WorkflowNet& net, const TimestampVector& x, std::uint32_t t) {
    const auto& rec = net.transitions[t];
    std::int64_t start = 0;
    bool ok = true;
    for (auto p : rec.pre_places) {
        if (!x.marked(p)) {
            ok = false;
            break;
        }
        start = std::max(start, x.at[p]);
    }
    if (!ok)
        throw NotEnabledError("transition '" + rec.name + "' is not enabled at " +
                              timestamps_name(net, x));
    return start;
}

// Fires t on a timestamp vector: consumed places become unmarked, produced
// places receive start + duration, untouched places keep their timestamps.
inline TimestampVector advance_timestamps(const WorkflowNet& net, const TimestampVector& x,
                                          std::uint32_t t) {
    const auto& rec = net.transitions[t];
    std::int64_t finish = detail::checked_add(start_of(net, x, t), rec.duration);
    TimestampVector out = x;
    for (auto p : rec.pre_places) out.at[p] = TimestampVector::unmarked;
    for (auto p : rec.post_places) {
        if (out.marked(p))
            throw UnsafeFiringError("firing '" + rec.name + "' would put a second token on '" +
                                        net.places[p] + "'",
                                    net.places[p]);
        out.at[p] = finish;
    }
    return out;
}

// Timestamps after firing a whole sequence from {i:0}.
inline TimestampVector run_timestamps(const WorkflowNet& net,
                                      const std::vector<std::uint32_t>& seq) {
    TimestampVector x = initial_timestamps(net);
    for (auto t : seq) x = advance_timestamps(net, x, t);
    return x;
}

// Completion time of a sequence: the latest token arrival it produces.
inline std::int64_t completion_time(const WorkflowNet& net,
                                    const std::vector<std::uint32_t>& seq) {
    return run_timestamps(net, seq).max_entry();
}

// Start time of t when fired right after seq.
inline std::int64_t start_time(const WorkflowNet& net, const std::vector<std::uint32_t>& seq,
                               std::uint32_t t) {
    return start_of(net, run_timestamps(net, seq), t);
}

// x with the clock origin moved forward by n: marked entries drop by n,
// clamped at 0; unmarked stays unmarked.
inline TimestampVector shift_clock(const TimestampVector& x, std::int64_t n) {
    TimestampVector out = x;
    for (auto& v : out.at)
        if (v != TimestampVector::unmarked) v = v > n ? v - n : 0;
    return out;
}

// One step of the abstraction: fire t, then rebase to t's start time.
// Keeps reachable entries within [0, max_duration].
inline AbstractState local_step(const WorkflowNet& net, const AbstractState& x, std::uint32_t t) {
    std::int64_t start = start_of(net, x, t);
    return shift_clock(advance_timestamps(net, x, t), start);
}

// Conflict sets of the marking underlying x, each paired with its start
// time max_{p in pre(C)} x_p. Members of one conflict set share all their
// input places' tokens, so the start is well-defined per set.
struct TimedConflictSet {
    std::vector<std::uint32_t> transitions;
    std::int64_t start = 0;
};

inline std::vector<TimedConflictSet> timed_conflict_sets(const WorkflowNet& net,
                                                         const TimestampVector& x) {
    std::vector<TimedConflictSet> out;
    Marking m = x.support();
    for (auto& set : conflict_sets(net, m)) {
        std::int64_t start = 0;
        for (auto t : set)
            for (auto p : net.transitions[t].pre_places)
                start = std::max(start, x.at[p]);
        out.push_back({std::move(set), start});
    }
    return out;
}

// Earliest start among the conflict sets at x; the reward of the abstract
// state. Requires at least one enabled transition.
inline std::int64_t earliest_start(const WorkflowNet& net, const TimestampVector& x) {
    auto sets = timed_conflict_sets(net, x);
    if (sets.empty())
        throw NotEnabledError("no transition is enabled at " + timestamps_name(net, x));
    std::int64_t best = sets.front().start;
    for (const auto& s : sets) best = std::min(best, s.start);
    return best;
}

enum class TieBreak {
    least_index,     // among earliest sets: smallest least member
    greatest_index,  // among earliest sets: largest greatest member
};

// All conflict sets whose start time is minimal. The earliest-first
// scheduler may pick any of them; expected time does not depend on which.
inline std::vector<TimedConflictSet> earliest_conflict_sets(const WorkflowNet& net,
                                                            const TimestampVector& x) {
    auto sets = timed_conflict_sets(net, x);
    if (sets.empty())
        throw NotEnabledError("no transition is enabled at " + timestamps_name(net, x));
    std::int64_t best = sets.front().start;
    for (const auto& s : sets) best = std::min(best, s.start);
    std::vector<TimedConflictSet> out;
    for (auto& s : sets)
        if (s.start == best) out.push_back(std::move(s));
    return out;
}

// Deterministic earliest-first choice under a tie-break rule.
inline TimedConflictSet earliest_conflict_set(const WorkflowNet& net, const TimestampVector& x,
                                              TieBreak tie = TieBreak::least_index) {
    auto candidates = earliest_conflict_sets(net, x);
    std::size_t pick = 0;
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        if (tie == TieBreak::least_index) {
            if (candidates[k].transitions.front() < candidates[pick].transitions.front()) pick = k;
        } else {
            if (candidates[k].transitions.back() > candidates[pick].transitions.back()) pick = k;
        }
    }
    return candidates[pick];
}

// Local (rebased) timestamps of a sequence, computed step by step through
// the abstraction. This is the production route.
inline AbstractState local_timestamps(const WorkflowNet& net,
                                      const std::vector<std::uint32_t>& seq) {
    AbstractState x = initial_timestamps(net);
    for (auto t : seq) x = local_step(net, x, t);
    return x;
}

// Reference route for the same value: full timestamps rebased by the last
// start time. Kept separate so tests can confirm the two agree.
inline AbstractState local_timestamps_direct(const WorkflowNet& net,
                                             const std::vector<std::uint32_t>& seq) {
    if (seq.empty()) return initial_timestamps(net);
    std::vector<std::uint32_t> prefix(seq.begin(), seq.end() - 1);
    TimestampVector before = run_timestamps(net, prefix);
    std::int64_t start = start_of(net, before, seq.back());
    return shift_clock(advance_timestamps(net, before, seq.back()), start);
}

// True iff every step of seq fires a transition from some earliest conflict
// set of the state so far (the sequence is compatible with an earliest-first
// scheduler).
inline bool earliest_compatible(const WorkflowNet& net, const std::vector<std::uint32_t>& seq) {
    AbstractState x = initial_timestamps(net);
    for (auto t : seq) {
        bool allowed = false;
        for (const auto& c : earliest_conflict_sets(net, x)) {
            for (auto u : c.transitions)
                if (u == t) {
                    allowed = true;
                    break;
                }
            if (allowed) break;
        }
        if (!allowed) return false;
        x = local_step(net, x, t);
    }
    return true;
}

}  // namespace tpwn
