#pragma once

#include <string>
#include <vector>

#include "tpwn/net.hpp"
#include "tpwn/pert.hpp"
#include "tpwn/rng.hpp"

namespace fixtures {

using tpwn::NetBuilder;
using tpwn::Rational;
using tpwn::WorkflowNet;

// Fork into two branches; the left one may retry (weighted self-loop) before
// committing, the right one is a single slow step; a join closes the net.
// The running example across the test suite:
//   t1: i -> {p1,p3}        duration 1, weight 1
//   t2: p1 -> p1 (retry)    duration 4, weight 1
//   t3: p1 -> p2 (commit)   duration 2, weight 4
//   t4: p3 -> p4            duration 5, weight 1
//   t5: {p2,p4} -> o (join) duration 3, weight 1
// Expected time is exactly 47/5.
inline WorkflowNet retry_parallel_net() {
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "p3", "p4", "o"}) b.place(p);
    b.transition("t1", {"i"}, {"p1", "p3"}, Rational(1), 1);
    b.transition("t2", {"p1"}, {"p1"}, Rational(1), 4);
    b.transition("t3", {"p1"}, {"p2"}, Rational(4), 2);
    b.transition("t4", {"p3"}, {"p4"}, Rational(1), 5);
    b.transition("t5", {"p2", "p4"}, {"o"}, Rational(1), 3);
    return b.build("i", "o");
}

// Same net with the join removed: {p2,p4} becomes a dead end, so the net is
// unsound (and loses workflow shape, since p2/p4 have no outgoing arcs).
inline WorkflowNet retry_parallel_no_join() {
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "p3", "p4", "o"}) b.place(p);
    b.transition("t1", {"i"}, {"p1", "p3"}, Rational(1), 1);
    b.transition("t2", {"p1"}, {"p1"}, Rational(1), 4);
    b.transition("t3", {"p1"}, {"p2"}, Rational(4), 2);
    b.transition("t4", {"p3"}, {"p4"}, Rational(1), 5);
    return b.build("i", "o");
}

// Sound but confused: t3 competes with t2 for p1 and with t4 for p2, so
// firing one branch's local choice changes the other branch's conflict set.
inline WorkflowNet confused_fork_net() {
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "p3", "p4", "o"}) b.place(p);
    b.transition("t1", {"i"}, {"p1", "p2"}, Rational(1), 1);
    b.transition("t2", {"p1"}, {"p3"}, Rational(1), 1);
    b.transition("t3", {"p1", "p2"}, {"p3", "p4"}, Rational(1), 1);
    b.transition("t4", {"p2"}, {"p4"}, Rational(1), 1);
    b.transition("t5", {"p3"}, {"p3"}, Rational(1), 1);
    b.transition("t6", {"p3", "p4"}, {"o"}, Rational(1), 1);
    return b.build("i", "o");
}

// Sound but confused the other way round: firing t2 produces p3, which
// enables the join t5 and thereby enlarges the conflict set of t4.
inline WorkflowNet looping_confusion_net() {
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "p3", "o"}) b.place(p);
    b.transition("t1", {"i"}, {"p1", "p2"}, Rational(1), 1);
    b.transition("t2", {"p1"}, {"p3"}, Rational(1), 1);
    b.transition("t3", {"p1"}, {"p1"}, Rational(1), 1);
    b.transition("t4", {"p2"}, {"p2"}, Rational(1), 1);
    b.transition("t5", {"p2", "p3"}, {"o"}, Rational(1), 1);
    return b.build("i", "o");
}

// Confusion-free but not free-choice: the two joins t5/t6 share p4 but are
// gated by p3/p2, which the initial choice marks exclusively.
inline WorkflowNet gated_merge_net() {
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "p3", "p4", "o"}) b.place(p);
    b.transition("t1", {"i"}, {"p1", "p3"}, Rational(1), 1);
    b.transition("t2", {"i"}, {"p1", "p2"}, Rational(1), 1);
    b.transition("t3", {"p1"}, {"p4"}, Rational(1), 1);
    b.transition("t5", {"p3", "p4"}, {"o"}, Rational(1), 1);
    b.transition("t6", {"p2", "p4"}, {"o"}, Rational(1), 1);
    return b.build("i", "o");
}

// Free-choice, cyclic and sound: a short exit path competes with a two-leg
// pipeline that may loop back before finishing.
inline WorkflowNet cyclic_choice_net() {
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "p3", "p4", "p5", "o"}) b.place(p);
    b.transition("t1", {"i"}, {"p1"}, Rational(1), 1);
    b.transition("t2", {"i"}, {"p2", "p3"}, Rational(1), 1);
    b.transition("t3", {"p2"}, {"p4"}, Rational(2), 3);
    b.transition("t4", {"p3"}, {"p5"}, Rational(1), 2);
    b.transition("t5", {"p4", "p5"}, {"p2", "p3"}, Rational(1), 1);
    b.transition("t6", {"p1"}, {"o"}, Rational(1), 2);
    b.transition("t7", {"p4", "p5"}, {"o"}, Rational(3), 1);
    return b.build("i", "o");
}

inline WorkflowNet single_transition_net(std::int64_t duration = 7) {
    NetBuilder b;
    b.place("i");
    b.place("o");
    b.transition("t", {"i"}, {"o"}, Rational(1), duration);
    return b.build("i", "o");
}

// The seven-task example used across the PERT tests: two branches from the
// source meet in a diamond, three source-to-sink paths overall.
inline tpwn::PertNetwork seven_task_pert(const Rational& p) {
    tpwn::PertNetwork pn;
    pn.vertices = {"s", "v1", "v2", "v3", "v4", "t"};
    pn.edges = {{"e1", "s", "v1", p},  {"e2", "s", "v2", p},  {"e3", "v1", "v3", p},
                {"e4", "v1", "v4", p}, {"e5", "v2", "v4", p}, {"e6", "v3", "t", p},
                {"e7", "v4", "t", p}};
    pn.source = "s";
    pn.sink = "t";
    return pn;
}

// Random valid PERT instance: a backbone path source to sink guarantees every
// vertex sits on a path, extra edges between backbone vertices add parallel
// structure. Probabilities are dyadic with denominator at most 16, endpoints
// 0 and 1 included.
inline tpwn::PertNetwork random_pert(std::uint64_t seed, std::size_t max_edges = 8) {
    tpwn::Rng rng(seed);
    tpwn::PertNetwork pn;
    const std::size_t hops = 2 + tpwn::uniform_below(rng, 3);  // backbone length 2..4
    for (std::size_t v = 0; v <= hops; ++v) pn.vertices.push_back("x" + std::to_string(v));
    pn.source = "x0";
    pn.sink = "x" + std::to_string(hops);

    auto dyadic = [&]() {
        const std::uint64_t den = std::uint64_t(1) << tpwn::uniform_below(rng, 5);  // 1..16
        return tpwn::make_rational(static_cast<long>(tpwn::uniform_below(rng, den + 1)),
                                   static_cast<long>(den));
    };
    std::size_t next_id = 1;
    auto add = [&](std::size_t u, std::size_t v) {
        pn.edges.push_back({"e" + std::to_string(next_id++), "x" + std::to_string(u),
                            "x" + std::to_string(v), dyadic()});
    };
    for (std::size_t v = 0; v < hops; ++v) add(v, v + 1);
    const std::size_t extra = tpwn::uniform_below(rng, max_edges - hops + 1);
    for (std::size_t j = 0; j < extra; ++j) {
        const std::size_t u = tpwn::uniform_below(rng, hops);     // any non-sink vertex
        add(u, u + 1 + tpwn::uniform_below(rng, hops - u));       // strictly later vertex
    }
    return pn;
}

// Transition indices from names, for readable firing sequences in tests.
inline std::vector<std::uint32_t> seq(const WorkflowNet& net,
                                      const std::vector<std::string>& names) {
    std::vector<std::uint32_t> out;
    for (const auto& n : names) out.push_back(net.transition_index.at(n));
    return out;
}

}  // namespace fixtures
