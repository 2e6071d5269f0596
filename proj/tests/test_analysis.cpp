#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "fixtures.hpp"
#include "tpwn/analysis.hpp"

using namespace tpwn;
using namespace fixtures;

TEST_CASE("exploration of the running example finds exactly its six markings") {
    auto net = retry_parallel_net();
    auto rg = explore(net);
    CHECK(rg.size() == 6);
    CHECK(rg.markings[0] == net.initial_marking());
    REQUIRE(rg.final_index.has_value());
    CHECK(rg.markings[*rg.final_index] == net.final_marking());

    // breadth-first, ascending transitions within each expansion
    auto name = [&](std::uint32_t s) { return net.marking_name(rg.markings[s]); };
    CHECK(name(0) == "{i}");
    CHECK(name(1) == "{p1,p3}");
    CHECK(name(2) == "{p2,p3}");
    CHECK(name(3) == "{p1,p4}");
    CHECK(name(4) == "{p2,p4}");
    CHECK(name(5) == "{o}");
}

TEST_CASE("exploration of the single-transition net") {
    auto net = single_transition_net();
    auto rg = explore(net);
    CHECK(rg.size() == 2);
    CHECK(rg.final_index == 1u);
}

TEST_CASE("exploration rejects nets that are not 1-safe, with a witness") {
    NetBuilder b;
    for (auto* p : {"i", "p", "q", "o"}) b.place(p);
    b.transition("a", {"i"}, {"p", "q"}, Rational(1), 0);
    b.transition("b", {"p"}, {"q"}, Rational(1), 0);
    b.transition("c", {"q"}, {"o"}, Rational(1), 0);
    auto net = b.build("i", "o");
    try {
        explore(net);
        FAIL("expected Unsafe1Error");
    } catch (const Unsafe1Error& e) {
        CHECK(e.place == "q");
        CHECK(e.trace == "a b");
    }
}

TEST_CASE("exploration stops at the marking cap") {
    auto net = retry_parallel_net();
    CHECK_THROWS_AS(explore(net, 3), StateExplosionError);
}

TEST_CASE("workflow shape holds for the fixtures that have it") {
    CHECK(check_workflow_shape(retry_parallel_net()));
    CHECK(check_workflow_shape(confused_fork_net()));
    CHECK(check_workflow_shape(looping_confusion_net()));
    CHECK(check_workflow_shape(gated_merge_net()));
    CHECK(check_workflow_shape(cyclic_choice_net()));
    CHECK(check_workflow_shape(single_transition_net()));
}

TEST_CASE("workflow shape violations are reported with reasons") {
    std::string why;

    // removing the join leaves p2/p4 with no way back to o
    CHECK_FALSE(check_workflow_shape(retry_parallel_no_join(), &why));
    CHECK(why.find("strongly connected") != std::string::npos);

    NetBuilder into_i;
    for (auto* p : {"i", "o"}) into_i.place(p);
    into_i.transition("t", {"i"}, {"o"}, Rational(1), 0);
    into_i.transition("back", {"o"}, {"i"}, Rational(1), 0);
    CHECK_FALSE(check_workflow_shape(into_i.build("i", "o"), &why));
    CHECK(why.find("incoming") != std::string::npos);

    NetBuilder out_of_o;
    for (auto* p : {"i", "p", "o"}) out_of_o.place(p);
    out_of_o.transition("t", {"i"}, {"o"}, Rational(1), 0);
    out_of_o.transition("leak", {"o"}, {"p"}, Rational(1), 0);
    CHECK_FALSE(check_workflow_shape(out_of_o.build("i", "o"), &why));
    CHECK(why.find("outgoing") != std::string::npos);

    NetBuilder floating;
    for (auto* p : {"i", "x", "o"}) floating.place(p);
    floating.transition("t", {"i"}, {"o"}, Rational(1), 0);
    CHECK_FALSE(check_workflow_shape(floating.build("i", "o"), &why));
}

TEST_CASE("soundness of the sound fixtures") {
    for (const auto& net : {retry_parallel_net(), confused_fork_net(), looping_confusion_net(),
                            gated_merge_net(), cyclic_choice_net(), single_transition_net()}) {
        auto rg = explore(net);
        CHECK(check_soundness(net, rg).sound);
    }
}

TEST_CASE("the join-deleted net is unsound with the dead end as witness") {
    auto net = retry_parallel_no_join();
    auto rg = explore(net);
    auto result = check_soundness(net, rg);
    REQUIRE_FALSE(result.sound);
    REQUIRE(result.witness.has_value());
    CHECK(net.marking_name(*result.witness) == "{p2,p4}");
}

TEST_CASE("a livelocked branch is unsound even without a dead end") {
    // left branch can spin forever and never reach o once committed to p2
    NetBuilder b;
    for (auto* p : {"i", "p1", "p2", "o"}) b.place(p);
    b.transition("go", {"i"}, {"p1"}, Rational(1), 0);
    b.transition("finish", {"p1"}, {"o"}, Rational(1), 0);
    b.transition("commit", {"p1"}, {"p2"}, Rational(1), 0);
    b.transition("spin", {"p2"}, {"p2"}, Rational(1), 0);
    auto net = b.build("i", "o");
    auto rg = explore(net);
    auto result = check_soundness(net, rg);
    REQUIRE_FALSE(result.sound);
    REQUIRE(result.witness.has_value());
    CHECK(net.marking_name(*result.witness) == "{p2}");
}

TEST_CASE("free-choice classification of the fixtures") {
    CHECK(check_free_choice(retry_parallel_net()).free_choice);
    CHECK(check_free_choice(cyclic_choice_net()).free_choice);
    CHECK(check_free_choice(single_transition_net()).free_choice);

    auto n3 = check_free_choice(gated_merge_net());
    CHECK_FALSE(n3.free_choice);
    CHECK(n3.witness.find("p4") != std::string::npos);

    CHECK_FALSE(check_free_choice(confused_fork_net()).free_choice);
}

TEST_CASE("confusion-freeness separates the fixtures") {
    auto check = [](const WorkflowNet& net) {
        auto rg = explore(net);
        return check_confusion_free(net, rg);
    };
    CHECK(check(retry_parallel_net()).confusion_free);
    CHECK(check(gated_merge_net()).confusion_free);
    CHECK(check(cyclic_choice_net()).confusion_free);
    CHECK(check(single_transition_net()).confusion_free);

    auto n1 = check(confused_fork_net());
    auto net1 = confused_fork_net();
    REQUIRE_FALSE(n1.confusion_free);
    REQUIRE(n1.witness.has_value());
    CHECK(net1.marking_name(n1.witness->marking) == "{p1,p2}");

    auto n2 = check(looping_confusion_net());
    REQUIRE_FALSE(n2.confusion_free);
}

TEST_CASE("confusion witnesses genuinely shift a conflict set") {
    for (const auto& net : {confused_fork_net(), looping_confusion_net()}) {
        auto rg = explore(net);
        auto result = check_confusion_free(net, rg);
        REQUIRE_FALSE(result.confusion_free);
        REQUIRE(result.witness.has_value());
        const auto& w = *result.witness;
        REQUIRE(enabled(net, w.marking, w.fired));
        REQUIRE(enabled(net, w.marking, w.observed));
        REQUIRE(independent(net, w.fired, w.observed));
        auto base = conflict_set(net, w.marking, w.observed);
        Marking removed = w.marking - net.transitions[w.fired].pre;
        Marking after = fire(net, w.marking, w.fired);
        bool shifted = conflict_set(net, removed, w.observed) != base ||
                       conflict_set(net, after, w.observed) != base;
        CHECK(shifted);
    }
}

TEST_CASE("free choice implies confusion-freeness on the explored fixtures") {
    for (const auto& net : {retry_parallel_net(), cyclic_choice_net(), single_transition_net()}) {
        REQUIRE(check_free_choice(net).free_choice);
        auto rg = explore(net);
        CHECK(check_confusion_free(net, rg).confusion_free);
    }
}

TEST_CASE("analyze_structure aggregates the verdicts") {
    auto good = analyze_structure(retry_parallel_net());
    CHECK(good.workflow_shape);
    CHECK(good.one_safe);
    CHECK(good.free_choice);
    CHECK(good.confusion_free == true);
    CHECK(good.sound == true);
    CHECK(good.marking_count == 6);
    CHECK(good.valid_model());

    auto broken = analyze_structure(retry_parallel_no_join());
    CHECK_FALSE(broken.workflow_shape);
    CHECK(broken.one_safe);
    CHECK(broken.sound == false);
    REQUIRE(broken.unsound_witness.has_value());
    CHECK_FALSE(broken.valid_model());

    NetBuilder unsafe;
    for (auto* p : {"i", "p", "q", "o"}) unsafe.place(p);
    unsafe.transition("a", {"i"}, {"p", "q"}, Rational(1), 0);
    unsafe.transition("b", {"p"}, {"q"}, Rational(1), 0);
    unsafe.transition("c", {"q"}, {"o"}, Rational(1), 0);
    auto report = analyze_structure(unsafe.build("i", "o"));
    CHECK_FALSE(report.one_safe);
    CHECK_FALSE(report.confusion_free.has_value());
    CHECK_FALSE(report.sound.has_value());
    CHECK(report.unsafe_place == "q");
    CHECK_FALSE(report.valid_model());
}
