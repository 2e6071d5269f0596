// Walkthrough of the library API on a small net: a fork whose left branch
// may retry before committing, joined at the end. Prints the structural
// verdicts, the scheduler chain, and the exact expected time.

#include <iostream>

#include "tpwn/chain.hpp"
#include "tpwn/expected.hpp"
#include "tpwn/net.hpp"

int main() {
    tpwn::NetBuilder builder;
    for (auto* place : {"i", "p1", "p2", "p3", "p4", "o"}) builder.place(place);
    builder.transition("split", {"i"}, {"p1", "p3"}, tpwn::Rational(1), 1);
    builder.transition("retry", {"p1"}, {"p1"}, tpwn::Rational(1), 4);
    builder.transition("commit", {"p1"}, {"p2"}, tpwn::Rational(4), 2);
    builder.transition("slow", {"p3"}, {"p4"}, tpwn::Rational(1), 5);
    builder.transition("join", {"p2", "p4"}, {"o"}, tpwn::Rational(1), 3);
    auto net = builder.build("i", "o");

    auto result = tpwn::expected_time(net);
    const auto& report = *result.report;
    std::cout << "1-safe: " << report.one_safe << ", free-choice: " << report.free_choice
              << ", sound: " << report.sound.value() << "\n";
    std::cout << "reachable markings: " << report.marking_count << "\n\n";

    auto chain = tpwn::build_chain(net);
    std::cout << chain.states.size() << " abstraction states; DOT form:\n\n";
    std::cout << tpwn::chain_to_dot(net, chain);

    std::cout << "\nexpected time: " << tpwn::to_fraction_string(result.value) << " = "
              << tpwn::to_decimal_string(result.value) << "\n";
    return 0;
}
