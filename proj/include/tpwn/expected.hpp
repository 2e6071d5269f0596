#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "tpwn/analysis.hpp"
#include "tpwn/chain.hpp"
#include "tpwn/linear.hpp"

namespace tpwn {

struct AnalysisOptions {
    bool assume_sound = false;  // skip exploration-based gates (1-safety,
                                // confusion-freeness, soundness)
    std::size_t max_markings = default_marking_cap;
    std::size_t max_chain_states = default_chain_cap;
    TieBreak tie = TieBreak::least_index;
};

struct ExpectedTimeResult {
    bool infinite = false;
    Rational value;                     // meaningful iff !infinite
    std::optional<StructuralReport> report;  // absent under assume_sound
    std::size_t chain_states = 0;
    double build_ms = 0.0;
    double solve_ms = 0.0;
};

// The full pipeline: structural gates, chain construction, exact solve.
//
// Gate order: 1-safety is enforced while exploring (Unsafe1Error), then
// confusion-freeness (NotConfusionFreeError; expected time is undefined,
// so this is never turned into a number), then soundness, whose failure is
// the verdict "infinite". Free-choice nets skip the behavioural confusion
// scan. With assume_sound the exploration is skipped entirely; a wrong
// assertion surfaces as DeadlockError, NotConfusionFreeError or
// SingularSystemError from the chain and solver stages.
inline ExpectedTimeResult expected_time(const WorkflowNet& net, const AnalysisOptions& opt = {}) {
    ExpectedTimeResult result;

    if (!opt.assume_sound) {
        StructuralReport report;
        report.workflow_shape = check_workflow_shape(net, &report.shape_reason);
        auto fc = check_free_choice(net);
        report.free_choice = fc.free_choice;
        report.free_choice_witness = fc.witness;

        auto rg = explore(net, opt.max_markings);  // Unsafe1Error propagates
        report.one_safe = true;
        report.marking_count = rg.size();

        if (report.free_choice) {
            report.confusion_free = true;
        } else {
            auto cf = check_confusion_free(net, rg);
            report.confusion_free = cf.confusion_free;
            report.confusion_witness = cf.witness;
            if (!cf.confusion_free) {
                const auto& w = *cf.witness;
                throw NotConfusionFreeError(
                    "net is not confusion-free: firing '" + net.transitions[w.fired].name +
                    "' at " + net.marking_name(w.marking) + " changes the conflict set of '" +
                    net.transitions[w.observed].name + "'");
            }
        }

        auto sound = check_soundness(net, rg);
        report.sound = sound.sound;
        report.unsound_witness = sound.witness;
        result.report = report;
        if (!sound.sound) {
            result.infinite = true;
            return result;
        }
    }

    auto t0 = std::chrono::steady_clock::now();
    SchedulerChain chain = build_chain(net, opt.tie, opt.max_chain_states);
    auto t1 = std::chrono::steady_clock::now();
    LinearSystem sys = assemble_system(chain);
    auto solution = solve_exact(sys);
    auto t2 = std::chrono::steady_clock::now();

    result.chain_states = chain.states.size();
    result.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    result.solve_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    result.value = solution[0];
    return result;
}

}  // namespace tpwn
