// Command line front end. Results go to stdout, diagnostics to stderr.
// Exit codes: 0 success, 1 validation or analysis failure, 2 usage errors.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tpwn/analysis.hpp"
#include "tpwn/chain.hpp"
#include "tpwn/expected.hpp"
#include "tpwn/generator.hpp"
#include "tpwn/json_io.hpp"
#include "tpwn/oracle.hpp"
#include "tpwn/pert.hpp"
#include "tpwn/simulate.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tpwn::ValidationError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tpwn::ValidationError("cannot write '" + path + "'");
    out << text;
}

// "47/5 (= 9.4)"; the parenthesis is dropped when the decimal adds nothing
std::string pretty_value(const tpwn::Rational& value) {
    auto exact = tpwn::to_fraction_string(value);
    auto decimal = tpwn::to_decimal_string(value);
    if (exact == decimal) return exact;
    return exact + " (= " + decimal + ")";
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("range", "expected lo:hi, got '" + text + "'");
    try {
        return {std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected lo:hi, got '" + text + "'");
    }
}

void print_structural(const tpwn::StructuralReport& report, std::ostream& out) {
    out << "workflow shape: " << (report.workflow_shape ? "yes" : "no");
    if (!report.workflow_shape) out << " (" << report.shape_reason << ")";
    out << "\n";
    out << "1-safe:         " << (report.one_safe ? "yes" : "no");
    if (report.unsafe_place)
        out << " (place '" << *report.unsafe_place << "' doubly marked after " <<
            *report.unsafe_trace << ")";
    out << "\n";
    if (report.one_safe) out << "markings:       " << report.marking_count << "\n";
    out << "free-choice:    " << (report.free_choice ? "yes" : "no");
    if (!report.free_choice) out << " (" << report.free_choice_witness << ")";
    out << "\n";
    if (report.confusion_free)
        out << "confusion-free: " << (*report.confusion_free ? "yes" : "no") << "\n";
    if (report.sound) {
        out << "sound:          " << (*report.sound ? "yes" : "no") << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Expected execution times of timed probabilistic workflow nets"};
    app.require_subcommand(1);

    std::string net_path, pert_path, out_path, dot_path;
    bool assume_sound = false, json_output = false, unit_weights = false;
    std::size_t max_states = tpwn::default_chain_cap;
    std::size_t max_markings = tpwn::default_marking_cap;
    std::string tie = "least";
    std::string scheduler = "earliest";
    std::string mass_epsilon = "1/1000000000";
    std::size_t depth_cap = 10000;
    std::uint64_t runs = 1000000, seed = 1, step_cap = 1000000;
    tpwn::GeneratorParams gen;
    std::string times_range, weights_range;

    auto* check = app.add_subcommand("check", "run the structural gates on a net");
    check->add_option("net", net_path, "net JSON file")->required();

    auto* expected = app.add_subcommand("expected-time", "exact expected time of a net");
    expected->add_option("net", net_path, "net JSON file")->required();
    expected->add_flag("--assume-sound", assume_sound,
                       "skip the structural gates (trusted input)");
    expected->add_option("--max-states", max_states, "abstraction state cap");
    expected->add_option("--max-markings", max_markings, "reachability exploration cap");
    expected->add_option("--tie", tie, "tie break for equal starts: least or greatest")
        ->check(CLI::IsMember({"least", "greatest"}));
    expected->add_flag("--json", json_output, "machine readable report");

    auto* chain = app.add_subcommand("chain", "build the scheduler chain of a net");
    chain->add_option("net", net_path, "net JSON file")->required();
    chain->add_option("--dot", dot_path, "write the chain in DOT format")->required();
    chain->add_flag("--assume-sound", assume_sound, "skip the structural gates");

    auto* enumerate = app.add_subcommand("enumerate", "sum scheduler runs directly");
    enumerate->add_option("net", net_path, "net JSON file")->required();
    enumerate->add_option("--mass-epsilon", mass_epsilon,
                          "truncate branches below this probability (0 = exact)");
    enumerate->add_option("--scheduler", scheduler, "conflict set selection rule")
        ->check(CLI::IsMember({"earliest", "leftmost", "rightmost"}));
    enumerate->add_option("--depth-cap", depth_cap, "abort depth for exact enumeration");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the expected time");
    simulate->add_option("net", net_path, "net JSON file")->required();
    simulate->add_option("--runs", runs, "number of sampled runs")->required();
    simulate->add_option("--seed", seed, "random seed")->required();
    simulate->add_option("--step-cap", step_cap, "per-run firing limit");

    auto* pert = app.add_subcommand("pert", "two-state stochastic PERT networks");
    pert->require_subcommand(1);
    auto* pert_check = pert->add_subcommand("check", "validate a PERT network");
    pert_check->add_option("pert", pert_path, "PERT JSON file")->required();
    auto* pert_expected =
        pert->add_subcommand("expected", "expected project duration by enumeration");
    pert_expected->add_option("pert", pert_path, "PERT JSON file")->required();
    auto* pert_reduce = pert->add_subcommand("reduce", "encode a PERT network as a net");
    pert_reduce->add_option("pert", pert_path, "PERT JSON file")->required();
    pert_reduce->add_flag("--unit-weights", unit_weights,
                          "binary-expansion gadget, all weights 1");
    pert_reduce->add_option("-o,--out", out_path, "output file (default stdout)");

    auto* generate = app.add_subcommand("generate", "random sound free-choice net");
    generate->add_option("--places", gen.places, "place budget")->required();
    generate->add_option("--seed", seed, "random seed")->required();
    generate->add_option("--times", times_range, "duration range lo:hi");
    generate->add_option("--weights", weights_range, "weight range lo:hi");
    generate->add_option("--branch", gen.max_branch, "fan-out bound");
    bool no_loops = false, no_choices = false;
    generate->add_flag("--no-loops", no_loops, "series/parallel/choice blocks only");
    generate->add_flag("--no-choices", no_choices, "series/parallel/loop blocks only");
    generate->add_option("-o,--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    }

    if (*check) {
        auto net = tpwn::parse_net(slurp(net_path));
        auto report = tpwn::analyze_structure(net, max_markings);
        print_structural(report, std::cout);
        bool ok = report.valid_model() && report.sound.value_or(false);
        if (!ok && report.unsound_witness)
            std::cerr << "final marking unreachable from "
                      << net.marking_name(*report.unsound_witness) << "\n";
        return ok ? 0 : 1;
    }

    if (*expected) {
        auto net = tpwn::parse_net(slurp(net_path));
        tpwn::AnalysisOptions options;
        options.assume_sound = assume_sound;
        options.max_markings = max_markings;
        options.max_chain_states = max_states;
        options.tie = tie == "least" ? tpwn::TieBreak::least_index
                                     : tpwn::TieBreak::greatest_index;
        auto result = tpwn::expected_time(net, options);
        if (json_output) {
            std::cout << tpwn::analysis_report_json(net, result).dump(2) << "\n";
        } else if (result.infinite) {
            std::cout << "infinite\n";
            if (result.report && result.report->unsound_witness)
                std::cerr << "final marking unreachable from "
                          << net.marking_name(*result.report->unsound_witness) << "\n";
        } else {
            std::cout << pretty_value(result.value) << "\n";
            std::cerr << "chain states: " << result.chain_states << ", construction: "
                      << result.build_ms << " ms, solving: " << result.solve_ms << " ms\n";
        }
        return 0;
    }

    if (*chain) {
        auto net = tpwn::parse_net(slurp(net_path));
        if (!assume_sound) {
            auto report = tpwn::analyze_structure(net, max_markings);
            if (!report.valid_model() || !report.sound.value_or(false)) {
                std::cerr << "net is not a sound model; chain would not terminate\n";
                print_structural(report, std::cerr);
                return 1;
            }
        }
        auto chain_result = tpwn::build_chain(net, tpwn::TieBreak::least_index, max_states);
        spill(dot_path, tpwn::chain_to_dot(net, chain_result));
        std::cerr << "chain states: " << chain_result.states.size() << "\n";
        return 0;
    }

    if (*enumerate) {
        auto net = tpwn::parse_net(slurp(net_path));
        auto rule = scheduler == "earliest"   ? tpwn::SchedulerRule::earliest
                    : scheduler == "leftmost" ? tpwn::SchedulerRule::leftmost
                                              : tpwn::SchedulerRule::rightmost;
        auto epsilon = tpwn::parse_rational(mass_epsilon);
        auto result = tpwn::enumerate_expected_time(net, rule, epsilon, depth_cap);
        std::cout << "lower bound:  " << pretty_value(result.lower_bound) << "\n";
        std::cout << "covered mass: " << pretty_value(result.covered_mass) << "\n";
        std::cout << "exact:        " << (result.exact ? "yes" : "no") << "\n";
        std::cerr << "runs: " << result.completed_runs << ", truncated: "
                  << result.truncated_branches << ", dead ends: " << result.dead_ends << "\n";
        return 0;
    }

    if (*simulate) {
        auto net = tpwn::parse_net(slurp(net_path));
        auto result = tpwn::simulate_expected_time(net, runs, seed, step_cap);
        std::cout << "mean: " << result.mean << ", std error: " << result.std_error
                  << ", runs: " << result.runs << "\n";
        return 0;
    }

    if (*pert_check) {
        auto pn = tpwn::parse_pert(slurp(pert_path));
        auto report = tpwn::validate_pert(pn);
        if (report.valid()) {
            std::cout << "valid PERT network: " << pn.vertices.size() << " vertices, "
                      << pn.edges.size() << " edges\n";
            return 0;
        }
        for (const auto& problem : report.problems) std::cerr << problem << "\n";
        return 1;
    }

    if (*pert_expected) {
        auto pn = tpwn::parse_pert(slurp(pert_path));
        std::cout << pretty_value(tpwn::expected_project_duration(pn)) << "\n";
        return 0;
    }

    if (*pert_reduce) {
        auto pn = tpwn::parse_pert(slurp(pert_path));
        auto net = unit_weights ? tpwn::reduce_unit_weights(pn) : tpwn::reduce_rational(pn);
        spill(out_path, tpwn::emit_net(net));
        std::cerr << "net: " << net.place_count() << " places, " << net.transitions.size()
                  << " transitions\n";
        return 0;
    }

    if (*generate) {
        try {
            if (!times_range.empty())
                std::tie(gen.time_lo, gen.time_hi) = parse_range(times_range);
            if (!weights_range.empty()) {
                auto [lo, hi] = parse_range(weights_range);
                gen.weight_lo = static_cast<long>(lo);
                gen.weight_hi = static_cast<long>(hi);
            }
        } catch (const CLI::ParseError& err) {
            std::cerr << err.what() << "\n";
            return 2;
        }
        gen.allow_loops = !no_loops;
        gen.allow_choices = !no_choices;
        mpz_class markings;
        auto net = tpwn::generate_random_net(gen, seed, &markings);
        spill(out_path, tpwn::emit_net(net));
        std::cerr << "net: " << net.place_count() << " places, " << net.transitions.size()
                  << " transitions, " << markings.get_str() << " reachable markings\n";
        return 0;
    }

    return 2;  // unreachable: a subcommand is required
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const tpwn::ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return 1;
    } catch (const tpwn::NetError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "unexpected error: " << err.what() << "\n";
        return 1;
    }
}
