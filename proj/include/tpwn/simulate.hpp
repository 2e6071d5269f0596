#pragma once

// Monte Carlo estimation of the expected completion time. The scheduler picks
// a conflict set uniformly at random each step (any scheduler works, this one
// needs no timestamp bookkeeping to decide) and resolves it by the transition
// weights, with every draw mapped through exact integer thresholds so a given
// seed reproduces bit-identical results on any platform.

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <tpwn/errors.hpp>
#include <tpwn/net.hpp>
#include <tpwn/rng.hpp>
#include <tpwn/timing.hpp>

namespace tpwn {

struct SimulationResult {
    std::uint64_t runs = 0;
    Rational mean_exact = 0;  // sample mean as an exact fraction
    double mean = 0.0;
    double std_error = 0.0;
};

namespace detail {

inline mpz_class mpz_from_u128(unsigned __int128 v) {
    mpz_class out(static_cast<std::uint64_t>(v >> 64));
    out <<= 64;
    out += mpz_class(static_cast<std::uint64_t>(v));
    return out;
}

// choice structure at one marking: the conflict sets plus a weighted picker
// per set, cached because runs revisit few distinct markings
struct ChoiceTable {
    std::vector<std::vector<std::uint32_t>> sets;
    std::vector<WeightedPicker> pickers;
};

}  // namespace detail

// Averages `runs` independent sampled runs. Runs are drawn in fixed batches
// of 65536, batch b seeded with stream_seed(seed, b), and batch sums merged
// in batch order, so results depend only on (net, runs, seed, step_cap).
// A run exceeding step_cap firings raises NonTerminationError.
inline SimulationResult simulate_expected_time(const WorkflowNet& net, std::uint64_t runs,
                                               std::uint64_t seed,
                                               std::uint64_t step_cap = 1'000'000) {
    constexpr std::uint64_t batch_size = 65536;
    const Marking final = net.final_marking();

    std::unordered_map<Marking, detail::ChoiceTable, MarkingHash> tables;
    auto table_for = [&](const Marking& m) -> const detail::ChoiceTable& {
        auto it = tables.find(m);
        if (it != tables.end()) return it->second;
        detail::ChoiceTable table;
        table.sets = conflict_sets(net, m);
        for (const auto& set : table.sets) {
            std::vector<Rational> weights;
            weights.reserve(set.size());
            for (auto t : set) weights.push_back(net.transitions[t].weight);
            table.pickers.emplace_back(weights);
        }
        return tables.emplace(m, std::move(table)).first->second;
    };

    unsigned __int128 sum = 0;    // of completion times
    unsigned __int128 sumsq = 0;  // of their squares
    const std::uint64_t batches = (runs + batch_size - 1) / batch_size;
    for (std::uint64_t b = 0; b < batches; ++b) {
        Rng rng(stream_seed(seed, b));
        const std::uint64_t in_batch = std::min(batch_size, runs - b * batch_size);
        unsigned __int128 bsum = 0, bsumsq = 0;
        for (std::uint64_t r = 0; r < in_batch; ++r) {
            TimestampVector x = initial_timestamps(net);
            std::uint64_t steps = 0;
            while (x.support() != final) {
                const auto& table = table_for(x.support());
                if (table.sets.empty())
                    throw DeadlockError("sampled run stalled at " + timestamps_name(net, x),
                                        net.marking_name(x.support()));
                if (++steps > step_cap)
                    throw NonTerminationError("sampled run exceeded " +
                                              std::to_string(step_cap) + " firings at " +
                                              timestamps_name(net, x));
                const std::size_t c = table.sets.size() == 1
                                          ? 0
                                          : static_cast<std::size_t>(
                                                uniform_below(rng, table.sets.size()));
                const auto& set = table.sets[c];
                const std::uint32_t t =
                    set.size() == 1 ? set[0] : set[table.pickers[c].pick(rng)];
                x = advance_timestamps(net, x, t);
            }
            const auto done = static_cast<std::uint64_t>(x.max_entry());
            if (done > (std::uint64_t(1) << 31))
                throw OverflowError("completion time too large for the variance accumulators");
            bsum += done;
            bsumsq += static_cast<unsigned __int128>(done) * done;
        }
        sum += bsum;
        sumsq += bsumsq;
    }

    SimulationResult res;
    res.runs = runs;
    if (runs == 0) return res;
    res.mean_exact = make_rational(detail::mpz_from_u128(sum), mpz_class(runs));
    res.mean = res.mean_exact.get_d();
    if (runs > 1) {
        // runs * sumsq - sum^2 = runs * (runs - 1) * sample variance, exactly
        const unsigned __int128 var_num = runs * sumsq - sum * sum;
        const long double variance =
            static_cast<long double>(detail::mpz_from_u128(var_num).get_d()) /
            (static_cast<long double>(runs) * static_cast<long double>(runs - 1));
        res.std_error = static_cast<double>(std::sqrt(variance / static_cast<long double>(runs)));
    }
    return res;
}

}  // namespace tpwn
