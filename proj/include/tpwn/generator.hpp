#pragma once

// Random sound free-choice nets, assembled from blocks that each move one
// token from an entry place to an exit place: a single timed step, a series
// of blocks gluing exit to entry, a parallel fork/join, a weighted choice,
// or a loop with a weighted exit. Every combinator preserves workflow shape,
// 1-safety, free-choiceness and soundness, and the number of reachable
// markings composes along the same structure (sums for sequencing and choice,
// products for parallelism), so the count comes out exactly, without any
// exploration. That makes nets with far more markings than a tool could ever
// enumerate cheap to produce and still certifiably sound.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <tpwn/errors.hpp>
#include <tpwn/net.hpp>
#include <tpwn/rng.hpp>

namespace tpwn {

struct GeneratorParams {
    std::size_t places = 20;       // soft budget; blocks stop splitting near it
    std::uint32_t max_branch = 3;  // fan-out bound for parallel and choice blocks
    std::int64_t time_lo = 1;
    std::int64_t time_hi = 10;
    long weight_lo = 1;
    long weight_hi = 10;
    bool allow_loops = true;
    bool allow_choices = true;
};

namespace detail {

class BlockAssembler {
  public:
    BlockAssembler(const GeneratorParams& params, Rng& rng) : params_(params), rng_(rng) {}

    struct Block {
        std::string entry;
        std::string exit;
        mpz_class markings;  // reachable markings between token-on-entry and token-on-exit
    };

    Block build(std::size_t budget, std::string entry, std::size_t depth) {
        if (budget < 4 || depth > 16) return atom(std::move(entry));
        const std::uint32_t roll = static_cast<std::uint32_t>(uniform_below(rng_, 100));
        // series 40, parallel 25, choice 20, loop 15; disabled kinds fall
        // back to their structural cousin
        if (roll < 40) return series(budget, std::move(entry), depth);
        if (roll < 65 && budget >= 6) return parallel(budget, std::move(entry), depth);
        if (roll < 85 && budget >= 6 && params_.allow_choices)
            return choice(budget, std::move(entry), depth);
        if (params_.allow_loops) return loop(budget, std::move(entry), depth);
        return series(budget, std::move(entry), depth);
    }

    // the outer entry must stay arc-free to serve as the workflow's initial
    // place; a loop on the spine feeds it, in which case a fresh initial
    // place and a start transition are put in front
    WorkflowNet finish(Block top) {
        std::string initial = top.entry;
        if (incoming_[top.entry] > 0) {
            initial = fresh_place();
            step(initial, top.entry);
            top.markings += 1;
        }
        auto net = builder_.build(initial, top.exit);
        marking_count_ = top.markings;
        return net;
    }

    const mpz_class& marking_count() const { return marking_count_; }

  private:
    std::string fresh_place() {
        auto name = "p" + std::to_string(next_place_++);
        builder_.place(name);
        return name;
    }

    std::string place_or_fresh(std::string entry) {
        return entry.empty() ? fresh_place() : std::move(entry);
    }

    Rational random_weight() {
        return make_rational(
            params_.weight_lo +
                static_cast<long>(uniform_below(
                    rng_, static_cast<std::uint64_t>(params_.weight_hi - params_.weight_lo) + 1)),
            1);
    }

    std::int64_t random_time() {
        return params_.time_lo +
               static_cast<std::int64_t>(uniform_below(
                   rng_, static_cast<std::uint64_t>(params_.time_hi - params_.time_lo) + 1));
    }

    void transition(const std::vector<std::string>& pre, const std::vector<std::string>& post) {
        builder_.transition("t" + std::to_string(next_transition_++), pre, post,
                            random_weight(), random_time());
        for (const auto& p : post) ++incoming_[p];
    }

    void step(const std::string& from, const std::string& to) { transition({from}, {to}); }

    Block atom(std::string entry) {
        Block block{place_or_fresh(std::move(entry)), fresh_place(), 2};
        step(block.entry, block.exit);
        return block;
    }

    Block series(std::size_t budget, std::string entry, std::size_t depth) {
        // left gets [2, budget-2] places, right reuses left's exit as entry
        const std::size_t left = 2 + uniform_below(rng_, budget - 3);
        Block a = build(left, std::move(entry), depth + 1);
        Block b = build(budget - left + 1, a.exit, depth + 1);
        return {std::move(a.entry), std::move(b.exit), a.markings + b.markings - 1};
    }

    std::size_t pick_branches(std::size_t budget) {
        const std::size_t cap =
            std::min<std::size_t>(std::max<std::uint32_t>(params_.max_branch, 2),
                                  (budget - 2) / 2);
        return 2 + uniform_below(rng_, cap - 1);
    }

    Block parallel(std::size_t budget, std::string entry, std::size_t depth) {
        Block block{place_or_fresh(std::move(entry)), fresh_place(), 2};
        const std::size_t branches = pick_branches(budget);
        std::vector<std::string> entries, exits;
        mpz_class product = 1;
        for (std::size_t b = 0; b < branches; ++b) {
            Block inner = build((budget - 2) / branches, "", depth + 1);
            product *= inner.markings;
            entries.push_back(std::move(inner.entry));
            exits.push_back(std::move(inner.exit));
        }
        transition({block.entry}, entries);
        transition(exits, {block.exit});
        block.markings += product;
        return block;
    }

    Block choice(std::size_t budget, std::string entry, std::size_t depth) {
        Block block{place_or_fresh(std::move(entry)), fresh_place(), 2};
        const std::size_t branches = pick_branches(budget);
        for (std::size_t b = 0; b < branches; ++b) {
            Block inner = build((budget - 2) / branches, "", depth + 1);
            step(block.entry, inner.entry);  // all alternatives share the preset {entry}
            step(inner.exit, block.exit);
            block.markings += inner.markings;
        }
        return block;
    }

    Block loop(std::size_t budget, std::string entry, std::size_t depth) {
        Block body = build(budget - 1, std::move(entry), depth + 1);
        Block block{body.entry, fresh_place(), body.markings + 1};
        step(body.exit, body.entry);  // repeat
        step(body.exit, block.exit);  // leave
        return block;
    }

    const GeneratorParams& params_;
    Rng& rng_;
    NetBuilder builder_;
    std::map<std::string, std::size_t> incoming_;
    std::size_t next_place_ = 0;
    std::size_t next_transition_ = 0;
    mpz_class marking_count_ = 0;
};

}  // namespace detail

// Deterministic in (params, seed). If marking_count is given it receives the
// exact number of reachable markings of the returned net.
inline WorkflowNet generate_random_net(const GeneratorParams& params, std::uint64_t seed,
                                       mpz_class* marking_count = nullptr) {
    if (params.places < 2) throw ValidationError("generator needs a budget of at least 2 places");
    if (params.time_lo < 0 || params.time_lo > params.time_hi)
        throw ValidationError("generator time range is empty or negative");
    if (params.weight_lo < 1 || params.weight_lo > params.weight_hi)
        throw ValidationError("generator weight range is empty or non-positive");
    Rng rng(seed);
    detail::BlockAssembler assembler(params, rng);
    auto net = assembler.finish(assembler.build(params.places, "", 0));
    if (marking_count) *marking_count = assembler.marking_count();
    return net;
}

}  // namespace tpwn
