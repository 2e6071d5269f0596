#pragma once

#include <boost/dynamic_bitset.hpp>
#include <boost/functional/hash.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tpwn/errors.hpp"
#include "tpwn/rational.hpp"

namespace tpwn {

// 1-safe markings are identified with sets of places.
using Marking = boost::dynamic_bitset<>;

struct MarkingHash {
    std::size_t operator()(const Marking& m) const { return boost::hash_value(m); }
};

struct TransitionRecord {
    std::string name;
    Marking pre, post;                         // bitsets over place ids
    std::vector<std::uint32_t> pre_places;     // sorted
    std::vector<std::uint32_t> post_places;    // sorted
    Rational weight;                           // > 0
    std::int64_t duration = 0;                 // >= 0
};

// Places and transitions carry dense indices; names are for I/O only.
struct WorkflowNet {
    std::vector<std::string> places;
    std::vector<TransitionRecord> transitions;
    std::uint32_t initial = 0;
    std::uint32_t final = 0;

    std::unordered_map<std::string, std::uint32_t> place_index;
    std::unordered_map<std::string, std::uint32_t> transition_index;
    // consumers[p]: transitions with p in their preset; producers[p] dually.
    std::vector<std::vector<std::uint32_t>> consumers;
    std::vector<std::vector<std::uint32_t>> producers;

    std::size_t place_count() const { return places.size(); }
    std::size_t transition_count() const { return transitions.size(); }

    // Longest single duration; the horizon of the finite abstraction.
    std::int64_t max_duration() const {
        std::int64_t h = 0;
        for (const auto& t : transitions) h = std::max(h, t.duration);
        return h;
    }

    Marking initial_marking() const {
        Marking m(places.size());
        m.set(initial);
        return m;
    }

    Marking final_marking() const {
        Marking m(places.size());
        m.set(final);
        return m;
    }

    std::string marking_name(const Marking& m) const {
        std::string out = "{";
        bool first = true;
        for (auto p = m.find_first(); p != Marking::npos; p = m.find_next(p)) {
            if (!first) out += ",";
            out += places[p];
            first = false;
        }
        return out + "}";
    }
};

// Incremental construction with validation at the end.
class NetBuilder {
  public:
    std::uint32_t place(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(places_.size());
        index_.emplace(name, id);
        places_.push_back(name);
        return id;
    }

    NetBuilder& transition(const std::string& name,
                           const std::vector<std::string>& pre,
                           const std::vector<std::string>& post,
                           const Rational& weight,
                           std::int64_t duration) {
        transitions_.push_back({name, pre, post, weight, duration});
        return *this;
    }

    WorkflowNet build(const std::string& initial, const std::string& final_place) {
        WorkflowNet net;
        net.places = places_;
        for (std::uint32_t p = 0; p < places_.size(); ++p)
            net.place_index.emplace(places_[p], p);

        if (!net.place_index.count(initial))
            throw ValidationError("initial place '" + initial + "' does not exist");
        if (!net.place_index.count(final_place))
            throw ValidationError("final place '" + final_place + "' does not exist");
        net.initial = net.place_index.at(initial);
        net.final = net.place_index.at(final_place);

        const auto n = places_.size();
        net.consumers.assign(n, {});
        net.producers.assign(n, {});

        for (const auto& spec : transitions_) {
            if (net.place_index.count(spec.name))
                throw ValidationError("id '" + spec.name + "' used for both a place and a transition");
            if (net.transition_index.count(spec.name))
                throw ValidationError("duplicate transition id '" + spec.name + "'");
            if (spec.pre.empty())
                throw ValidationError("transition '" + spec.name + "' has an empty preset");
            if (spec.weight <= 0)
                throw ValidationError("transition '" + spec.name + "' has non-positive weight");
            if (spec.duration < 0)
                throw ValidationError("transition '" + spec.name + "' has negative duration");

            TransitionRecord rec;
            rec.name = spec.name;
            rec.weight = spec.weight;
            rec.duration = spec.duration;
            rec.pre = Marking(n);
            rec.post = Marking(n);
            for (const auto& pn : spec.pre) {
                auto it = net.place_index.find(pn);
                if (it == net.place_index.end())
                    throw ValidationError("transition '" + spec.name + "' references unknown place '" + pn + "'");
                if (rec.pre.test(it->second))
                    throw ValidationError("transition '" + spec.name + "' lists place '" + pn + "' twice in its preset");
                rec.pre.set(it->second);
                rec.pre_places.push_back(it->second);
            }
            for (const auto& pn : spec.post) {
                auto it = net.place_index.find(pn);
                if (it == net.place_index.end())
                    throw ValidationError("transition '" + spec.name + "' references unknown place '" + pn + "'");
                if (rec.post.test(it->second))
                    throw ValidationError("transition '" + spec.name + "' lists place '" + pn + "' twice in its postset");
                rec.post.set(it->second);
                rec.post_places.push_back(it->second);
            }
            std::sort(rec.pre_places.begin(), rec.pre_places.end());
            std::sort(rec.post_places.begin(), rec.post_places.end());

            auto id = static_cast<std::uint32_t>(net.transitions.size());
            net.transition_index.emplace(rec.name, id);
            for (auto p : rec.pre_places) net.consumers[p].push_back(id);
            for (auto p : rec.post_places) net.producers[p].push_back(id);
            net.transitions.push_back(std::move(rec));
        }
        return net;
    }

  private:
    struct TransitionSpec {
        std::string name;
        std::vector<std::string> pre, post;
        Rational weight;
        std::int64_t duration;
    };
    std::vector<std::string> places_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<TransitionSpec> transitions_;
};

inline bool enabled(const WorkflowNet& net, const Marking& m, std::uint32_t t) {
    return net.transitions[t].pre.is_subset_of(m);
}

// Ascending by transition index; iteration order is part of the contract
// (deterministic exploration and chain construction depend on it).
inline std::vector<std::uint32_t> enabled_transitions(const WorkflowNet& net, const Marking& m) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t t = 0; t < net.transitions.size(); ++t)
        if (enabled(net, m, t)) out.push_back(t);
    return out;
}

inline Marking fire(const WorkflowNet& net, const Marking& m, std::uint32_t t) {
    const auto& rec = net.transitions[t];
    if (!rec.pre.is_subset_of(m))
        throw NotEnabledError("transition '" + rec.name + "' is not enabled at " + net.marking_name(m));
    Marking without = m - rec.pre;
    if (without.intersects(rec.post)) {
        Marking clash = without & rec.post;
        auto p = clash.find_first();
        throw UnsafeFiringError("firing '" + rec.name + "' would put a second token on '" +
                                    net.places[p] + "'",
                                net.places[p]);
    }
    return without | rec.post;
}

// Structural independence: disjoint presets.
inline bool independent(const WorkflowNet& net, std::uint32_t t, std::uint32_t u) {
    return !net.transitions[t].pre.intersects(net.transitions[u].pre);
}

// The enabled transitions competing with t for input tokens at m, t included.
inline std::vector<std::uint32_t> conflict_set(const WorkflowNet& net, const Marking& m,
                                               std::uint32_t t) {
    const auto& rec = net.transitions[t];
    if (!rec.pre.is_subset_of(m))
        throw NotEnabledError("transition '" + rec.name + "' is not enabled at " + net.marking_name(m));
    std::vector<std::uint32_t> out;
    for (std::uint32_t u = 0; u < net.transitions.size(); ++u) {
        if (!enabled(net, m, u)) continue;
        if (u == t || net.transitions[u].pre.intersects(rec.pre)) out.push_back(u);
    }
    return out;
}

// All conflict sets of enabled transitions, deduplicated, ordered by their
// smallest member. A partition of the enabled set iff the behaviour around
// m is confusion-free.
inline std::vector<std::vector<std::uint32_t>> conflict_sets(const WorkflowNet& net,
                                                             const Marking& m) {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t t = 0; t < net.transitions.size(); ++t) {
        if (!enabled(net, m, t)) continue;
        auto set = conflict_set(net, m, t);
        if (std::find(out.begin(), out.end(), set) == out.end()) out.push_back(std::move(set));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

inline std::string trace_name(const WorkflowNet& net, const std::vector<std::uint32_t>& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += " ";
        out += net.transitions[seq[i]].name;
    }
    return out;
}

}  // namespace tpwn
