#pragma once

// Two-state stochastic PERT networks: a DAG of tasks whose durations are
// independent 0/1 coin flips, with the expected longest s->t path as the
// quantity of interest. Provides exact brute-force evaluation plus two
// encodings of an instance as a timed workflow net whose expected time equals
// the expected project duration: one with weighted coin transitions, one with
// all weights 1 obtained from the binary expansion of each probability.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <tpwn/errors.hpp>
#include <tpwn/net.hpp>
#include <tpwn/rational.hpp>

namespace tpwn {

struct PertEdge {
    std::string id;
    std::string from;
    std::string to;
    Rational prob;  // Pr(duration = 1); duration 0 otherwise
};

// parallel edges are allowed (ids keep them apart); validity demands a DAG
// with one source, one sink, and every vertex and edge on some s->t path
struct PertNetwork {
    std::vector<std::string> vertices;
    std::vector<PertEdge> edges;
    std::string source;
    std::string sink;
};

struct PertReport {
    std::vector<std::string> problems;
    bool valid() const { return problems.empty(); }
};

namespace detail {

// name -> index maps plus adjacency, shared by validation and the reductions
struct PertIndex {
    std::map<std::string, std::size_t> vertex;
    std::vector<std::vector<std::size_t>> in_edges;   // per vertex
    std::vector<std::vector<std::size_t>> out_edges;  // per vertex
    std::vector<std::size_t> topo;                    // empty if the graph has a cycle

    PertIndex(const PertNetwork& pn, PertReport& report) {
        for (std::size_t v = 0; v < pn.vertices.size(); ++v) {
            if (pn.vertices[v].empty()) report.problems.push_back("empty vertex name");
            if (!vertex.emplace(pn.vertices[v], v).second)
                report.problems.push_back("duplicate vertex '" + pn.vertices[v] + "'");
        }
        in_edges.resize(pn.vertices.size());
        out_edges.resize(pn.vertices.size());
        std::map<std::string, std::size_t> edge_ids;
        for (std::size_t e = 0; e < pn.edges.size(); ++e) {
            const auto& edge = pn.edges[e];
            if (edge.id.empty()) report.problems.push_back("empty edge id");
            if (!edge_ids.emplace(edge.id, e).second)
                report.problems.push_back("duplicate edge id '" + edge.id + "'");
            auto u = vertex.find(edge.from);
            auto v = vertex.find(edge.to);
            if (u == vertex.end())
                report.problems.push_back("edge '" + edge.id + "' leaves unknown vertex '" +
                                          edge.from + "'");
            if (v == vertex.end())
                report.problems.push_back("edge '" + edge.id + "' enters unknown vertex '" +
                                          edge.to + "'");
            if (edge.prob < 0 || edge.prob > 1)
                report.problems.push_back("edge '" + edge.id + "' has probability " +
                                          to_fraction_string(edge.prob) + " outside [0,1]");
            if (u == vertex.end() || v == vertex.end()) continue;
            out_edges[u->second].push_back(e);
            in_edges[v->second].push_back(e);
        }
        if (!report.problems.empty()) return;  // adjacency unusable, stop here

        // Kahn's algorithm; a leftover vertex means a cycle
        std::vector<std::size_t> indegree(pn.vertices.size());
        for (std::size_t v = 0; v < pn.vertices.size(); ++v) indegree[v] = in_edges[v].size();
        std::vector<std::size_t> queue;
        for (std::size_t v = 0; v < pn.vertices.size(); ++v)
            if (indegree[v] == 0) queue.push_back(v);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            topo.push_back(queue[head]);
            for (auto e : out_edges[queue[head]]) {
                auto v = vertex.at(pn.edges[e].to);
                if (--indegree[v] == 0) queue.push_back(v);
            }
        }
        if (topo.size() != pn.vertices.size()) {
            topo.clear();
            report.problems.push_back("the graph has a cycle");
        }
    }
};

}  // namespace detail

inline PertReport validate_pert(const PertNetwork& pn) {
    PertReport report;
    if (pn.vertices.empty()) {
        report.problems.push_back("no vertices");
        return report;
    }
    detail::PertIndex index(pn, report);
    if (!report.problems.empty()) return report;

    if (!index.vertex.count(pn.source))
        report.problems.push_back("source '" + pn.source + "' is not a vertex");
    if (!index.vertex.count(pn.sink))
        report.problems.push_back("sink '" + pn.sink + "' is not a vertex");
    if (!report.problems.empty()) return report;
    if (pn.source == pn.sink) report.problems.push_back("source and sink coincide");

    for (std::size_t v = 0; v < pn.vertices.size(); ++v) {
        if (index.in_edges[v].empty() && pn.vertices[v] != pn.source)
            report.problems.push_back("vertex '" + pn.vertices[v] +
                                      "' has no incoming edge but is not the source");
        if (index.out_edges[v].empty() && pn.vertices[v] != pn.sink)
            report.problems.push_back("vertex '" + pn.vertices[v] +
                                      "' has no outgoing edge but is not the sink");
    }
    if (!index.in_edges[index.vertex.at(pn.source)].empty())
        report.problems.push_back("source '" + pn.source + "' has incoming edges");
    if (!index.out_edges[index.vertex.at(pn.sink)].empty())
        report.problems.push_back("sink '" + pn.sink + "' has outgoing edges");
    // with one source, one sink and acyclicity established, a vertex lies on
    // an s->t path iff both searches below reach it, and an edge does iff its
    // endpoints do (in a DAG the two half-paths cannot intersect)
    if (!report.problems.empty()) return report;

    auto reach = [&](std::size_t start, const std::vector<std::vector<std::size_t>>& adj,
                     bool forward) {
        std::vector<char> seen(pn.vertices.size(), 0);
        std::vector<std::size_t> queue{start};
        seen[start] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            for (auto e : adj[queue[head]]) {
                auto next =
                    index.vertex.at(forward ? pn.edges[e].to : pn.edges[e].from);
                if (!seen[next]) {
                    seen[next] = 1;
                    queue.push_back(next);
                }
            }
        }
        return seen;
    };
    auto from_source = reach(index.vertex.at(pn.source), index.out_edges, true);
    auto to_sink = reach(index.vertex.at(pn.sink), index.in_edges, false);
    for (std::size_t v = 0; v < pn.vertices.size(); ++v) {
        if (!from_source[v] || !to_sink[v])
            report.problems.push_back("vertex '" + pn.vertices[v] +
                                      "' lies on no path from source to sink");
    }
    return report;
}

namespace detail {

inline PertIndex checked_index(const PertNetwork& pn) {
    auto report = validate_pert(pn);
    if (!report.valid()) {
        std::string msg = "invalid PERT network:";
        for (const auto& p : report.problems) msg += " " + p + ";";
        msg.pop_back();
        throw ValidationError(msg);
    }
    PertReport scratch;
    return PertIndex(pn, scratch);
}

}  // namespace detail

// Expected longest s->t path, by summing Pr(outcome) * longest path over all
// 2^|E| outcomes of the edge coins. The longest path under fixed 0/1 edge
// lengths comes from the usual DAG recurrence in topological order.
inline Rational expected_project_duration(const PertNetwork& pn, std::size_t edge_cap = 24) {
    auto index = detail::checked_index(pn);
    if (pn.edges.size() > edge_cap)
        throw TooManyEdgesError("enumeration over " + std::to_string(pn.edges.size()) +
                                    " edges exceeds the cap",
                                pn.edges.size(), edge_cap);

    const std::size_t n = pn.edges.size();
    const std::size_t sink = index.vertex.at(pn.sink);
    const std::size_t source = index.vertex.at(pn.source);
    Rational sum = 0;
    std::vector<std::int64_t> length(pn.vertices.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        std::int64_t longest = 0;
        for (auto v : index.topo) {
            std::int64_t best = v == source ? 0 : INT64_MIN;
            for (auto e : index.in_edges[v]) {
                auto u = index.vertex.at(pn.edges[e].from);
                std::int64_t x = (mask >> e) & 1;
                if (length[u] + x > best) best = length[u] + x;
            }
            length[v] = best;
            if (v == sink) longest = best;
        }
        if (longest == 0) continue;  // nothing to add, skip the probability work
        Rational prob = 1;
        for (std::size_t e = 0; e < n; ++e)
            prob *= ((mask >> e) & 1) ? pn.edges[e].prob : 1 - pn.edges[e].prob;
        sum += prob * longest;
    }
    return sum;
}

namespace detail {

// vertex transition t_v: join every in-edge place, mark every out-edge place;
// the source is fed from i and the sink feeds o
inline void add_vertex_transitions(NetBuilder& builder, const PertNetwork& pn,
                                   const PertIndex& index) {
    for (std::size_t v = 0; v < pn.vertices.size(); ++v) {
        std::vector<std::string> pre, post;
        for (auto e : index.in_edges[v])
            pre.push_back("[" + pn.edges[e].id + "," + pn.vertices[v] + "]");
        for (auto e : index.out_edges[v])
            post.push_back("[" + pn.vertices[v] + "," + pn.edges[e].id + "]");
        if (pn.vertices[v] == pn.source) pre.push_back("i");
        if (pn.vertices[v] == pn.sink) post.push_back("o");
        builder.transition("t_" + pn.vertices[v], pre, post, Rational(1), 0);
    }
}

}  // namespace detail

// Workflow net with the same expected time as the expected project duration.
// Edge e=(u,v) becomes a place pair [u,e] -> [e,v] bridged by a weighted coin:
// t_{e,0} (weight 1-p_e, duration 0) versus t_{e,1} (weight p_e, duration 1).
// A sure coin keeps only its certain side, so weights stay positive.
inline WorkflowNet reduce_rational(const PertNetwork& pn) {
    auto index = detail::checked_index(pn);
    NetBuilder builder;
    builder.place("i");
    builder.place("o");
    for (const auto& edge : pn.edges) {
        builder.place("[" + edge.from + "," + edge.id + "]");
        builder.place("[" + edge.id + "," + edge.to + "]");
    }
    for (const auto& edge : pn.edges) {
        const std::string in = "[" + edge.from + "," + edge.id + "]";
        const std::string out = "[" + edge.id + "," + edge.to + "]";
        if (edge.prob != 1)
            builder.transition("t_{" + edge.id + ",0}", {in}, {out}, 1 - edge.prob, 0);
        if (edge.prob != 0)
            builder.transition("t_{" + edge.id + ",1}", {in}, {out}, edge.prob, 1);
    }
    detail::add_vertex_transitions(builder, pn, index);
    return builder.build("i", "o");
}

// Same reduction with every weight 1: the coin for p_e = 0.p_1..p_k (binary)
// becomes a cascade of fair coin flips through places q_{e,i}, where a_{e,i}
// commits to duration p_i and b_{e,i} defers to the next digit. The entry
// a_{e,0} carries digit p_0, which is 1 exactly when p_e = 1.
inline WorkflowNet reduce_unit_weights(const PertNetwork& pn) {
    auto index = detail::checked_index(pn);
    for (const auto& edge : pn.edges) {
        if (mpz_popcount(edge.prob.get_den().get_mpz_t()) != 1)
            throw NonDyadicError("edge '" + edge.id + "' has probability " +
                                 to_fraction_string(edge.prob) +
                                 " with no finite binary expansion");
    }
    NetBuilder builder;
    builder.place("i");
    builder.place("o");
    for (const auto& edge : pn.edges) {
        const std::string in = "[" + edge.from + "," + edge.id + "]";
        const std::string out = "[" + edge.id + "," + edge.to + "]";
        builder.place(in);
        builder.place(out);
        const mpz_class num = edge.prob.get_num();
        const std::size_t k = mpz_sizeinbase(edge.prob.get_den().get_mpz_t(), 2) - 1;
        auto q = [&](std::size_t i) { return "q_{" + edge.id + "," + std::to_string(i) + "}"; };
        for (std::size_t i = 1; i <= k; ++i) builder.place(q(i));
        builder.transition("a_{" + edge.id + ",0}", {in}, {k == 0 ? out : q(1)}, Rational(1),
                           edge.prob == 1 ? 1 : 0);
        for (std::size_t i = 1; i <= k; ++i) {
            // digit p_i of the expansion is bit k-i of the numerator
            const std::int64_t digit = mpz_tstbit(num.get_mpz_t(), k - i) ? 1 : 0;
            builder.transition("a_{" + edge.id + "," + std::to_string(i) + "}", {q(i)}, {out},
                               Rational(1), digit);
            builder.transition("b_{" + edge.id + "," + std::to_string(i) + "}", {q(i)},
                               {i < k ? q(i + 1) : out}, Rational(1), 0);
        }
    }
    detail::add_vertex_transitions(builder, pn, index);
    return builder.build("i", "o");
}

}  // namespace tpwn
