#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tpwn/chain.hpp"
#include "tpwn/rational.hpp"

namespace tpwn {

// Square sparse system A x = b, row-major, columns sorted within each row.
struct LinearSystem {
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> rows;
    std::vector<Rational> rhs;

    std::size_t size() const { return rows.size(); }
};

// One variable per chain state. Non-final s: X_s - sum_t P(s,t) X_t = reward(s).
// Final s: X_s = terminal value. Branch probabilities of one state sum to 1
// by construction; assemble asserts it anyway.
inline LinearSystem assemble_system(const SchedulerChain& chain) {
    LinearSystem sys;
    sys.rows.resize(chain.states.size());
    sys.rhs.resize(chain.states.size());
    for (std::uint32_t s = 0; s < chain.states.size(); ++s) {
        const auto& st = chain.states[s];
        if (st.final_state) {
            sys.rows[s] = {{s, Rational(1)}};
            sys.rhs[s] = Rational(st.terminal_value);
            continue;
        }
        std::map<std::uint32_t, Rational> row;
        row[s] = 1;
        Rational total = 0;
        for (const auto& e : st.edges) {
            row[e.target] -= e.probability;
            total += e.probability;
        }
        if (total != 1)
            throw NetError("branch probabilities at chain state " + std::to_string(s) +
                           " sum to " + to_fraction_string(total));
        sys.rhs[s] = Rational(st.reward);
        for (auto& [col, coeff] : row)
            if (coeff != 0) sys.rows[s].emplace_back(col, coeff);
    }
    return sys;
}

namespace detail {

// Iterative Tarjan; emits components in reverse topological order (every
// component is emitted after all components it points to).
inline std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    constexpr std::uint32_t none = UINT32_MAX;
    std::vector<std::uint32_t> idx(n, none), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::vector<std::uint32_t>> sccs;
    std::uint32_t counter = 0;

    struct Frame {
        std::uint32_t v;
        std::size_t next_edge;
    };
    std::vector<Frame> call;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (idx[root] != none) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& frame = call.back();
            std::uint32_t v = frame.v;
            if (frame.next_edge == 0) {
                idx[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (frame.next_edge < adj[v].size()) {
                std::uint32_t w = adj[v][frame.next_edge++];
                if (idx[w] == none) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], idx[w]);
            }
            if (descended) continue;
            if (low[v] == idx[v]) {
                std::vector<std::uint32_t> comp;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                sccs.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                auto& parent = call.back();
                low[parent.v] = std::min(low[parent.v], low[v]);
            }
        }
    }
    return sccs;
}

// Operand-size heuristic for pivot choice: smaller numerators/denominators
// keep intermediate fractions from blowing up.
inline std::size_t operand_bits(const Rational& q) {
    return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

// Dense-on-sparse Gaussian elimination for one strongly connected block.
// vars: global column ids of the block. rows: for each var, its equation
// restricted to the block; rhs already folds in solved variables.
inline void eliminate_block(std::vector<std::map<std::uint32_t, Rational>>& rows,
                            std::vector<Rational>& rhs,
                            const std::vector<std::uint32_t>& vars,
                            std::vector<Rational>& solution) {
    const std::size_t k = vars.size();
    std::vector<std::size_t> order;  // row chosen as pivot for each step
    std::vector<char> used(k, 0);
    std::vector<std::uint32_t> pivot_col(k);

    for (std::size_t step = 0; step < k; ++step) {
        std::uint32_t col = vars[step];
        std::size_t best = k;
        std::size_t best_bits = 0;
        for (std::size_t r = 0; r < k; ++r) {
            if (used[r]) continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end() || it->second == 0) continue;
            std::size_t bits = operand_bits(it->second);
            if (best == k || bits < best_bits) {
                best = r;
                best_bits = bits;
            }
        }
        if (best == k)
            throw SingularSystemError("linear system is singular; no unique expected time");
        used[best] = 1;
        order.push_back(best);
        pivot_col[step] = col;

        const Rational pivot = rows[best].at(col);
        for (std::size_t r = 0; r < k; ++r) {
            if (used[r]) continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end() || it->second == 0) continue;
            Rational factor = it->second / pivot;
            rows[r].erase(it);
            for (const auto& [c, v] : rows[best]) {
                if (c == col) continue;
                Rational& cell = rows[r][c];
                cell -= factor * v;
                if (cell == 0) rows[r].erase(c);
            }
            rhs[r] -= factor * rhs[best];
        }
    }

    // Back-substitution in reverse pivot order.
    for (std::size_t step = k; step-- > 0;) {
        std::size_t r = order[step];
        std::uint32_t col = pivot_col[step];
        Rational value = rhs[r];
        for (const auto& [c, v] : rows[r]) {
            if (c == col) continue;
            value -= v * solution[c];
        }
        solution[col] = value / rows[r].at(col);
    }
}

}  // namespace detail

// Exact residual check: A x == b, no tolerance.
inline bool verify_solution(const LinearSystem& sys, const std::vector<Rational>& x) {
    if (x.size() != sys.size()) return false;
    for (std::size_t r = 0; r < sys.size(); ++r) {
        Rational acc = 0;
        for (const auto& [c, v] : sys.rows[r]) acc += v * x[c];
        if (acc != sys.rhs[r]) return false;
    }
    return true;
}

// Solves A x = b exactly: condense the dependency graph into strongly
// connected components, then walk them sinks-first, substituting solved
// variables and eliminating each component with exact pivoting. Verifies
// the residual before returning. Throws SingularSystemError when the system
// has no unique solution.
inline std::vector<Rational> solve_exact(const LinearSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::vector<std::uint32_t>> deps(n);
    for (std::uint32_t r = 0; r < n; ++r)
        for (const auto& [c, v] : sys.rows[r])
            if (c != r) deps[r].push_back(c);

    auto sccs = detail::strongly_connected_components(deps);
    std::vector<Rational> solution(n, Rational(0));
    std::vector<char> solved(n, 0);

    for (const auto& comp : sccs) {
        // Restrict each row to the component; fold solved columns into rhs.
        std::vector<std::uint32_t> vars(comp.begin(), comp.end());
        std::sort(vars.begin(), vars.end());
        std::vector<std::map<std::uint32_t, Rational>> rows(vars.size());
        std::vector<Rational> rhs(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            std::uint32_t r = vars[i];
            rhs[i] = sys.rhs[r];
            for (const auto& [c, v] : sys.rows[r]) {
                if (solved[c]) {
                    rhs[i] -= v * solution[c];
                } else {
                    bool in_block = std::binary_search(vars.begin(), vars.end(), c);
                    if (!in_block)
                        throw SingularSystemError(
                            "equation depends on a variable in a later component");
                    rows[i][c] = v;
                }
            }
        }
        detail::eliminate_block(rows, rhs, vars, solution);
        for (auto vcol : vars) solved[vcol] = 1;
    }

    if (!verify_solution(sys, solution))
        throw SingularSystemError("solution failed the exact residual check");
    return solution;
}

}  // namespace tpwn
