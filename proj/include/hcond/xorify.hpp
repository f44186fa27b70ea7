#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "hcond/bipartite.hpp"
#include "hcond/cnf.hpp"

namespace hcond {

/// CNF of the XOR over N(u) (negated for a negative literal). A clause over
/// N(u) is falsified exactly by one assignment, whose parity is the number of
/// negative literals; we keep the clauses whose falsifier has the wrong parity:
/// an even count of negations for positive u, odd for negative u.
inline std::vector<Clause> xorify_literal(Literal lit, const BipartiteGraph& g) {
    if (lit.var() < 1 || lit.var() > g.left_size())
        throw Error(Errc::UncoveredVariable, "variable " + std::to_string(lit.var()) + " is not a left vertex");
    const auto& nb = g.neighbours(lit.var());
    if (nb.empty()) throw Error(Errc::IsolatedLeftVertex, "left vertex " + std::to_string(lit.var()) + " is isolated");
    const unsigned want = lit.negative() ? 1u : 0u;
    std::vector<Clause> out;
    const std::uint64_t patterns = std::uint64_t{1} << nb.size();
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        if ((std::popcount(mask) & 1u) != want) continue;
        std::vector<Literal> lits;
        lits.reserve(nb.size());
        for (std::size_t k = 0; k < nb.size(); ++k) lits.emplace_back(nb[k], ((mask >> k) & 1) != 0);
        out.emplace_back(std::move(lits));
    }
    return out;
}

/// F[G] together with, for each output clause, the indices of the input
/// clauses A with the output clause in A[G].
struct XorifiedFormula {
    CnfFormula formula;
    std::vector<std::vector<std::size_t>> origins;
};

namespace detail {

inline bool merge_nontrivial(const std::vector<Literal>& acc, const Clause& part, std::vector<Literal>& out) {
    out.clear();
    out.reserve(acc.size() + part.width());
    auto i = acc.begin();
    auto j = part.begin();
    while (i != acc.end() || j != part.end()) {
        if (j == part.end() || (i != acc.end() && i->var() < j->var())) {
            out.push_back(*i++);
        } else if (i == acc.end() || j->var() < i->var()) {
            out.push_back(*j++);
        } else {
            if (i->negative() != j->negative()) return false;
            out.push_back(*i);
            ++i;
            ++j;
        }
    }
    return true;
}

} // namespace detail

/// XORification with respect to `g`: each clause C becomes the CNF expansion of
/// the disjunction of its XORified literals (Cartesian product of the per-literal
/// clause sets) with trivial clauses pruned and duplicates merged. No
/// subsumption pruning.
inline XorifiedFormula xorify_with_origins(const CnfFormula& f, const BipartiteGraph& g) {
    XorifiedFormula out{CnfFormula(g.right_size()), {}};
    for (std::size_t ci = 0; ci < f.size(); ++ci) {
        const Clause& c = f[ci];
        for (auto l : c)
            if (l.var() > g.left_size())
                throw Error(Errc::UncoveredVariable, "variable " + std::to_string(l.var()) + " has no left vertex");
        std::vector<std::vector<Literal>> partial{{}};
        std::vector<Literal> merged;
        for (auto l : c) {
            auto parts = xorify_literal(l, g);
            std::vector<std::vector<Literal>> next;
            next.reserve(partial.size() * parts.size());
            for (const auto& acc : partial)
                for (const auto& p : parts)
                    if (detail::merge_nontrivial(acc, p, merged)) next.push_back(merged);
            partial = std::move(next);
        }
        for (auto& lits : partial) {
            Clause k(std::move(lits));
            if (out.formula.add(k)) {
                out.origins.push_back({ci});
            } else {
                auto& o = out.origins[*out.formula.index_of(k)];
                if (o.back() != ci) o.push_back(ci);
            }
        }
    }
    return out;
}

inline CnfFormula xorify(const CnfFormula& f, const BipartiteGraph& g) { return xorify_with_origins(f, g).formula; }

/// Value of the XORified literal u[G] under an assignment to the right vertices.
inline bool xor_value(const std::vector<bool>& right_assignment, const BipartiteGraph& g, Var u) {
    bool x = false;
    for (Var v : g.neighbours(u)) x ^= right_assignment[v];
    return x;
}

} // namespace hcond
