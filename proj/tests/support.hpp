#pragma once

// Shared generators for the unit tests and the acceptance binary.

#include <memory>
#include <random>
#include <vector>

#include "hcond/hcond.hpp"

namespace hcond::testing {

inline Clause C(std::initializer_list<long> xs) { return Clause::from_dimacs(xs); }

inline Clause random_clause(std::mt19937_64& rng, Var n, std::size_t min_width, std::size_t max_width) {
    std::vector<Var> vars(n);
    for (Var v = 0; v < n; ++v) vars[v] = v + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    max_width = std::min<std::size_t>(max_width, n);
    std::size_t w = std::uniform_int_distribution<std::size_t>(std::min(min_width, max_width), max_width)(rng);
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < w; ++i) lits.emplace_back(vars[i], (rng() & 1) != 0);
    return Clause(lits);
}

inline CnfFormula random_formula(std::mt19937_64& rng, Var n, std::size_t m, std::size_t min_width,
                                 std::size_t max_width) {
    CnfFormula f(n);
    while (f.size() < m) f.add(random_clause(rng, n, min_width, max_width));
    return f;
}

/// A random unsatisfiable formula (rejection sampling, decided by truth table).
inline CnfFormula random_unsat(std::mt19937_64& rng, Var n, std::size_t m, std::size_t max_width) {
    while (true) {
        auto f = random_formula(rng, n, m, 1, max_width);
        if (!is_satisfiable_bruteforce(f)) return f;
    }
}

/// Random bipartite graph with every left vertex of degree in [1, d].
inline BipartiteGraph random_graph(std::mt19937_64& rng, Var left, Var right, unsigned d) {
    return sample_expander(left, right, d, rng());
}

// ---------------------------------------------------------------------------
// Tree shapes for the depth-to-space scheduler.

struct Shape {
    int arity = 0; // 0 leaf, 1 weakening, 2 resolution
    std::shared_ptr<const Shape> a, b;
    std::size_t depth = 0;
};
using ShapePtr = std::shared_ptr<const Shape>;

inline ShapePtr leaf_shape() { return std::make_shared<const Shape>(); }
inline ShapePtr unary_shape(ShapePtr c) {
    auto d = c->depth + 1;
    return std::make_shared<const Shape>(Shape{1, std::move(c), nullptr, d});
}
inline ShapePtr binary_shape(ShapePtr x, ShapePtr y) {
    auto d = std::max(x->depth, y->depth) + 1;
    return std::make_shared<const Shape>(Shape{2, std::move(x), std::move(y), d});
}

/// Every ordered tree shape of depth <= max_depth; unary nodes optional.
inline std::vector<ShapePtr> all_shapes(std::size_t max_depth, bool unary) {
    std::vector<ShapePtr> cur{leaf_shape()};
    for (std::size_t d = 1; d <= max_depth; ++d) {
        std::vector<ShapePtr> next{leaf_shape()};
        if (unary)
            for (auto& c : cur) next.push_back(unary_shape(c));
        for (auto& x : cur)
            for (auto& y : cur) next.push_back(binary_shape(x, y));
        cur = std::move(next);
    }
    return cur;
}

/// Labels a shape with clauses: a resolution node K gets premises K v x and
/// K v ~x for a fresh x; a weakening node K gets K minus its largest literal.
inline DerivationTree label_shape(const Shape& s, const Clause& k, Var& next_var) {
    DerivationTree t{k, {}, std::nullopt};
    if (s.arity == 1) {
        std::vector<Literal> lits(k.begin(), k.end());
        if (!lits.empty()) lits.pop_back();
        t.premises.push_back(label_shape(*s.a, Clause(lits), next_var));
    } else if (s.arity == 2) {
        Var x = next_var++;
        std::array<Literal, 1> pos{Literal::pos(x)}, neg{Literal::neg(x)};
        t.premises.push_back(label_shape(*s.a, weaken(k, pos), next_var));
        t.premises.push_back(label_shape(*s.b, weaken(k, neg), next_var));
    }
    return t;
}

inline std::size_t count_binary(const Shape& s) {
    if (s.arity == 0) return 0;
    return (s.arity == 2 ? 1 : 0) + count_binary(*s.a) + (s.b ? count_binary(*s.b) : 0);
}

/// Realizes the shape rooted at ⊥ and returns the measured clause space.
inline ProofMeasures measure_shape(const Shape& s) {
    Var next = 1;
    auto tree = label_shape(s, Clause{}, next);
    Var nvars = std::max<Var>(next - 1, 1);
    auto proof = realize_in_space(tree, nvars);
    return check(tree_leaves(tree, nvars), proof, {true, false});
}

// ---------------------------------------------------------------------------
// Trace mutations that always yield an illegal trace.

enum class Mutation { ForwardReference, UseAfterErase, ForeignDownload, Truncate, SelfResolve, DoubleErase, kCount };

inline const char* to_string(Mutation m) {
    switch (m) {
    case Mutation::ForwardReference: return "forward-reference";
    case Mutation::UseAfterErase: return "use-after-erase";
    case Mutation::ForeignDownload: return "foreign-download";
    case Mutation::Truncate: return "truncate";
    case Mutation::SelfResolve: return "self-resolve";
    case Mutation::DoubleErase: return "double-erase";
    case Mutation::kCount: break;
    }
    return "?";
}

/// Applies `m` to a valid refutation of `f`. The result is guaranteed to be
/// rejected by a correct verifier.
inline Refutation mutate(const Refutation& p, const CnfFormula& f, Mutation m, std::mt19937_64& rng) {
    Refutation q = p;
    auto& st = q.steps;
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    // Positions of resolution steps and step index of each deriving step.
    std::vector<std::size_t> resolves, derivers;
    for (std::size_t t = 0; t < st.size(); ++t) {
        if (st[t].kind == ProofStep::Kind::Resolve) resolves.push_back(t);
        if (st[t].derives()) derivers.push_back(t);
    }
    auto index_before = [&](std::size_t pos) {
        StepIndex k = 0;
        for (std::size_t t = 0; t < pos; ++t) k += st[t].derives() ? 1 : 0;
        return k;
    };
    switch (m) {
    case Mutation::ForwardReference: {
        auto t = resolves[pick(resolves.size())];
        st[t].first = index_before(t) + 1 + static_cast<StepIndex>(pick(3));
        break;
    }
    case Mutation::UseAfterErase: {
        auto t = resolves[pick(resolves.size())];
        st.insert(st.begin() + static_cast<std::ptrdiff_t>(t), ProofStep::erase(st[t].first));
        break;
    }
    case Mutation::ForeignDownload: {
        // A clause over a variable beyond num_vars is never an axiom.
        auto t = pick(st.size() + 1);
        Clause foreign{Literal::pos(f.num_vars() + 1)};
        st.insert(st.begin() + static_cast<std::ptrdiff_t>(t), ProofStep::download(foreign));
        break;
    }
    case Mutation::Truncate: {
        // Cut right before the first derivation of ⊥.
        std::size_t cut = st.size();
        detail::Replay rp(f.num_vars());
        for (std::size_t t = 0; t < st.size(); ++t) {
            const auto& s = st[t];
            if (s.kind == ProofStep::Kind::Erase) {
                rp.erase(s.first);
                continue;
            }
            Clause c = s.clause;
            if (s.kind == ProofStep::Kind::Resolve) {
                Var pv = 0;
                clash_count(rp.clause(s.first), rp.clause(s.second), &pv);
                c = resolvent_unchecked(rp.clause(s.first), rp.clause(s.second), pv);
            }
            if (c.empty()) {
                cut = t;
                break;
            }
            rp.add(c, 0);
        }
        st.resize(cut);
        break;
    }
    case Mutation::SelfResolve: {
        auto t = resolves[pick(resolves.size())];
        st[t].second = st[t].first;
        break;
    }
    case Mutation::DoubleErase: {
        auto t = derivers[pick(derivers.size())];
        StepIndex k = index_before(t) + 1;
        auto e = ProofStep::erase(k);
        st.insert(st.begin() + static_cast<std::ptrdiff_t>(t) + 1, {e, e});
        break;
    }
    case Mutation::kCount: break;
    }
    return q;
}

} // namespace hcond::testing
