#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hcond/expander.hpp"
#include "hcond/gf2.hpp"
#include "hcond/proof.hpp"
#include "hcond/transform.hpp"
#include "hcond/xorify.hpp"

namespace hcond {

/// An assignment to the right vertices falsifying both D[G] and C, if one exists.
/// C's literals are forced false; each literal of D contributes the parity
/// equation XOR_{v in N(u)} v = (u negative).
inline std::optional<std::vector<bool>> falsifying_witness(const Clause& d, const Clause& c, const BipartiteGraph& g) {
    ParitySystem sys(g.right_size());
    for (auto l : c) sys.add_unit(l.var(), l.negative());
    for (auto l : d) {
        if (l.var() < 1 || l.var() > g.left_size()) throw Error(Errc::UncoveredVariable, "left variable out of range");
        sys.add_equation(g.neighbours(l.var()), l.negative());
    }
    return sys.solve();
}

inline bool simultaneously_falsifiable(const Clause& d, const Clause& c, const BipartiteGraph& g) {
    return falsifying_witness(d, c, g).has_value();
}

/// All clauses over `vars` (every variable with some sign), in binary order of
/// the sign pattern.
inline std::vector<Clause> sign_patterns(const VertexSet& vars) {
    if (vars.size() > 30) throw Error(Errc::PreconditionViolated, "too many variables for sign enumeration");
    std::vector<Clause> out;
    const std::uint64_t count = std::uint64_t{1} << vars.size();
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::vector<Literal> lits;
        lits.reserve(vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) lits.emplace_back(vars[k], ((mask >> k) & 1) != 0);
        out.emplace_back(std::move(lits));
    }
    return out;
}

struct CondensationStats {
    std::size_t width_in = 0;
    std::size_t space_in = 0;
    std::size_t width_out = 0;
    std::size_t space_out = 0;
    std::size_t ladders = 0;
    std::size_t max_ladder_depth = 0;
    std::size_t max_backbone = 0;     // largest |D_t|
    std::size_t max_input_config = 0; // largest |C_t|
    std::size_t max_inverse_size = 0; // largest |G^{-1}(C)|

    std::uint64_t bound() const { return (std::uint64_t{1} << width_in) * space_in + width_in + 3; }
};

/// The graph, its radius, and the memoized closures used by one condensation.
class CondensationContext {
public:
    CondensationContext(CnfFormula f, CertifiedExpander ge)
        : f_(std::move(f)), ge_(std::move(ge)), xf_(xorify_with_origins(f_, ge_.graph())) {
        if (f_.num_vars() > ge_.graph().left_size())
            throw Error(Errc::UncoveredVariable, "formula has more variables than the graph has left vertices");
    }

    const CnfFormula& formula() const { return f_; }
    const CnfFormula& xorified() const { return xf_.formula; }
    const std::vector<std::size_t>& origins(const Clause& c) const {
        auto idx = xf_.formula.index_of(c);
        if (!idx) throw Error(Errc::InternalInvariant, "clause " + c.to_string() + " is not an axiom of F[G]");
        return xf_.origins[*idx];
    }
    const BipartiteGraph& graph() const { return ge_.graph(); }
    const CertifiedExpander& expander() const { return ge_; }
    std::size_t r() const { return ge_.r(); }

    /// gamma(Vars(C)), memoized per variable set.
    const VertexSet& closure_of(const VertexSet& vars) {
        auto it = closures_.find(vars);
        if (it != closures_.end()) return it->second;
        if (vars.size() > r() / 2)
            throw Error(Errc::WidthExceedsRadius, "clause width " + std::to_string(vars.size()) + " exceeds r/2 = " +
                                                      std::to_string(r() / 2));
        return closures_.emplace(vars, closure(ge_, vars)).first->second;
    }

    /// Ker(gamma(Vars(C))) in the full graph.
    VertexSet closed_kernel(const Clause& c) { return kernel(graph(), closure_of(c.vars())); }

    /// G^{-1}(C): sign patterns over Ker(gamma(C)) simultaneously falsifiable with C.
    std::vector<Clause> inverse_image(const Clause& c) {
        if (c.width() > r() / 2)
            throw Error(Errc::WidthExceedsRadius, "clause width " + std::to_string(c.width()) + " exceeds r/2 = " +
                                                      std::to_string(r() / 2));
        std::vector<Clause> out;
        for (auto& d : sign_patterns(closed_kernel(c)))
            if (simultaneously_falsifiable(d, c, graph())) out.push_back(std::move(d));
        return out;
    }

    std::size_t cached_closures() const { return closures_.size(); }

private:
    CnfFormula f_;
    CertifiedExpander ge_;
    XorifiedFormula xf_;
    std::map<VertexSet, VertexSet> closures_;
};

struct CondensationResult {
    Refutation proof;
    CondensationStats stats;
};

namespace detail {

class Condenser {
public:
    Condenser(CondensationContext& ctx, const Refutation& in)
        : ctx_(ctx), in_(in), b_(ctx.formula().num_vars()), in_clauses_(), inverse_() {}

    CondensationResult run() {
        auto m = check(ctx_.xorified(), in_);
        if (!m.homogeneous) throw Error(Errc::NotHomogeneous, "condensation needs a homogeneous refutation");
        if (m.width > ctx_.r() / 2)
            throw Error(Errc::WidthExceedsRadius, "refutation width " + std::to_string(m.width) + " exceeds r/2 = " +
                                                      std::to_string(ctx_.r() / 2));
        stats_.width_in = m.width;
        stats_.space_in = m.clause_space;
        std::size_t input_live = 0;
        for (const auto& s : in_.steps) {
            switch (s.kind) {
            case ProofStep::Kind::Download: on_download(s.clause); break;
            case ProofStep::Kind::Resolve: on_resolve(s.first, s.second); break;
            case ProofStep::Kind::Weaken: on_weaken(s.first, s.clause); break;
            case ProofStep::Kind::Erase: on_erase(s.first); break;
            }
            input_live += s.derives() ? 1 : 0;
            input_live -= s.derives() ? 0 : 1;
            stats_.max_input_config = std::max(stats_.max_input_config, input_live);
            stats_.max_backbone = std::max(stats_.max_backbone, backbone_.size());
        }
        CondensationResult res{std::move(b_).finish(), stats_};
        auto out = verify(ctx_.formula(), res.proof);
        res.stats.width_out = out.width;
        res.stats.space_out = out.clause_space;
        return res;
    }

private:
    struct Held {
        StepIndex step;
        std::size_t refs;
    };

    // A new input step deriving `c`; its G^{-1} members are added to the backbone.
    template <class Derive>
    void add_input(const Clause& c, Derive derive) {
        in_clauses_.push_back(c);
        auto inv = ctx_.inverse_image(c);
        stats_.max_inverse_size = std::max(stats_.max_inverse_size, inv.size());
        for (const auto& d : inv) {
            auto it = backbone_.find(d);
            if (it != backbone_.end()) {
                ++it->second.refs;
                continue;
            }
            StepIndex s = derive(d);
            backbone_.emplace(d, Held{s, 1});
        }
        inverse_.push_back(std::move(inv));
    }

    void on_download(const Clause& c) {
        const auto& origin = ctx_.origins(c);
        add_input(c, [&](const Clause& d) {
            for (auto ai : origin) {
                const Clause& a = ctx_.formula()[ai];
                if (!subsumes(a, d)) continue;
                StepIndex s = b_.download(a);
                if (a == d) return s;
                StepIndex w = b_.weaken(s, d);
                b_.erase(s);
                return w;
            }
            throw Error(Errc::InternalInvariant, "no original axiom subsumes " + d.to_string() + " for " + c.to_string());
        });
    }

    void on_resolve(StepIndex i, StepIndex j) {
        const Clause &a = in_clauses_.at(i - 1), &b = in_clauses_.at(j - 1);
        Var pivot = 0;
        clash_count(a, b, &pivot);
        Clause c = resolvent_unchecked(a, b, pivot);
        // Ker(gamma(C v x)) = Ker(gamma(C v ~x)): both premises share their variable set.
        VertexSet source = ctx_.closed_kernel(a);
        add_input(c, [&](const Clause& d) { return ladder(c, d, source); });
    }

    void on_weaken(StepIndex i, const Clause& c) {
        VertexSet source = ctx_.closed_kernel(in_clauses_.at(i - 1));
        add_input(c, [&](const Clause& d) { return ladder(c, d, source); });
    }

    void on_erase(StepIndex i) {
        for (const auto& d : inverse_.at(i - 1)) {
            auto it = backbone_.find(d);
            if (it == backbone_.end()) throw Error(Errc::InternalInvariant, "backbone lost " + d.to_string());
            if (--it->second.refs == 0) {
                b_.erase(it->second.step);
                backbone_.erase(it);
            }
        }
    }

    // Derives `target` in G^{-1}(c) from the live clauses over `source`
    // (= Ker(gamma) of the premise). Peels K = source \ Ker(gamma(c)) in G \ gamma(c)
    // to u_1..u_l, builds the tree D in F_{i-1} <- D v u_i, D v ~u_i in F_i,
    // and weakens the F_0 root into `target`.
    StepIndex ladder(const Clause& c, const Clause& target, const VertexSet& source) {
        const auto& g = ctx_.graph();
        const VertexSet& gamma = ctx_.closure_of(c.vars());
        VertexSet kc = kernel(g, gamma);
        VertexSet base, k;
        std::set_intersection(kc.begin(), kc.end(), source.begin(), source.end(), std::back_inserter(base));
        std::set_difference(source.begin(), source.end(), kc.begin(), kc.end(), std::back_inserter(k));
        auto order = peel_order(remove(g, gamma), k);

        std::vector<Literal> root_lits;
        for (auto l : target)
            if (std::binary_search(base.begin(), base.end(), l.var())) root_lits.push_back(l);
        Clause root(root_lits);
        if (!simultaneously_falsifiable(root, c, g))
            throw Error(Errc::InternalInvariant, "restriction " + root.to_string() + " is not in F_0");

        auto build = [&](auto&& self, const Clause& node, std::size_t level) -> DerivationTree {
            DerivationTree t{node, {}, std::nullopt};
            if (auto it = backbone_.find(node); it != backbone_.end()) {
                t.live = it->second.step;
                return t;
            }
            if (level == order.size())
                throw Error(Errc::InternalInvariant, "ladder leaf " + node.to_string() + " is not in the configuration");
            Var u = order[level].first;
            for (bool neg : {false, true}) {
                Clause child = weaken(node, std::array<Literal, 1>{Literal(u, neg)});
                if (!simultaneously_falsifiable(child, c, g))
                    throw Error(Errc::InternalInvariant, "ladder clause " + child.to_string() + " is not in F_" +
                                                             std::to_string(level + 1));
                t.premises.push_back(self(self, child, level + 1));
            }
            return t;
        };
        DerivationTree tree = build(build, root, 0);
        if (root != target) tree = DerivationTree{target, {std::move(tree)}, std::nullopt};
        if (tree.live) return *tree.live;
        ++stats_.ladders;
        stats_.max_ladder_depth = std::max(stats_.max_ladder_depth, tree.depth());
        return schedule_tree(b_, tree);
    }

    CondensationContext& ctx_;
    const Refutation& in_;
    ProofBuilder b_;
    std::vector<Clause> in_clauses_;             // clause of each input step
    std::vector<std::vector<Clause>> inverse_;   // G^{-1} of each input step
    std::unordered_map<Clause, Held, ClauseHash> backbone_;
    CondensationStats stats_;
};

} // namespace detail

/// Turns a homogeneous refutation of F[G] of width w <= r/2 into a refutation
/// of F of width <= w and clause space <= 2^w s + w + 3. The output is
/// verified against F before it is returned.
inline CondensationResult condense(CondensationContext& ctx, const Refutation& proof) {
    return detail::Condenser(ctx, proof).run();
}

inline CondensationResult condense(const CnfFormula& f, const CertifiedExpander& g, const Refutation& proof) {
    CondensationContext ctx(f, g);
    return condense(ctx, proof);
}

} // namespace hcond
