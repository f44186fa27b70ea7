#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "hcond/proof.hpp"

namespace hcond {

/// A refutation written as an ordered clause list where each entry names the
/// (0-based) earlier entries it was derived from.
struct SequenceProof {
    enum class Rule { Axiom, Resolution, Weakening };
    struct Entry {
        Clause clause;
        Rule rule = Rule::Axiom;
        std::vector<std::size_t> parents;
    };

    Var num_vars = 0;
    std::vector<Entry> entries;
};

namespace detail {

inline void check_dag(const SequenceProof& seq) {
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        const auto& e = seq.entries[i];
        std::size_t want = e.rule == SequenceProof::Rule::Axiom ? 0 : e.rule == SequenceProof::Rule::Resolution ? 2 : 1;
        if (e.parents.size() != want)
            throw Error(Errc::MalformedDag, "entry " + std::to_string(i) + " has " + std::to_string(e.parents.size()) +
                                                " parents, expected " + std::to_string(want));
        for (auto p : e.parents)
            if (p >= i) throw Error(Errc::MalformedDag, "entry " + std::to_string(i) + " refers forward to " + std::to_string(p));
    }
}

/// Index of the last entry that uses each entry (the entry itself if unused).
inline std::vector<std::size_t> last_uses(const SequenceProof& seq) {
    std::vector<std::size_t> last(seq.entries.size());
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        last[i] = i;
        for (auto p : seq.entries[i].parents) last[p] = i;
    }
    return last;
}

} // namespace detail

/// Measures of a sequence proof computed directly from the clause DAG: the
/// space at step i counts earlier clauses with an edge to some step >= i, plus
/// the clause derived at step i.
inline ProofMeasures sequence_measures(const SequenceProof& seq) {
    detail::check_dag(seq);
    ProofMeasures m;
    auto last = detail::last_uses(seq);
    std::vector<std::size_t> depth(seq.entries.size(), 0);
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        const auto& e = seq.entries[i];
        for (auto p : e.parents) depth[i] = std::max(depth[i], depth[p] + 1);
        m.depth = std::max(m.depth, depth[i]);
        m.width = std::max(m.width, e.clause.width());
        if (e.clause.empty()) m.refutes = true;
        if (e.rule == SequenceProof::Rule::Resolution &&
            !homogeneous_pair(seq.entries[e.parents[0]].clause, seq.entries[e.parents[1]].clause))
            m.homogeneous = false;
        std::size_t space = 1;
        for (std::size_t j = 0; j < i; ++j)
            if (last[j] >= i && last[j] != j) ++space;
        m.clause_space = std::max(m.clause_space, space);
    }
    m.length = seq.entries.size();
    return m;
}

/// Derives each entry in order and erases every clause right after its last use.
/// The final entry is kept so that a refutation ends with ⊥ in memory.
inline Refutation to_configuration_style(const SequenceProof& seq) {
    detail::check_dag(seq);
    auto last = detail::last_uses(seq);
    Refutation out{seq.num_vars, {}};
    std::vector<StepIndex> id(seq.entries.size());
    StepIndex next = 0;
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        const auto& e = seq.entries[i];
        switch (e.rule) {
        case SequenceProof::Rule::Axiom: out.steps.push_back(ProofStep::download(e.clause)); break;
        case SequenceProof::Rule::Resolution:
            out.steps.push_back(ProofStep::resolve(id[e.parents[0]], id[e.parents[1]]));
            break;
        case SequenceProof::Rule::Weakening: out.steps.push_back(ProofStep::weaken(id[e.parents[0]], e.clause)); break;
        }
        id[i] = ++next;
        std::vector<std::size_t> done;
        for (auto p : e.parents)
            if (last[p] == i) done.push_back(p);
        std::sort(done.begin(), done.end());
        done.erase(std::unique(done.begin(), done.end()), done.end());
        for (auto p : done) out.steps.push_back(ProofStep::erase(id[p]));
        if (last[i] == i && i + 1 != seq.entries.size()) out.steps.push_back(ProofStep::erase(id[i]));
    }
    return out;
}

/// Lists the clause-producing steps of a trace as a sequence proof. Clauses are
/// recomputed, so the trace must be legal.
inline SequenceProof to_sequence(const Refutation& proof) {
    SequenceProof seq{proof.num_vars, {}};
    for (const auto& s : proof.steps) {
        switch (s.kind) {
        case ProofStep::Kind::Download: seq.entries.push_back({s.clause, SequenceProof::Rule::Axiom, {}}); break;
        case ProofStep::Kind::Resolve: {
            const auto &a = seq.entries.at(s.first - 1).clause, &b = seq.entries.at(s.second - 1).clause;
            Var pivot = 0;
            if (clash_count(a, b, &pivot) != 1) throw Error(Errc::MalformedDag, "illegal resolution step");
            seq.entries.push_back({resolvent_unchecked(a, b, pivot), SequenceProof::Rule::Resolution,
                                   {s.first - 1u, s.second - 1u}});
            break;
        }
        case ProofStep::Kind::Weaken:
            seq.entries.push_back({s.clause, SequenceProof::Rule::Weakening, {s.first - 1u}});
            break;
        case ProofStep::Kind::Erase: break;
        }
    }
    return seq;
}

/// Rewrites every resolution B∨x, C∨¬x ⊢ B∨C into the homogeneous shape by
/// first weakening both premises to B∨C∨x and B∨C∨¬x. The weakened copies are
/// erased right after the resolution step.
inline Refutation homogenize(const CnfFormula& f, const Refutation& proof) {
    if (proof.has_weakening()) throw Error(Errc::InputHasWeakening, "homogenize expects a weakening-free proof");
    ProofBuilder b(proof.num_vars);
    std::vector<StepIndex> remap;
    remap.push_back(0);
    for (std::size_t t = 0; t < proof.steps.size(); ++t) {
        const auto& s = proof.steps[t];
        auto mapped = [&](StepIndex i) {
            if (i == 0 || i >= remap.size()) throw IllegalStep(t, "reference to undefined step");
            return remap[i];
        };
        switch (s.kind) {
        case ProofStep::Kind::Download:
            if (!f.contains(s.clause)) throw IllegalStep(t, "clause " + s.clause.to_string() + " is not an axiom");
            remap.push_back(b.download(s.clause));
            break;
        case ProofStep::Kind::Erase: b.erase(mapped(s.first)); break;
        case ProofStep::Kind::Resolve: {
            StepIndex i = mapped(s.first), j = mapped(s.second);
            const Clause &ci = b.clause(i), &cj = b.clause(j);
            Var pivot = 0;
            if (clash_count(ci, cj, &pivot) != 1) throw IllegalStep(t, "not a legal resolution");
            if (homogeneous_pair(ci, cj)) {
                remap.push_back(b.resolve(i, j));
                break;
            }
            Clause r = resolvent_unchecked(ci, cj, pivot);
            auto lift = [&](StepIndex k) -> std::optional<StepIndex> {
                const Literal l = *b.clause(k).find_var(pivot);
                Clause target = weaken(r, std::span<const Literal>(&l, 1));
                if (target == b.clause(k)) return std::nullopt;
                return b.weaken(k, target);
            };
            auto wi = lift(i);
            auto wj = lift(j);
            remap.push_back(b.resolve(wi.value_or(i), wj.value_or(j)));
            if (wi) b.erase(*wi);
            if (wj) b.erase(*wj);
            break;
        }
        case ProofStep::Kind::Weaken: break; // rejected above
        }
    }
    return std::move(b).finish();
}

/// Rewrites each download of a clause that is not an axiom but is subsumed by
/// one into: download the axiom, weaken, erase the axiom. Other steps are kept
/// with their references renumbered.
inline Refutation import_subsumption(const CnfFormula& f, const Refutation& proof) {
    ProofBuilder b(proof.num_vars);
    std::vector<StepIndex> remap{0};
    for (std::size_t t = 0; t < proof.steps.size(); ++t) {
        const auto& s = proof.steps[t];
        auto mapped = [&](StepIndex i) {
            if (i == 0 || i >= remap.size() || !b.live(remap[i])) throw IllegalStep(t, "reference to a dead or undefined step");
            return remap[i];
        };
        switch (s.kind) {
        case ProofStep::Kind::Download: {
            if (f.contains(s.clause)) {
                remap.push_back(b.download(s.clause));
                break;
            }
            auto it = std::find_if(f.begin(), f.end(), [&](const Clause& a) { return subsumes(a, s.clause); });
            if (it == f.end()) throw IllegalStep(t, "clause " + s.clause.to_string() + " is not subsumed by an axiom");
            StepIndex a = b.download(*it);
            remap.push_back(b.weaken(a, s.clause));
            b.erase(a);
            break;
        }
        case ProofStep::Kind::Resolve: {
            StepIndex i = mapped(s.first), j = mapped(s.second);
            if (clash_count(b.clause(i), b.clause(j)) != 1) throw IllegalStep(t, "not a legal resolution");
            remap.push_back(b.resolve(i, j));
            break;
        }
        case ProofStep::Kind::Weaken: {
            StepIndex i = mapped(s.first);
            if (!subsumes(b.clause(i), s.clause)) throw IllegalStep(t, "not a weakening");
            remap.push_back(b.weaken(i, s.clause));
            break;
        }
        case ProofStep::Kind::Erase: b.erase(mapped(s.first)); break;
        }
    }
    return std::move(b).finish();
}

/// A derivation tree: leaves have no premises, weakening nodes one, and
/// resolution nodes two. A leaf may name a step already present in the
/// configuration; otherwise it is downloaded as an axiom.
struct DerivationTree {
    Clause clause;
    std::vector<DerivationTree> premises;
    std::optional<StepIndex> live;

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& p : premises) d = std::max(d, p.depth() + 1);
        return d;
    }
    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& p : premises) n += p.size();
        return n;
    }
};

namespace detail {

struct Scheduled {
    StepIndex step;
    bool scratch; // derived here, so the caller erases it after use
};

inline Scheduled schedule(ProofBuilder& b, const DerivationTree& t) {
    if (t.premises.empty()) {
        if (t.live) return {*t.live, false};
        return {b.download(t.clause), true};
    }
    if (t.premises.size() == 1) {
        auto p = schedule(b, t.premises[0]);
        StepIndex s = p.step;
        if (b.clause(p.step) != t.clause || !p.scratch) s = b.weaken(p.step, t.clause);
        if (p.scratch && s != p.step) b.erase(p.step);
        return {s, true};
    }
    // Deeper premise first: the other one is then computed while holding a single clause.
    const bool swap = t.premises[1].depth() > t.premises[0].depth();
    const auto& first = t.premises[swap ? 1 : 0];
    const auto& second = t.premises[swap ? 0 : 1];
    auto a = schedule(b, first);
    auto c = schedule(b, second);
    StepIndex s = b.resolve(a.step, c.step);
    if (b.clause(s) != t.clause)
        throw Error(Errc::InternalInvariant, "tree node " + t.clause.to_string() + " is not the resolvent " +
                                                 b.clause(s).to_string());
    if (a.scratch) b.erase(a.step);
    if (c.scratch) b.erase(c.step);
    return {s, true};
}

} // namespace detail

/// Emits a post-order schedule of `tree` into `b`, erasing every intermediate
/// clause right after its use. Returns the step holding the root clause.
/// The extra space used on top of the current configuration is at most depth + 2.
inline StepIndex schedule_tree(ProofBuilder& b, const DerivationTree& tree) { return detail::schedule(b, tree).step; }

/// Realizes a tree-like derivation as a standalone configuration-style fragment:
/// leaves are downloaded, and the root stays in memory at the end.
inline Refutation realize_in_space(const DerivationTree& tree, Var num_vars) {
    ProofBuilder b(num_vars);
    schedule_tree(b, tree);
    return std::move(b).finish();
}

/// The leaf clauses of a tree (those that are downloaded by realize_in_space).
inline CnfFormula tree_leaves(const DerivationTree& tree, Var num_vars) {
    CnfFormula f(num_vars);
    std::vector<const DerivationTree*> stack{&tree};
    while (!stack.empty()) {
        auto* t = stack.back();
        stack.pop_back();
        if (t->premises.empty() && !t->live) f.add(t->clause);
        for (const auto& p : t->premises) stack.push_back(&p);
    }
    return f;
}

} // namespace hcond
