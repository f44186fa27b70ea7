#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hcond/proof.hpp"
#include "hcond/transform.hpp"

namespace hcond {

struct SearchBudget {
    std::size_t max_width = std::numeric_limits<std::size_t>::max();
    std::size_t max_space = std::numeric_limits<std::size_t>::max();
    std::size_t max_states = 2'000'000;
    double time_limit_seconds = 60.0;
};

struct OracleResult {
    enum class Status { Found, Inconclusive, NoRefutation };

    Status status = Status::Inconclusive;
    std::size_t value = 0;              // meaningful when Found
    std::optional<Refutation> witness;  // a refutation achieving `value`
    std::size_t states = 0;             // clauses or configurations explored
    std::string reason;                 // why the search stopped early

    bool found() const { return status == Status::Found; }
};

inline const char* to_string(OracleResult::Status s) {
    switch (s) {
    case OracleResult::Status::Found: return "found";
    case OracleResult::Status::Inconclusive: return "inconclusive";
    case OracleResult::Status::NoRefutation: return "no-refutation";
    }
    return "?";
}

namespace detail {

class Deadline {
public:
    explicit Deadline(double seconds)
        : end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))) {}
    bool passed() const { return std::chrono::steady_clock::now() > end_; }

private:
    std::chrono::steady_clock::time_point end_;
};

/// Interned clauses with the derivation that first produced each one.
struct ClauseTable {
    std::vector<Clause> clauses;
    std::vector<std::pair<std::int64_t, std::int64_t>> parents; // (-1, -1) for axioms
    std::unordered_map<Clause, std::uint32_t, ClauseHash> index;

    std::pair<std::uint32_t, bool> intern(const Clause& c, std::int64_t p = -1, std::int64_t q = -1) {
        auto [it, inserted] = index.emplace(c, static_cast<std::uint32_t>(clauses.size()));
        if (inserted) {
            clauses.push_back(c);
            parents.emplace_back(p, q);
        }
        return {it->second, inserted};
    }

    /// The ancestors of `root` as a sequence proof (parents before children).
    SequenceProof extract(std::uint32_t root, Var num_vars) const {
        std::vector<std::uint32_t> order;
        std::unordered_map<std::uint32_t, std::size_t> pos;
        std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [id, expanded] = stack.back();
            stack.pop_back();
            if (pos.count(id)) continue;
            if (expanded) {
                pos.emplace(id, order.size());
                order.push_back(id);
                continue;
            }
            stack.push_back({id, true});
            auto [p, q] = parents[id];
            if (p >= 0 && !pos.count(static_cast<std::uint32_t>(p))) stack.push_back({static_cast<std::uint32_t>(p), false});
            if (q >= 0 && !pos.count(static_cast<std::uint32_t>(q))) stack.push_back({static_cast<std::uint32_t>(q), false});
        }
        SequenceProof seq{num_vars, {}};
        for (auto id : order) {
            auto [p, q] = parents[id];
            if (p < 0) seq.entries.push_back({clauses[id], SequenceProof::Rule::Axiom, {}});
            else
                seq.entries.push_back({clauses[id], SequenceProof::Rule::Resolution,
                                       {pos.at(static_cast<std::uint32_t>(p)), pos.at(static_cast<std::uint32_t>(q))}});
        }
        return seq;
    }
};

/// The resolvent of a and b if they clash on exactly one variable.
inline std::optional<Clause> try_resolve(const Clause& a, const Clause& b) {
    Var pivot = 0;
    if (clash_count(a, b, &pivot) != 1) return std::nullopt;
    return resolvent_unchecked(a, b, pivot);
}

enum class Saturation { Refuted, Saturated, OutOfBudget };

/// Given-clause saturation restricted to width <= cap. On Refuted, `bottom`
/// is the id of ⊥ in `table`.
inline Saturation saturate(const CnfFormula& f, std::size_t cap, const SearchBudget& budget, const Deadline& deadline,
                           ClauseTable& table, std::uint32_t& bottom, std::size_t& states) {
    auto by_width = [&](std::uint32_t x, std::uint32_t y) {
        const auto &a = table.clauses[x], &b = table.clauses[y];
        if (a.width() != b.width()) return a.width() > b.width();
        return x > y;
    };
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, decltype(by_width)> pending(by_width);
    for (const auto& c : f)
        if (c.width() <= cap) {
            auto [id, fresh] = table.intern(c);
            if (fresh) pending.push(id);
        }
    std::vector<std::uint32_t> active;
    while (!pending.empty()) {
        std::uint32_t given = pending.top();
        pending.pop();
        if (table.clauses[given].empty()) {
            bottom = given;
            return Saturation::Refuted;
        }
        for (auto other : active) {
            auto r = try_resolve(table.clauses[given], table.clauses[other]);
            if (!r || r->width() > cap) continue;
            auto [id, fresh] = table.intern(*r, given, other);
            if (!fresh) continue;
            if (r->empty()) {
                bottom = id;
                states = table.clauses.size();
                return Saturation::Refuted;
            }
            pending.push(id);
        }
        active.push_back(given);
        states = table.clauses.size();
        if (states > budget.max_states || deadline.passed()) return Saturation::OutOfBudget;
    }
    return Saturation::Saturated;
}

} // namespace detail

/// Least w such that width-w restricted resolution derives ⊥, by iterative
/// deepening on w. The witness is the derivation DAG of ⊥ in configuration form.
inline OracleResult min_width(const CnfFormula& f, const SearchBudget& budget = {}) {
    detail::Deadline deadline(budget.time_limit_seconds);
    OracleResult res;
    const std::size_t top = std::min<std::size_t>(f.num_vars(), budget.max_width);
    for (std::size_t w = 0; w <= top; ++w) {
        detail::ClauseTable table;
        std::uint32_t bottom = 0;
        std::size_t states = 0;
        auto outcome = detail::saturate(f, w, budget, deadline, table, bottom, states);
        res.states += states;
        if (outcome == detail::Saturation::OutOfBudget) {
            res.status = OracleResult::Status::Inconclusive;
            res.reason = "budget exhausted at width " + std::to_string(w);
            return res;
        }
        if (outcome == detail::Saturation::Refuted) {
            res.status = OracleResult::Status::Found;
            res.value = w;
            res.witness = to_configuration_style(table.extract(bottom, f.num_vars()));
            return res;
        }
    }
    if (top < f.num_vars()) {
        res.status = OracleResult::Status::Inconclusive;
        res.reason = "no refutation within the width budget";
    } else {
        res.status = OracleResult::Status::NoRefutation;
    }
    return res;
}

/// Least depth of a refutation with every clause of width <= width_cap, by
/// level-wise labelling: level k holds everything derivable in depth <= k.
inline OracleResult min_depth(const CnfFormula& f, std::optional<std::size_t> width_cap = std::nullopt,
                              const SearchBudget& budget = {}) {
    detail::Deadline deadline(budget.time_limit_seconds);
    const std::size_t cap = width_cap.value_or(f.num_vars());
    detail::ClauseTable table;
    OracleResult res;
    for (const auto& c : f)
        if (c.width() <= cap) table.intern(c);
    auto finish_found = [&](std::uint32_t id, std::size_t level) {
        res.status = OracleResult::Status::Found;
        res.value = level;
        res.witness = to_configuration_style(table.extract(id, f.num_vars()));
        res.states = table.clauses.size();
        return res;
    };
    if (auto it = table.index.find(Clause{}); it != table.index.end()) return finish_found(it->second, 0);
    std::size_t level = 0;
    std::size_t done = 0; // clauses [0, done) have been paired with each other
    while (true) {
        const std::size_t frontier = table.clauses.size();
        if (frontier == done) {
            res.status = OracleResult::Status::NoRefutation;
            res.states = table.clauses.size();
            if (width_cap) res.reason = "no refutation within width " + std::to_string(cap);
            return res;
        }
        ++level;
        // New level: pairs with at least one member from the previous level.
        for (std::size_t i = done; i < frontier; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                auto r = detail::try_resolve(table.clauses[i], table.clauses[j]);
                if (!r || r->width() > cap) continue;
                auto [id, fresh] = table.intern(*r, static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
                if (fresh && r->empty()) return finish_found(id, level);
            }
            if (table.clauses.size() > budget.max_states || deadline.passed()) {
                res.status = OracleResult::Status::Inconclusive;
                res.reason = "budget exhausted at depth " + std::to_string(level);
                res.states = table.clauses.size();
                return res;
            }
        }
        done = frontier;
    }
}

namespace detail {

using Config = std::vector<std::uint32_t>; // sorted clause ids

struct ConfigHash {
    std::size_t operator()(const Config& c) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : c) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

/// A move from one configuration to the next: optionally erase a clause, then
/// derive a clause (download when both premises are absent).
struct Move {
    std::int64_t erased = -1;
    std::uint32_t derived = 0;
    std::int64_t p = -1, q = -1;
};

/// Rebuilds a trace from configurations linked by moves.
inline Refutation replay_moves(const ClauseTable& table, const std::vector<Move>& moves, Var num_vars) {
    ProofBuilder b(num_vars);
    std::unordered_map<std::uint32_t, StepIndex> step;
    for (const auto& m : moves) {
        if (m.erased >= 0) {
            auto id = static_cast<std::uint32_t>(m.erased);
            b.erase(step.at(id));
            step.erase(id);
        }
        StepIndex s = m.p < 0 ? b.download(table.clauses[m.derived])
                              : b.resolve(step.at(static_cast<std::uint32_t>(m.p)), step.at(static_cast<std::uint32_t>(m.q)));
        step[m.derived] = s;
    }
    return std::move(b).finish();
}

/// Breadth-first search over configurations of at most `space` clauses. Erasures
/// happen only when the configuration is full, right before a derivation: any
/// proof can be rearranged into this shape without exceeding its space.
class SpaceSearch {
public:
    SpaceSearch(const CnfFormula& f, std::size_t cap, const SearchBudget& budget, const Deadline& deadline)
        : f_(f), cap_(cap), budget_(budget), deadline_(deadline) {
        for (const auto& c : f)
            if (c.width() <= cap) axioms_.push_back(table_.intern(c).first);
    }

    enum class Outcome { Found, Exhausted, OutOfBudget };

    Outcome run(std::size_t space) {
        nodes_.clear();
        seen_.clear();
        goal_ = -1;
        nodes_.push_back({{}, -1, {}});
        seen_.emplace(Config{}, 0);
        for (std::size_t head = 0; head < nodes_.size(); ++head) {
            if (total_ + nodes_.size() > budget_.max_states || deadline_.passed()) {
                total_ += nodes_.size();
                return Outcome::OutOfBudget;
            }
            const Config cur = nodes_[head].config;
            if (cur.size() < space) {
                if (expand(head, cur, -1)) break;
            } else {
                for (std::size_t k = 0; k < cur.size() && goal_ < 0; ++k) {
                    Config rest = cur;
                    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
                    if (expand(head, rest, cur[k])) break;
                }
            }
            if (goal_ >= 0) break;
        }
        total_ += nodes_.size();
        return goal_ >= 0 ? Outcome::Found : Outcome::Exhausted;
    }

    Refutation witness() const {
        std::vector<Move> moves;
        for (std::int64_t n = goal_; n > 0; n = nodes_[n].parent) moves.push_back(nodes_[n].move);
        std::reverse(moves.begin(), moves.end());
        return replay_moves(table_, moves, f_.num_vars());
    }

    std::size_t states() const { return total_; }

private:
    struct Node {
        Config config;
        std::int64_t parent;
        Move move;
    };

    // Tries every derivation from `base` (the configuration after an optional erasure).
    bool expand(std::size_t head, const Config& base, std::int64_t erased) {
        auto push = [&](std::uint32_t id, std::int64_t p, std::int64_t q) {
            if (std::binary_search(base.begin(), base.end(), id)) return false;
            Config next = base;
            next.insert(std::upper_bound(next.begin(), next.end(), id), id);
            if (!seen_.emplace(next, nodes_.size()).second) return false;
            nodes_.push_back({std::move(next), static_cast<std::int64_t>(head), Move{erased, id, p, q}});
            if (table_.clauses[id].empty()) {
                goal_ = static_cast<std::int64_t>(nodes_.size() - 1);
                return true;
            }
            return false;
        };
        for (auto a : axioms_)
            if (push(a, -1, -1)) return true;
        for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t j = i + 1; j < base.size(); ++j) {
                auto r = try_resolve(table_.clauses[base[i]], table_.clauses[base[j]]);
                if (!r || r->width() > cap_) continue;
                auto id = table_.intern(*r).first;
                if (push(id, base[i], base[j])) return true;
            }
        return false;
    }

    const CnfFormula& f_;
    std::size_t cap_;
    const SearchBudget& budget_;
    const Deadline& deadline_;
    ClauseTable table_;
    std::vector<std::uint32_t> axioms_;
    std::vector<Node> nodes_;
    std::unordered_map<Config, std::size_t, ConfigHash> seen_;
    std::int64_t goal_ = -1;
    std::size_t total_ = 0;
};

template <class Search>
OracleResult deepen_space(const CnfFormula& f, std::optional<std::size_t> width_cap, const SearchBudget& budget) {
    Deadline deadline(budget.time_limit_seconds);
    const std::size_t cap = width_cap.value_or(f.num_vars());
    OracleResult res;
    {
        // Existence within the width cap decides NoRefutation up front.
        ClauseTable table;
        std::uint32_t bottom = 0;
        std::size_t states = 0;
        auto outcome = saturate(f, cap, budget, deadline, table, bottom, states);
        res.states = states;
        if (outcome == Saturation::OutOfBudget) {
            res.reason = "budget exhausted while checking refutability";
            return res;
        }
        if (outcome == Saturation::Saturated) {
            res.status = OracleResult::Status::NoRefutation;
            if (width_cap) res.reason = "no refutation within width " + std::to_string(cap);
            return res;
        }
    }
    Search search(f, cap, budget, deadline);
    for (std::size_t s = 1; s <= budget.max_space; ++s) {
        auto outcome = search.run(s);
        res.states = search.states();
        if (outcome == Search::Outcome::OutOfBudget) {
            res.reason = "budget exhausted at space " + std::to_string(s);
            return res;
        }
        if (outcome == Search::Outcome::Found) {
            res.status = OracleResult::Status::Found;
            res.value = s;
            res.witness = search.witness();
            return res;
        }
    }
    res.reason = "no refutation within the space budget";
    return res;
}

/// Depth-first search over configurations with every move (download, infer,
/// erase) available at all times. Kept deliberately separate from SpaceSearch
/// so the two can cross-check each other.
class SpaceSearchDfs {
public:
    SpaceSearchDfs(const CnfFormula& f, std::size_t cap, const SearchBudget& budget, const Deadline& deadline)
        : f_(f), cap_(cap), budget_(budget), deadline_(deadline) {
        for (const auto& c : f)
            if (c.width() <= cap) axioms_.push_back(c);
    }

    enum class Outcome { Found, Exhausted, OutOfBudget };

    Outcome run(std::size_t space) {
        visited_.clear();
        path_.clear();
        space_ = space;
        std::vector<Clause> start;
        auto out = dfs(start);
        total_ += visited_.size();
        return out;
    }

    Refutation witness() const {
        ProofBuilder b(f_.num_vars());
        std::vector<std::pair<Clause, StepIndex>> live;
        auto find = [&](const Clause& c) {
            return std::find_if(live.begin(), live.end(), [&](auto& e) { return e.first == c; });
        };
        for (const auto& st : path_) {
            if (st.kind == Step::Erase) {
                auto it = find(st.clause);
                b.erase(it->second);
                live.erase(it);
            } else if (st.kind == Step::Download) {
                live.emplace_back(st.clause, b.download(st.clause));
            } else {
                StepIndex s = b.resolve(find(st.p)->second, find(st.q)->second);
                live.emplace_back(st.clause, s);
            }
        }
        return std::move(b).finish();
    }

    std::size_t states() const { return total_ + visited_.size(); }

private:
    struct Step {
        enum Kind { Download, Resolve, Erase } kind;
        Clause clause, p, q;
    };

    struct SetHash {
        std::size_t operator()(const std::vector<Clause>& cs) const noexcept {
            std::size_t h = 0;
            for (const auto& c : cs) h = h * 31 + ClauseHash{}(c);
            return h;
        }
    };

    Outcome dfs(std::vector<Clause>& cur) {
        if (std::find(cur.begin(), cur.end(), Clause{}) != cur.end()) return Outcome::Found;
        std::vector<Clause> key = cur;
        std::sort(key.begin(), key.end());
        if (!visited_.insert(std::move(key)).second) return Outcome::Exhausted;
        if (total_ + visited_.size() > budget_.max_states || deadline_.passed()) return Outcome::OutOfBudget;
        auto attempt = [&](Step st, auto mutate, auto undo) -> std::optional<Outcome> {
            path_.push_back(st);
            mutate();
            auto out = dfs(cur);
            if (out != Outcome::Exhausted) return out;
            undo();
            path_.pop_back();
            return std::nullopt;
        };
        auto present = [&](const Clause& c) { return std::find(cur.begin(), cur.end(), c) != cur.end(); };
        if (cur.size() < space_) {
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (std::size_t j = i + 1; j < cur.size(); ++j) {
                    auto r = try_resolve(cur[i], cur[j]);
                    if (!r || r->width() > cap_ || present(*r)) continue;
                    Clause a = cur[i], b = cur[j];
                    if (auto out = attempt({Step::Resolve, *r, a, b}, [&] { cur.push_back(*r); }, [&] { cur.pop_back(); }))
                        return *out;
                }
            for (const auto& ax : axioms_) {
                if (present(ax)) continue;
                if (auto out = attempt({Step::Download, ax, {}, {}}, [&] { cur.push_back(ax); }, [&] { cur.pop_back(); }))
                    return *out;
            }
        }
        for (std::size_t i = 0; i < cur.size(); ++i) {
            Clause gone = cur[i];
            if (auto out = attempt(
                    {Step::Erase, gone, {}, {}}, [&] { cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i)); },
                    [&] { cur.insert(cur.begin() + static_cast<std::ptrdiff_t>(i), gone); }))
                return *out;
        }
        return Outcome::Exhausted;
    }

    const CnfFormula& f_;
    std::size_t cap_;
    const SearchBudget& budget_;
    const Deadline& deadline_;
    std::vector<Clause> axioms_;
    std::size_t space_ = 0;
    std::unordered_set<std::vector<Clause>, SetHash> visited_;
    std::vector<Step> path_;
    std::size_t total_ = 0;
};

} // namespace detail

/// Least s such that a configuration-style refutation exists in clause space s
/// with every clause of width <= width_cap. Weakening-free; iterative deepening
/// on s with breadth-first search over canonical configurations.
inline OracleResult min_space(const CnfFormula& f, std::optional<std::size_t> width_cap = std::nullopt,
                              const SearchBudget& budget = {}) {
    return detail::deepen_space<detail::SpaceSearch>(f, width_cap, budget);
}

/// Same answer as min_space by an independent depth-first search with all moves.
inline OracleResult min_space_dfs(const CnfFormula& f, std::optional<std::size_t> width_cap = std::nullopt,
                                  const SearchBudget& budget = {}) {
    return detail::deepen_space<detail::SpaceSearchDfs>(f, width_cap, budget);
}

} // namespace hcond
