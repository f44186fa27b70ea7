#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcond/error.hpp"

namespace hcond {

using Var = std::uint32_t;

/// A variable together with a polarity. Variables are dense and start at 1.
class Literal {
public:
    constexpr Literal() = default;
    constexpr Literal(Var var, bool negative) : var_(var), negative_(negative) {}

    static constexpr Literal pos(Var v) { return {v, false}; }
    static constexpr Literal neg(Var v) { return {v, true}; }

    /// DIMACS encoding: nonzero integer, negative means negated.
    static Literal from_dimacs(long code) {
        if (code == 0) throw Error(Errc::ParseError, "literal 0 has no variable");
        return {static_cast<Var>(std::labs(code)), code < 0};
    }
    long to_dimacs() const { return negative_ ? -static_cast<long>(var_) : static_cast<long>(var_); }

    constexpr Var var() const { return var_; }
    constexpr bool negative() const { return negative_; }
    constexpr bool positive() const { return !negative_; }

    constexpr Literal operator~() const { return {var_, !negative_}; }

    constexpr bool operator==(const Literal&) const = default;
    constexpr auto operator<=>(const Literal& o) const {
        if (auto c = var_ <=> o.var_; c != 0) return c;
        return negative_ <=> o.negative_;
    }

    /// Dense code 2v + sign, usable as an array index.
    constexpr std::uint32_t code() const { return 2 * var_ + (negative_ ? 1 : 0); }

private:
    Var var_ = 0;
    bool negative_ = false;
};

/// A non-trivial clause. Literals are kept sorted by variable with no repeats,
/// so equality is structural and the empty clause is the value `Clause{}`.
class Clause {
public:
    Clause() = default;

    /// Canonicalizes; throws TrivialResult if some variable occurs with both signs.
    explicit Clause(std::vector<Literal> lits) : lits_(std::move(lits)) { canonicalize(); }
    Clause(std::initializer_list<Literal> lits) : lits_(lits) { canonicalize(); }

    static Clause from_dimacs(std::initializer_list<long> codes) {
        std::vector<Literal> lits;
        for (long c : codes) lits.push_back(Literal::from_dimacs(c));
        return Clause(std::move(lits));
    }

    std::size_t width() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    std::span<const Literal> literals() const { return lits_; }
    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

    bool contains(Literal l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

    std::optional<Literal> find_var(Var v) const {
        auto it = std::lower_bound(lits_.begin(), lits_.end(), Literal::pos(v));
        if (it != lits_.end() && it->var() == v) return *it;
        return std::nullopt;
    }

    std::vector<Var> vars() const {
        std::vector<Var> out;
        out.reserve(lits_.size());
        for (auto l : lits_) out.push_back(l.var());
        return out;
    }

    Var max_var() const { return lits_.empty() ? 0 : lits_.back().var(); }

    bool operator==(const Clause&) const = default;
    auto operator<=>(const Clause& o) const {
        if (auto c = lits_.size() <=> o.lits_.size(); c != 0) return c;
        return lits_ <=> o.lits_;
    }

    std::string to_string() const {
        if (lits_.empty()) return "⊥";
        std::string s;
        for (std::size_t i = 0; i < lits_.size(); ++i) {
            if (i) s += " ";
            s += std::to_string(lits_[i].to_dimacs());
        }
        return s;
    }

private:
    void canonicalize() {
        std::sort(lits_.begin(), lits_.end());
        lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
        for (std::size_t i = 0; i + 1 < lits_.size(); ++i) {
            if (lits_[i].var() == lits_[i + 1].var())
                throw Error(Errc::TrivialResult,
                            "variable " + std::to_string(lits_[i].var()) + " occurs with both signs");
        }
        if (!lits_.empty() && lits_.front().var() == 0)
            throw Error(Errc::ParseError, "variable identifiers start at 1");
    }

    std::vector<Literal> lits_;
};

struct ClauseHash {
    std::size_t operator()(const Clause& c) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto l : c) {
            h ^= l.code();
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

/// Number of variables on which the two clauses have opposite signs.
inline std::size_t clash_count(const Clause& a, const Clause& b, Var* last_clash = nullptr) {
    std::size_t n = 0;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->var() < j->var()) {
            ++i;
        } else if (j->var() < i->var()) {
            ++j;
        } else {
            if (i->negative() != j->negative()) {
                ++n;
                if (last_clash) *last_clash = i->var();
            }
            ++i;
            ++j;
        }
    }
    return n;
}

/// Merge of two clauses with the pivot removed. Caller guarantees a single clash on `pivot`.
inline Clause resolvent_unchecked(const Clause& a, const Clause& b, Var pivot) {
    std::vector<Literal> out;
    out.reserve(a.width() + b.width());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::remove_if(out.begin(), out.end(), [pivot](Literal l) { return l.var() == pivot; }),
              out.end());
    return Clause(std::move(out));
}

/// Resolution rule: from c1 ∨ x and c2 ∨ ¬x derive c1 ∨ c2.
inline Clause resolve(const Clause& c1, const Clause& c2, Var pivot) {
    auto l1 = c1.find_var(pivot);
    auto l2 = c2.find_var(pivot);
    if (!l1 || !l2 || l1->negative() == l2->negative())
        throw Error(Errc::PivotAbsent, "variable " + std::to_string(pivot) + " does not occur with opposite signs");
    if (clash_count(c1, c2) != 1)
        throw Error(Errc::TrivialResolvent, "resolvent on " + std::to_string(pivot) + " would be trivial");
    return resolvent_unchecked(c1, c2, pivot);
}

/// True iff every literal of c1 appears in c2.
inline bool subsumes(const Clause& c1, const Clause& c2) {
    return std::includes(c2.begin(), c2.end(), c1.begin(), c1.end());
}

/// Weakening rule: c ∨ extra. Throws TrivialResult on a clash.
inline Clause weaken(const Clause& c, std::span<const Literal> extra) {
    std::vector<Literal> lits(c.begin(), c.end());
    lits.insert(lits.end(), extra.begin(), extra.end());
    return Clause(std::move(lits));
}

/// True iff the two clauses resolve homogeneously: c ∨ x and c ∨ ¬x.
inline bool homogeneous_pair(const Clause& a, const Clause& b) {
    if (a.width() != b.width()) return false;
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.width(); ++i) {
        auto x = a.literals()[i], y = b.literals()[i];
        if (x.var() != y.var()) return false;
        if (x.negative() != y.negative()) ++diff;
    }
    return diff == 1;
}

/// A set of clauses over variables 1..num_vars. Keeps insertion order for
/// reproducible output and rejects duplicates.
class CnfFormula {
public:
    CnfFormula() = default;
    explicit CnfFormula(Var num_vars) : num_vars_(num_vars) {}
    CnfFormula(Var num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
        for (auto& c : clauses) add(std::move(c));
    }

    /// Returns false if the clause was already present.
    bool add(Clause c) {
        if (c.max_var() > num_vars_)
            throw Error(Errc::UncoveredVariable, "clause " + c.to_string() + " exceeds num_vars " +
                                                     std::to_string(num_vars_));
        auto [it, inserted] = index_.emplace(c, clauses_.size());
        if (!inserted) return false;
        clauses_.push_back(std::move(c));
        return true;
    }

    Var num_vars() const { return num_vars_; }
    std::size_t size() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& operator[](std::size_t i) const { return clauses_[i]; }
    auto begin() const { return clauses_.begin(); }
    auto end() const { return clauses_.end(); }

    bool contains(const Clause& c) const { return index_.count(c) != 0; }
    std::optional<std::size_t> index_of(const Clause& c) const {
        auto it = index_.find(c);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t max_width() const {
        std::size_t w = 0;
        for (const auto& c : clauses_) w = std::max(w, c.width());
        return w;
    }

    bool operator==(const CnfFormula& o) const {
        if (num_vars_ != o.num_vars_ || clauses_.size() != o.clauses_.size()) return false;
        return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) { return o.contains(c); });
    }

private:
    Var num_vars_ = 0;
    std::vector<Clause> clauses_;
    std::unordered_map<Clause, std::size_t, ClauseHash> index_;
};

/// Evaluates a clause under a total assignment indexed by variable (index 0 unused).
inline bool satisfies(const std::vector<bool>& assignment, const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](Literal l) { return assignment[l.var()] != l.negative(); });
}

inline bool satisfies(const std::vector<bool>& assignment, const CnfFormula& f) {
    return std::all_of(f.begin(), f.end(), [&](const Clause& c) { return satisfies(assignment, c); });
}

/// Exhaustive satisfiability check; intended for at most ~24 variables.
inline bool is_satisfiable_bruteforce(const CnfFormula& f) {
    const Var n = f.num_vars();
    std::vector<bool> a(n + 1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (Var v = 1; v <= n; ++v) a[v] = (mask >> (v - 1)) & 1;
        if (satisfies(a, f)) return true;
    }
    return false;
}

} // namespace hcond
