#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hcond/cnf.hpp"

namespace hcond {

/// 1-based index over the clause-producing steps (download, resolve, weaken) of a trace.
using StepIndex = std::uint32_t;

struct ProofStep {
    enum class Kind { Download, Resolve, Weaken, Erase };

    Kind kind = Kind::Download;
    Clause clause;        // Download: the axiom. Weaken: the weakened clause.
    StepIndex first = 0;  // Resolve/Weaken/Erase: referenced step.
    StepIndex second = 0; // Resolve: the other premise.

    static ProofStep download(Clause c) { return {Kind::Download, std::move(c), 0, 0}; }
    static ProofStep resolve(StepIndex i, StepIndex j) { return {Kind::Resolve, {}, i, j}; }
    static ProofStep weaken(StepIndex i, Clause c) { return {Kind::Weaken, std::move(c), i, 0}; }
    static ProofStep erase(StepIndex i) { return {Kind::Erase, {}, i, 0}; }

    bool derives() const { return kind != Kind::Erase; }
    bool operator==(const ProofStep&) const = default;
};

/// A configuration-style trace. The configuration after step t is the set of
/// derived clauses not yet erased.
struct Refutation {
    Var num_vars = 0;
    std::vector<ProofStep> steps;

    std::size_t derivation_count() const {
        return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](auto& s) { return s.derives(); }));
    }
    bool has_weakening() const {
        return std::any_of(steps.begin(), steps.end(), [](auto& s) { return s.kind == ProofStep::Kind::Weaken; });
    }
    bool operator==(const Refutation&) const = default;
};

struct ProofMeasures {
    std::size_t length = 0;       // downloads + inferences
    std::size_t width = 0;        // widest clause
    std::size_t clause_space = 0; // max configuration size
    std::size_t var_space = 0;    // max distinct variables in a configuration
    std::size_t depth = 0;        // longest path in the derivation DAG
    bool refutes = false;         // ⊥ was derived
    bool homogeneous = true;      // every resolution has the shape C∨x, C∨¬x ⊢ C

    bool operator==(const ProofMeasures&) const = default;
};

struct CheckOptions {
    bool allow_weakening = true;
    bool require_refutation = true;
};

namespace detail {

/// Replays a trace, tracking the live configuration and all measures.
class Replay {
public:
    explicit Replay(Var num_vars) : var_count_(num_vars + 1, 0) {}

    const Clause& clause(StepIndex i) const { return clauses_[i - 1]; }
    std::size_t depth(StepIndex i) const { return depths_[i - 1]; }
    StepIndex count() const { return static_cast<StepIndex>(clauses_.size()); }

    bool live(StepIndex i) const { return i >= 1 && i <= clauses_.size() && alive_[i - 1]; }
    std::size_t live_count() const { return live_; }
    std::size_t live_vars() const { return distinct_vars_; }

    StepIndex add(Clause c, std::size_t depth) {
        if (c.max_var() >= var_count_.size())
            throw Error(Errc::InternalInvariant, "clause " + c.to_string() + " exceeds the variable range");
        for (auto l : c)
            if (var_count_[l.var()]++ == 0) ++distinct_vars_;
        clauses_.push_back(std::move(c));
        depths_.push_back(depth);
        alive_.push_back(true);
        ++live_;
        return count();
    }

    void erase(StepIndex i) {
        alive_[i - 1] = false;
        --live_;
        for (auto l : clauses_[i - 1])
            if (--var_count_[l.var()] == 0) --distinct_vars_;
    }

private:
    std::vector<Clause> clauses_;
    std::vector<std::size_t> depths_;
    std::vector<bool> alive_;
    std::vector<std::size_t> var_count_;
    std::size_t live_ = 0;
    std::size_t distinct_vars_ = 0;
};

} // namespace detail

/// Replays `proof` against `f` and returns its measures. Downloads must be
/// exact members of `f`; erased steps may not be referenced.
inline ProofMeasures check(const CnfFormula& f, const Refutation& proof, CheckOptions opts = {}) {
    detail::Replay rp(f.num_vars());
    ProofMeasures m;
    auto need_live = [&](std::size_t at, StepIndex i) {
        if (i == 0 || i > rp.count()) throw IllegalStep(at, "reference to undefined step " + std::to_string(i));
        if (!rp.live(i)) throw IllegalStep(at, "reference to erased step " + std::to_string(i));
    };
    auto need_vars = [&](std::size_t at, const Clause& c) {
        if (c.max_var() > f.num_vars()) throw IllegalStep(at, "variable out of range in " + c.to_string());
    };

    for (std::size_t t = 0; t < proof.steps.size(); ++t) {
        const auto& s = proof.steps[t];
        switch (s.kind) {
        case ProofStep::Kind::Download: {
            need_vars(t, s.clause);
            if (!f.contains(s.clause)) throw IllegalStep(t, "clause " + s.clause.to_string() + " is not an axiom");
            rp.add(s.clause, 0);
            break;
        }
        case ProofStep::Kind::Resolve: {
            need_live(t, s.first);
            need_live(t, s.second);
            const auto &a = rp.clause(s.first), &b = rp.clause(s.second);
            Var pivot = 0;
            std::size_t clashes = clash_count(a, b, &pivot);
            if (clashes == 0) throw IllegalStep(t, "premises have no complementary pair");
            if (clashes > 1) throw IllegalStep(t, "resolvent would be trivial");
            if (!homogeneous_pair(a, b)) m.homogeneous = false;
            rp.add(resolvent_unchecked(a, b, pivot), 1 + std::max(rp.depth(s.first), rp.depth(s.second)));
            break;
        }
        case ProofStep::Kind::Weaken: {
            if (!opts.allow_weakening) throw IllegalStep(t, "weakening not permitted");
            need_live(t, s.first);
            need_vars(t, s.clause);
            if (!subsumes(rp.clause(s.first), s.clause))
                throw IllegalStep(t, "weakened clause does not contain its premise");
            rp.add(s.clause, 1 + rp.depth(s.first));
            break;
        }
        case ProofStep::Kind::Erase: {
            need_live(t, s.first);
            rp.erase(s.first);
            break;
        }
        }
        if (s.derives()) {
            const auto& c = rp.clause(rp.count());
            ++m.length;
            m.width = std::max(m.width, c.width());
            m.depth = std::max(m.depth, rp.depth(rp.count()));
            if (c.empty()) m.refutes = true;
        }
        m.clause_space = std::max(m.clause_space, rp.live_count());
        m.var_space = std::max(m.var_space, rp.live_vars());
    }
    if (opts.require_refutation && !m.refutes)
        throw Error(Errc::NotARefutation, "the empty clause is never derived");
    return m;
}

/// Verifies a complete refutation of `f`.
inline ProofMeasures verify(const CnfFormula& f, const Refutation& proof, bool allow_weakening = true) {
    return check(f, proof, {allow_weakening, true});
}

/// Appends steps to a trace while tracking the live configuration. Inference
/// results are computed here, so a builder can only produce legal steps.
class ProofBuilder {
public:
    explicit ProofBuilder(Var num_vars) : num_vars_(num_vars), rp_(num_vars) { proof_.num_vars = num_vars; }

    StepIndex download(const Clause& c) {
        proof_.steps.push_back(ProofStep::download(c));
        return record(rp_.add(c, 0));
    }

    StepIndex resolve(StepIndex i, StepIndex j) {
        require_live(i);
        require_live(j);
        Var pivot = 0;
        if (clash_count(rp_.clause(i), rp_.clause(j), &pivot) != 1)
            throw Error(Errc::InternalInvariant, "builder: steps " + std::to_string(i) + ", " + std::to_string(j) +
                                                     " do not resolve");
        Clause r = resolvent_unchecked(rp_.clause(i), rp_.clause(j), pivot);
        proof_.steps.push_back(ProofStep::resolve(i, j));
        return record(rp_.add(std::move(r), 1 + std::max(rp_.depth(i), rp_.depth(j))));
    }

    StepIndex weaken(StepIndex i, const Clause& c) {
        require_live(i);
        if (!subsumes(rp_.clause(i), c))
            throw Error(Errc::InternalInvariant, "builder: " + c.to_string() + " is not a weakening");
        proof_.steps.push_back(ProofStep::weaken(i, c));
        return record(rp_.add(c, 1 + rp_.depth(i)));
    }

    void erase(StepIndex i) {
        require_live(i);
        proof_.steps.push_back(ProofStep::erase(i));
        rp_.erase(i);
    }

    const Clause& clause(StepIndex i) const { return rp_.clause(i); }
    std::size_t depth(StepIndex i) const { return rp_.depth(i); }
    bool live(StepIndex i) const { return rp_.live(i); }
    std::size_t live_count() const { return rp_.live_count(); }
    std::size_t peak_live() const { return peak_; }
    Var num_vars() const { return num_vars_; }
    const Refutation& proof() const { return proof_; }
    Refutation finish() && { return std::move(proof_); }

private:
    void require_live(StepIndex i) const {
        if (!rp_.live(i)) throw Error(Errc::InternalInvariant, "builder: step " + std::to_string(i) + " not live");
    }
    StepIndex record(StepIndex i) {
        peak_ = std::max(peak_, rp_.live_count());
        return i;
    }

    Var num_vars_;
    detail::Replay rp_;
    Refutation proof_;
    std::size_t peak_ = 0;
};

namespace trace {

/// Text trace format:
///   p res <num_vars>
///   a <lit>* 0      axiom download
///   r <i> <j> 0     resolve live steps i and j
///   w <i> <lit>* 0  weaken step i into the listed clause
///   e <i> 0         erase step i
inline void write(std::ostream& out, const Refutation& p) {
    out << "p res " << p.num_vars << '\n';
    for (const auto& s : p.steps) {
        switch (s.kind) {
        case ProofStep::Kind::Download:
            out << 'a';
            for (auto l : s.clause) out << ' ' << l.to_dimacs();
            out << " 0\n";
            break;
        case ProofStep::Kind::Resolve: out << "r " << s.first << ' ' << s.second << " 0\n"; break;
        case ProofStep::Kind::Weaken:
            out << "w " << s.first;
            for (auto l : s.clause) out << ' ' << l.to_dimacs();
            out << " 0\n";
            break;
        case ProofStep::Kind::Erase: out << "e " << s.first << " 0\n"; break;
        }
    }
}

inline std::string to_string(const Refutation& p) {
    std::ostringstream out;
    write(out, p);
    return out.str();
}

inline Refutation read(std::istream& in) {
    Refutation p;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream iss(line);
        std::string tag;
        if (!(iss >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string fmt;
            long nv = -1;
            iss >> fmt >> nv;
            if (fmt != "res" || nv < 0) fail("bad header");
            p.num_vars = static_cast<Var>(nv);
            have_header = true;
            continue;
        }
        if (!have_header) fail("step before header");
        std::vector<long> nums;
        long x;
        while (iss >> x) nums.push_back(x);
        if (!iss.eof()) fail("non-numeric token");
        if (nums.empty() || nums.back() != 0) fail("step not 0-terminated");
        nums.pop_back();
        auto index = [&](long v) {
            if (v <= 0) fail("step index must be positive");
            return static_cast<StepIndex>(v);
        };
        auto lits = [&](std::size_t from) {
            std::vector<Literal> out;
            for (std::size_t k = from; k < nums.size(); ++k) out.push_back(Literal::from_dimacs(nums[k]));
            return Clause(std::move(out));
        };
        if (tag == "a") {
            p.steps.push_back(ProofStep::download(lits(0)));
        } else if (tag == "r") {
            if (nums.size() != 2) fail("resolve takes two step indices");
            p.steps.push_back(ProofStep::resolve(index(nums[0]), index(nums[1])));
        } else if (tag == "w") {
            if (nums.empty()) fail("weaken needs a step index");
            p.steps.push_back(ProofStep::weaken(index(nums[0]), lits(1)));
        } else if (tag == "e") {
            if (nums.size() != 1) fail("erase takes one step index");
            p.steps.push_back(ProofStep::erase(index(nums[0])));
        } else {
            fail("unknown step tag '" + tag + "'");
        }
    }
    if (!have_header) throw Error(Errc::ParseError, "missing header");
    return p;
}

inline Refutation parse(const std::string& text) {
    std::istringstream in(text);
    return read(in);
}

inline Refutation read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    return read(in);
}

} // namespace trace
} // namespace hcond
