#pragma once

#include <array>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hcond/cnf.hpp"

namespace hcond {

/// A fan-in-2 DAG with a unique sink. Vertices are 1..size(); every non-source
/// has exactly two predecessors.
class Dag {
public:
    using Preds = std::optional<std::array<Var, 2>>;

    Dag() = default;

    /// Validates: predecessors in range and distinct, acyclic, exactly one sink.
    explicit Dag(std::vector<Preds> preds) : preds_(std::move(preds)) {
        const Var n = size();
        if (n == 0) throw Error(Errc::MalformedDag, "empty DAG");
        std::vector<std::size_t> out_degree(n + 1, 0), in_degree(n + 1, 0);
        std::vector<std::vector<Var>> succ(n + 1);
        for (Var v = 1; v <= n; ++v) {
            const auto& p = preds_[v - 1];
            if (!p) continue;
            for (Var u : *p) {
                if (u < 1 || u > n) throw Error(Errc::MalformedDag, "predecessor out of range at " + std::to_string(v));
                ++out_degree[u];
                succ[u].push_back(v);
                ++in_degree[v];
            }
            if ((*p)[0] == (*p)[1]) throw Error(Errc::MalformedDag, "repeated predecessor at " + std::to_string(v));
        }
        std::vector<Var> queue;
        for (Var v = 1; v <= n; ++v)
            if (in_degree[v] == 0) queue.push_back(v);
        std::size_t seen = 0;
        while (!queue.empty()) {
            Var v = queue.back();
            queue.pop_back();
            ++seen;
            for (Var w : succ[v])
                if (--in_degree[w] == 0) queue.push_back(w);
        }
        if (seen != n) throw Error(Errc::MalformedDag, "cycle detected");
        std::vector<Var> sinks;
        for (Var v = 1; v <= n; ++v)
            if (out_degree[v] == 0) sinks.push_back(v);
        if (sinks.size() != 1)
            throw Error(Errc::MalformedDag, "expected a unique sink, found " + std::to_string(sinks.size()));
        sink_ = sinks.front();
    }

    Var size() const { return static_cast<Var>(preds_.size()); }
    Var sink() const { return sink_; }
    const Preds& preds(Var v) const { return preds_[v - 1]; }
    bool is_source(Var v) const { return !preds_[v - 1].has_value(); }

    std::vector<Var> sources() const {
        std::vector<Var> s;
        for (Var v = 1; v <= size(); ++v)
            if (is_source(v)) s.push_back(v);
        return s;
    }

    std::size_t edge_count() const { return 2 * (size() - sources().size()); }

private:
    std::vector<Preds> preds_;
    Var sink_ = 0;
};

/// Pyramid of the given height: height+1 layers, the bottom layer holds the
/// height+1 sources, the apex is the sink. Numbering is bottom-up, left to right.
inline Dag pyramid_dag(unsigned height) {
    if (height < 1) throw Error(Errc::MalformedDag, "pyramid height must be >= 1");
    std::vector<Dag::Preds> preds;
    std::vector<Var> below;
    for (unsigned i = 0; i <= height; ++i) {
        preds.push_back(std::nullopt);
        below.push_back(static_cast<Var>(preds.size()));
    }
    for (unsigned width = height; width >= 1; --width) {
        std::vector<Var> layer;
        for (unsigned p = 0; p < width; ++p) {
            preds.push_back(std::array<Var, 2>{below[p], below[p + 1]});
            layer.push_back(static_cast<Var>(preds.size()));
        }
        below = std::move(layer);
    }
    return Dag(std::move(preds));
}

/// A chain c_1 .. c_length where c_{i+1} has predecessors c_i and a fresh source.
/// Sources come first: c_1, then the auxiliary sources, then c_2 .. c_length.
inline Dag path_dag(unsigned length) {
    if (length < 1) throw Error(Errc::MalformedDag, "path length must be >= 1");
    std::vector<Dag::Preds> preds(length, std::nullopt); // c_1 and aux_1 .. aux_{length-1}
    Var prev = 1;
    for (unsigned i = 1; i < length; ++i) {
        preds.push_back(std::array<Var, 2>{prev, static_cast<Var>(i + 1)});
        prev = static_cast<Var>(preds.size());
    }
    return Dag(std::move(preds));
}

/// One variable per vertex: unit s for every source, ¬u ∨ ¬w ∨ v for every
/// non-source v with predecessors u and w, and ¬z for the sink z.
inline CnfFormula pebbling_formula(const Dag& d) {
    CnfFormula f(d.size());
    for (Var s : d.sources()) f.add(Clause{Literal::pos(s)});
    for (Var v = 1; v <= d.size(); ++v) {
        const auto& p = d.preds(v);
        if (p) f.add(Clause{Literal::neg((*p)[0]), Literal::neg((*p)[1]), Literal::pos(v)});
    }
    f.add(Clause{Literal::neg(d.sink())});
    return f;
}

namespace dag_format {

/// `p dag <n>` then `<v> <pred1> <pred2>` for each non-source.
inline void write(std::ostream& out, const Dag& d) {
    out << "p dag " << d.size() << '\n';
    for (Var v = 1; v <= d.size(); ++v)
        if (auto& p = d.preds(v)) out << v << ' ' << (*p)[0] << ' ' << (*p)[1] << '\n';
}

inline Dag read(std::istream& in) {
    std::string line;
    std::vector<Dag::Preds> preds;
    bool have_header = false;
    while (std::getline(in, line)) {
        std::istringstream iss(line);
        std::string tag;
        if (!(iss >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string fmt;
            long n = -1;
            iss >> fmt >> n;
            if (fmt != "dag" || n < 1) throw Error(Errc::ParseError, "bad dag header: " + line);
            preds.assign(static_cast<std::size_t>(n), std::nullopt);
            have_header = true;
            continue;
        }
        if (!have_header) throw Error(Errc::ParseError, "dag line before header");
        long v = std::stol(tag), a = 0, b = 0;
        if (!(iss >> a >> b)) throw Error(Errc::ParseError, "dag line needs two predecessors: " + line);
        if (v < 1 || v > static_cast<long>(preds.size()) || a < 1 || b < 1)
            throw Error(Errc::MalformedDag, "vertex out of range: " + line);
        if (preds[v - 1]) throw Error(Errc::MalformedDag, "vertex listed twice: " + line);
        preds[v - 1] = std::array<Var, 2>{static_cast<Var>(a), static_cast<Var>(b)};
    }
    if (!have_header) throw Error(Errc::ParseError, "missing dag header");
    return Dag(std::move(preds));
}

inline Dag parse(const std::string& s) {
    std::istringstream in(s);
    return read(in);
}

inline std::string to_string(const Dag& d) {
    std::ostringstream out;
    write(out, d);
    return out.str();
}

} // namespace dag_format
} // namespace hcond
