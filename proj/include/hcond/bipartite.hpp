#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hcond/cnf.hpp"

namespace hcond {

/// Bipartite graph with left vertices 1..N (original variables) and right
/// vertices 1..n (new variables). Induced subgraphs keep the original
/// identifiers and mark deleted vertices instead of renumbering.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    BipartiteGraph(Var left_size, Var right_size)
        : n_right_(right_size), adj_(left_size), left_alive_(left_size, true), right_alive_(right_size, true) {}

    BipartiteGraph(Var right_size, std::vector<std::vector<Var>> adjacency)
        : n_right_(right_size), adj_(std::move(adjacency)), left_alive_(adj_.size(), true),
          right_alive_(right_size, true) {
        for (Var u = 1; u <= left_size(); ++u) normalize(u);
    }

    Var left_size() const { return static_cast<Var>(adj_.size()); }
    Var right_size() const { return n_right_; }

    const std::vector<Var>& neighbours(Var u) const { return adj_.at(u - 1); }

    void set_neighbours(Var u, std::vector<Var> vs) {
        adj_.at(u - 1) = std::move(vs);
        normalize(u);
    }

    bool left_alive(Var u) const { return left_alive_[u - 1]; }
    bool right_alive(Var v) const { return right_alive_[v - 1]; }

    std::vector<Var> alive_left() const {
        std::vector<Var> out;
        for (Var u = 1; u <= left_size(); ++u)
            if (left_alive(u)) out.push_back(u);
        return out;
    }

    std::size_t left_degree_bound() const {
        std::size_t d = 0;
        for (const auto& a : adj_) d = std::max(d, a.size());
        return d;
    }

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& a : adj_) e += a.size();
        return e;
    }

    /// True if some right vertex has two or more left neighbours.
    bool has_overlap() const {
        std::vector<int> deg(n_right_ + 1, 0);
        for (Var u = 1; u <= left_size(); ++u)
            if (left_alive(u))
                for (Var v : neighbours(u))
                    if (++deg[v] > 1) return true;
        return false;
    }

    bool operator==(const BipartiteGraph&) const = default;

    // Used by induced-subgraph construction.
    void kill_left(Var u) {
        left_alive_[u - 1] = false;
        adj_[u - 1].clear();
    }
    void kill_right(Var v) {
        right_alive_[v - 1] = false;
        for (auto& a : adj_) a.erase(std::remove(a.begin(), a.end(), v), a.end());
    }

private:
    void normalize(Var u) {
        auto& a = adj_[u - 1];
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        for (Var v : a)
            if (v < 1 || v > n_right_)
                throw Error(Errc::ParseError, "right vertex " + std::to_string(v) + " out of range for left vertex " +
                                                  std::to_string(u));
    }

    Var n_right_ = 0;
    std::vector<std::vector<Var>> adj_;
    std::vector<bool> left_alive_;
    std::vector<bool> right_alive_;
};

/// Left vertex i gets the private right vertices (i-1)d+1 .. id.
inline BipartiteGraph disjoint_xor_graph(Var num_vars, Var arity) {
    if (arity < 1) throw Error(Errc::PreconditionViolated, "XOR arity must be >= 1");
    BipartiteGraph g(num_vars, num_vars * arity);
    for (Var i = 1; i <= num_vars; ++i) {
        std::vector<Var> vs;
        for (Var k = 1; k <= arity; ++k) vs.push_back((i - 1) * arity + k);
        g.set_neighbours(i, std::move(vs));
    }
    return g;
}

/// The identity substitution u_i -> v_i.
inline BipartiteGraph matching_graph(Var num_vars) { return disjoint_xor_graph(num_vars, 1); }

namespace bip_format {

/// `p bip <N> <n>` then one line `<u> <v>* 0` per left vertex.
inline void write(std::ostream& out, const BipartiteGraph& g) {
    out << "p bip " << g.left_size() << ' ' << g.right_size() << '\n';
    for (Var u = 1; u <= g.left_size(); ++u) {
        out << u;
        for (Var v : g.neighbours(u)) out << ' ' << v;
        out << " 0\n";
    }
}

inline BipartiteGraph read(std::istream& in) {
    std::string line;
    BipartiteGraph g;
    bool have_header = false;
    while (std::getline(in, line)) {
        std::istringstream iss(line);
        std::string tag;
        if (!(iss >> tag) || tag == "c") continue;
        if (tag == "p") {
            std::string fmt;
            long N = -1, n = -1;
            iss >> fmt >> N >> n;
            if (fmt != "bip" || N < 0 || n < 0) throw Error(Errc::ParseError, "bad bip header: " + line);
            g = BipartiteGraph(static_cast<Var>(N), static_cast<Var>(n));
            have_header = true;
            continue;
        }
        if (!have_header) throw Error(Errc::ParseError, "bip line before header");
        long u = std::stol(tag);
        if (u < 1 || u > static_cast<long>(g.left_size())) throw Error(Errc::ParseError, "left vertex out of range: " + line);
        std::vector<Var> vs;
        long v;
        bool terminated = false;
        while (iss >> v) {
            if (v == 0) {
                terminated = true;
                break;
            }
            if (v < 0) throw Error(Errc::ParseError, "negative right vertex: " + line);
            vs.push_back(static_cast<Var>(v));
        }
        if (!terminated) throw Error(Errc::ParseError, "bip line not 0-terminated: " + line);
        std::size_t before = vs.size();
        g.set_neighbours(static_cast<Var>(u), std::move(vs));
        if (g.neighbours(static_cast<Var>(u)).size() != before)
            throw Error(Errc::ParseError, "duplicate neighbour listed: " + line);
    }
    if (!have_header) throw Error(Errc::ParseError, "missing bip header");
    return g;
}

inline BipartiteGraph parse(const std::string& s) {
    std::istringstream in(s);
    return read(in);
}

inline BipartiteGraph read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    return read(in);
}

inline std::string to_string(const BipartiteGraph& g) {
    std::ostringstream out;
    write(out, g);
    return out.str();
}

} // namespace bip_format
} // namespace hcond
