#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hcond/bipartite.hpp"

namespace hcond {

using VertexSet = std::vector<Var>; // sorted, no duplicates

namespace detail {

inline VertexSet normalized(VertexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace detail

/// N(U') in the (possibly induced) graph.
inline VertexSet neighbourhood(const BipartiteGraph& g, const VertexSet& uset) {
    VertexSet out;
    for (Var u : uset) out.insert(out.end(), g.neighbours(u).begin(), g.neighbours(u).end());
    return detail::normalized(std::move(out));
}

/// Right vertices with exactly one neighbour in U'.
inline VertexSet boundary(const BipartiteGraph& g, const VertexSet& uset) {
    std::vector<unsigned> hits(g.right_size() + 1, 0);
    for (Var u : uset)
        for (Var v : g.neighbours(u)) ++hits[v];
    VertexSet out;
    for (Var v = 1; v <= g.right_size(); ++v)
        if (hits[v] == 1) out.push_back(v);
    return out;
}

/// Ker(V'): live left vertices whose whole neighbourhood lies in V'.
inline VertexSet kernel(const BipartiteGraph& g, const VertexSet& vset) {
    std::vector<bool> in(g.right_size() + 1, false);
    for (Var v : vset) in.at(v) = true;
    VertexSet out;
    for (Var u = 1; u <= g.left_size(); ++u) {
        if (!g.left_alive(u)) continue;
        const auto& nb = g.neighbours(u);
        if (std::all_of(nb.begin(), nb.end(), [&](Var v) { return in[v]; })) out.push_back(u);
    }
    return out;
}

/// G \ V': deletes V', then the left vertices left without neighbours.
/// Vertex identifiers are preserved.
inline BipartiteGraph remove(const BipartiteGraph& g, const VertexSet& vset) {
    BipartiteGraph h = g;
    auto ker = kernel(g, vset);
    for (Var v : vset)
        if (h.right_alive(v)) h.kill_right(v);
    for (Var u : ker) h.kill_left(u);
    return h;
}

struct ExpansionCertificate {
    bool pass = true;
    std::size_t r = 0;
    double c = 0;
    std::optional<VertexSet> witness; // first violating left set (by size, then lexicographic)

    bool operator==(const ExpansionCertificate&) const = default;
};

inline constexpr std::size_t kDefaultRadiusGuard = 20;

namespace detail {

/// Enumerates live left subsets of sizes 1..r in increasing size, lexicographic
/// within a size, maintaining the boundary size incrementally. Stops at the first
/// subset for which `violates(size, boundary)` holds and returns it.
template <class Pred>
std::optional<VertexSet> first_violator(const BipartiteGraph& g, std::size_t r, Pred violates) {
    const VertexSet left = g.alive_left();
    r = std::min(r, left.size());
    std::vector<unsigned> hits(g.right_size() + 1, 0);
    std::size_t bsize = 0;
    auto add = [&](Var u) {
        for (Var v : g.neighbours(u)) {
            if (hits[v] == 0) ++bsize;
            else if (hits[v] == 1) --bsize;
            ++hits[v];
        }
    };
    auto drop = [&](Var u) {
        for (Var v : g.neighbours(u)) {
            --hits[v];
            if (hits[v] == 0) --bsize;
            else if (hits[v] == 1) ++bsize;
        }
    };
    VertexSet chosen;
    std::optional<VertexSet> found;
    auto rec = [&](auto&& self, std::size_t start, std::size_t target) -> bool {
        if (chosen.size() == target) {
            if (violates(target, bsize)) {
                found = chosen;
                return true;
            }
            return false;
        }
        for (std::size_t i = start; i + (target - chosen.size()) <= left.size(); ++i) {
            chosen.push_back(left[i]);
            add(left[i]);
            bool stop = self(self, i + 1, target);
            drop(left[i]);
            chosen.pop_back();
            if (stop) return true;
        }
        return false;
    };
    for (std::size_t size = 1; size <= r; ++size)
        if (rec(rec, 0, size)) return found;
    return std::nullopt;
}

inline void guard_radius(const BipartiteGraph& g, std::size_t r, std::size_t guard) {
    const std::size_t effective = std::min(r, g.alive_left().size());
    if (effective > guard)
        throw Error(Errc::PreconditionViolated, "expansion check over subsets of size " + std::to_string(effective) +
                                                    " exceeds the radius guard " + std::to_string(guard));
}

} // namespace detail

/// Exhaustive (r, c)-boundary expansion check over all live left subsets of
/// size 1..r. Subsets larger than the live left side are vacuous.
inline ExpansionCertificate is_boundary_expander(const BipartiteGraph& g, std::size_t r, double c,
                                                 std::size_t radius_guard = kDefaultRadiusGuard) {
    if (r < 1) throw Error(Errc::PreconditionViolated, "expansion radius must be >= 1");
    detail::guard_radius(g, r, radius_guard);
    ExpansionCertificate cert{true, r, c, std::nullopt};
    cert.witness = detail::first_violator(
        g, r, [c](std::size_t size, std::size_t b) { return static_cast<double>(b) < c * static_cast<double>(size); });
    cert.pass = !cert.witness;
    return cert;
}

/// A graph together with a passing expansion certificate. Construction runs the
/// exhaustive check once; consumers trust the stored (r, c).
class CertifiedExpander {
public:
    CertifiedExpander(BipartiteGraph g, std::size_t r, double c, std::size_t radius_guard = kDefaultRadiusGuard)
        : g_(std::move(g)), r_(r), c_(c) {
        auto cert = is_boundary_expander(g_, r, c, radius_guard);
        if (!cert.pass)
            throw Error(Errc::PreconditionViolated, "graph is not an (" + std::to_string(r) + ", " + std::to_string(c) +
                                                        ")-boundary expander");
    }

    const BipartiteGraph& graph() const { return g_; }
    std::size_t r() const { return r_; }
    double c() const { return c_; }

private:
    BipartiteGraph g_;
    std::size_t r_;
    double c_;
};

/// Parameters tying the sampler to the condensation lemma.
struct ExpanderParams {
    unsigned k = 1;     // width of the original refutation
    double eps = 0.25;  // exponent slack
    double delta = 0;   // eps / (10k)
    double d0 = 0;      // 5 / eps
    unsigned ell = 1;   // target width
    std::size_t n = 0;  // right size
    unsigned d = 1;     // left degree
    std::size_t r = 1;  // expansion radius
    std::size_t N = 0;  // left size
    double n0 = 0;      // size threshold 3^(2/lambda)
    double lambda = 0;  // eps/2 - 1/d0 - delta

    /// Derived choices: delta = eps/(10k), d0 = 5/eps, d = floor(ell/(2k)),
    /// r = 2 ell log2 n, N = floor(n^(delta ell)).
    static ExpanderParams from_condensation(unsigned k, double eps, unsigned ell, std::size_t n) {
        ExpanderParams p;
        p.k = k;
        p.eps = eps;
        p.ell = ell;
        p.n = n;
        p.delta = eps / (10.0 * k);
        p.d0 = 5.0 / eps;
        p.d = ell / (2 * k);
        p.r = static_cast<std::size_t>(std::floor(2.0 * ell * std::log2(static_cast<double>(n))));
        p.N = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), p.delta * ell)));
        p.lambda = eps / 2 - 1 / p.d0 - p.delta;
        p.n0 = std::pow(3.0, 2.0 / p.lambda);
        return p;
    }

    /// Explicit sampler sizes with the remaining fields derived from eps and k.
    static ExpanderParams explicit_sizes(std::size_t N, std::size_t n, unsigned d, std::size_t r, double eps = 0.25,
                                         unsigned k = 1) {
        ExpanderParams p;
        p.k = k;
        p.eps = eps;
        p.delta = eps / (10.0 * k);
        p.d0 = 5.0 / eps;
        p.lambda = eps / 2 - 1 / p.d0 - p.delta;
        p.n0 = std::pow(3.0, 2.0 / p.lambda);
        p.N = N;
        p.n = n;
        p.d = d;
        p.r = r;
        p.ell = 2 * k * d;
        return p;
    }

    /// Checks the relations that must hold for any instance; throws
    /// PreconditionViolated naming the first that fails.
    void validate() const {
        auto fail = [](const std::string& why) { throw Error(Errc::PreconditionViolated, why); };
        if (!(eps > 0)) fail("eps must be positive");
        if (k < 1) fail("k must be >= 1");
        if (!(delta + 1 / d0 < eps / 2)) fail("delta + 1/d0 must be below eps/2");
        if (d < 1) fail("left degree d must be >= 1");
        if (n < 1 || N < 1) fail("both sides must be nonempty");
        if (r < 1) fail("radius must be >= 1");
    }

    /// True when n is large enough for the failure bound of the sampler to apply.
    bool in_asymptotic_regime() const { return static_cast<double>(n) >= n0; }
};

/// Each of the N left vertices draws d right neighbours uniformly with
/// repetition; duplicates collapse, so realized degrees lie in [1, d].
inline BipartiteGraph sample_expander(std::size_t N, std::size_t n, unsigned d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw Error(Errc::PreconditionViolated, "sampler needs n >= 1 and d >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Var> pick(1, static_cast<Var>(n));
    BipartiteGraph g(static_cast<Var>(N), static_cast<Var>(n));
    for (Var u = 1; u <= N; ++u) {
        std::vector<Var> vs(d);
        for (auto& v : vs) v = pick(rng);
        g.set_neighbours(u, std::move(vs));
    }
    return g;
}

inline BipartiteGraph sample_expander(const ExpanderParams& p, std::uint64_t seed) {
    p.validate();
    return sample_expander(p.N, p.n, p.d, seed);
}

/// Iterative closure: starting from V_0 = V', while G \ V_i has a left set U
/// with |U| <= r/2 and |boundary(U)| < |U|, add N^G(U) for the first such U.
/// The result satisfies |Ker(closure)| <= |V'| and G \ closure is an
/// (r/2, 1)-boundary expander; both are checked before returning.
inline VertexSet closure(const CertifiedExpander& ce, VertexSet vset, std::size_t radius_guard = kDefaultRadiusGuard) {
    const auto& g = ce.graph();
    vset = detail::normalized(std::move(vset));
    for (Var v : vset)
        if (v < 1 || v > g.right_size()) throw Error(Errc::PreconditionViolated, "right vertex out of range");
    const std::size_t half = ce.r() / 2;
    if (vset.size() > half)
        throw Error(Errc::PreconditionViolated, "closure needs |V'| <= r/2 = " + std::to_string(half));
    if (ce.c() < 1) throw Error(Errc::PreconditionViolated, "closure needs an expansion factor of at least 1");
    const std::size_t original = vset.size();
    while (true) {
        BipartiteGraph h = remove(g, vset);
        detail::guard_radius(h, half, radius_guard);
        auto u = detail::first_violator(h, half, [](std::size_t size, std::size_t b) { return b < size; });
        if (!u) break;
        auto add = neighbourhood(g, *u);
        VertexSet merged;
        std::set_union(vset.begin(), vset.end(), add.begin(), add.end(), std::back_inserter(merged));
        vset = std::move(merged);
    }
    if (kernel(g, vset).size() > original)
        throw Error(ce.c() < 2 ? Errc::PreconditionViolated : Errc::InternalInvariant,
                    "closure kernel exceeds |V'|; the graph does not expand enough for this set");
    return vset;
}

/// Orders U' as u_1..u_l with matched v_i in N(u_i) \ N({u_1..u_{i-1}}), built
/// back to front: the smallest boundary vertex of the remaining set fixes the
/// last remaining position.
inline std::vector<std::pair<Var, Var>> peel_order(const BipartiteGraph& g, VertexSet uset) {
    uset = detail::normalized(std::move(uset));
    std::vector<std::pair<Var, Var>> out(uset.size());
    std::vector<unsigned> hits(g.right_size() + 1, 0);
    for (Var u : uset) {
        if (u < 1 || u > g.left_size() || !g.left_alive(u))
            throw Error(Errc::PreconditionViolated, "left vertex " + std::to_string(u) + " is not in the graph");
        for (Var v : g.neighbours(u)) ++hits[v];
    }
    VertexSet rest = uset;
    for (std::size_t pos = uset.size(); pos-- > 0;) {
        std::optional<std::pair<Var, Var>> pick;
        for (Var u : rest)
            for (Var v : g.neighbours(u))
                if (hits[v] == 1 && (!pick || v < pick->second)) pick = std::pair{u, v};
        if (!pick) throw Error(Errc::NoBoundaryVertex, "no boundary vertex left while peeling");
        out[pos] = *pick;
        for (Var v : g.neighbours(pick->first)) --hits[v];
        rest.erase(std::find(rest.begin(), rest.end(), pick->first));
    }
    return out;
}

} // namespace hcond
