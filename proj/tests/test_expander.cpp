#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace hcond;
using namespace hcond::testing;

namespace {

// Bitmask reference implementations, independent of the incremental ones.
std::uint32_t nb_mask(const BipartiteGraph& g, Var u) {
    std::uint32_t m = 0;
    for (Var v : g.neighbours(u)) m |= 1u << (v - 1);
    return m;
}

std::size_t boundary_size_ref(const BipartiteGraph& g, std::uint32_t left_set) {
    std::uint32_t once = 0, twice = 0;
    for (Var u = 1; u <= g.left_size(); ++u) {
        if (!((left_set >> (u - 1)) & 1)) continue;
        auto m = nb_mask(g, u);
        twice |= once & m;
        once ^= m & ~twice;
        once &= ~twice;
    }
    return static_cast<std::size_t>(std::popcount(once));
}

bool expander_ref(const BipartiteGraph& g, std::size_t r, double c) {
    std::uint32_t alive = 0;
    for (Var u = 1; u <= g.left_size(); ++u)
        if (g.left_alive(u)) alive |= 1u << (u - 1);
    for (std::uint32_t s = 1; s < (1u << g.left_size()); ++s) {
        if ((s & ~alive) != 0) continue;
        auto size = static_cast<std::size_t>(std::popcount(s));
        if (size > r) continue;
        if (static_cast<double>(boundary_size_ref(g, s)) < c * static_cast<double>(size)) return false;
    }
    return true;
}

VertexSet from_mask(std::uint32_t m, Var n) {
    VertexSet s;
    for (Var v = 1; v <= n; ++v)
        if ((m >> (v - 1)) & 1) s.push_back(v);
    return s;
}

} // namespace

TEST(Expander, BoundaryKernelRemoveExamples) {
    BipartiteGraph g(4, {{1, 2}, {2, 3}, {4}});
    EXPECT_EQ(boundary(g, {1, 2}), (VertexSet{1, 3}));
    EXPECT_EQ(neighbourhood(g, {1, 2}), (VertexSet{1, 2, 3}));
    EXPECT_EQ(kernel(g, {1, 2, 4}), (VertexSet{1, 3}));
    auto h = remove(g, {1, 2});
    EXPECT_FALSE(h.left_alive(1));
    EXPECT_TRUE(h.left_alive(2));
    EXPECT_EQ(h.neighbours(2), (VertexSet{3}));
    EXPECT_FALSE(h.right_alive(2));
    EXPECT_EQ(h.left_size(), 3u);
}

TEST(Expander, BoundaryAndKernelAgreeWithBruteForce) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        auto g = random_graph(rng, 6, 8, 3);
        for (std::uint32_t s = 0; s < 64; ++s) EXPECT_EQ(boundary(g, from_mask(s, 6)).size(), boundary_size_ref(g, s));
        for (std::uint32_t vm = 0; vm < 256; vm += 7) {
            auto vs = from_mask(vm, 8);
            VertexSet ker;
            for (Var u = 1; u <= 6; ++u)
                if ((nb_mask(g, u) & ~vm) == 0) ker.push_back(u);
            EXPECT_EQ(kernel(g, vs), ker);
        }
    }
}

TEST(Expander, CertificationAgreesWithBitmaskCheck) {
    std::mt19937_64 rng(37);
    int passes = 0;
    for (int t = 0; t < 150; ++t) {
        auto g = random_graph(rng, 7, 10, 3);
        std::size_t r = 1 + rng() % 5;
        double c = (rng() & 1) ? 1.0 : 1.5;
        auto cert = is_boundary_expander(g, r, c);
        ASSERT_EQ(cert.pass, expander_ref(g, r, c));
        passes += cert.pass;
        if (!cert.pass) {
            ASSERT_TRUE(cert.witness);
            EXPECT_LT(static_cast<double>(boundary(g, *cert.witness).size()),
                      c * static_cast<double>(cert.witness->size()));
        }
    }
    EXPECT_GT(passes, 10);
}

TEST(Expander, WitnessIsFirstBySizeThenLexicographic) {
    // u1 and u2 are twins: {1,2} has empty boundary; so does {3,4}.
    BipartiteGraph g(4, {{1, 2}, {1, 2}, {3, 4}, {3, 4}});
    auto cert = is_boundary_expander(g, 2, 1);
    ASSERT_FALSE(cert.pass);
    EXPECT_EQ(*cert.witness, (VertexSet{1, 2}));
}

TEST(Expander, RadiusGuardAndVacuousSubsets) {
    auto g = matching_graph(3);
    EXPECT_TRUE(is_boundary_expander(g, 100, 1).pass);
    EXPECT_THROW(is_boundary_expander(matching_graph(25), 25, 1), Error);
    EXPECT_THROW(CertifiedExpander(BipartiteGraph(2, {{1}, {1}}), 2, 1), Error);
}

TEST(Expander, ClosurePostconditions) {
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int t = 0; t < 200 && checked < 40; ++t) {
        auto g = random_graph(rng, 3, 12, 3);
        const std::size_t r = 4;
        if (!is_boundary_expander(g, r, 2).pass) continue;
        CertifiedExpander ce(g, r, 2);
        for (int k = 0; k < 10; ++k) {
            VertexSet vs = detail::normalized({static_cast<Var>(1 + rng() % 12), static_cast<Var>(1 + rng() % 12)});
            auto cl = closure(ce, vs);
            EXPECT_TRUE(std::includes(cl.begin(), cl.end(), vs.begin(), vs.end()));
            EXPECT_LE(kernel(g, cl).size(), vs.size());
            EXPECT_TRUE(is_boundary_expander(remove(g, cl), r / 2, 1).pass);
            if (cl.size() <= r / 2) {
                EXPECT_EQ(closure(ce, cl), cl);
            }
        }
        ++checked;
    }
    EXPECT_GE(checked, 20);
}

TEST(Expander, ClosureOfEmptySetIsEmptyOnExpander) {
    CertifiedExpander ce(disjoint_xor_graph(3, 2), 4, 2);
    EXPECT_TRUE(closure(ce, {}).empty());
    // Removing one of u1's two vertices leaves u1 with boundary 1: no violator.
    EXPECT_EQ(closure(ce, {1}), (VertexSet{1}));
    EXPECT_THROW(closure(ce, {1, 2, 3}), Error);
}

TEST(Expander, PeelOrderProperty) {
    std::mt19937_64 rng(43);
    int peeled = 0;
    for (int t = 0; t < 200; ++t) {
        auto g = random_graph(rng, 6, 10, 3);
        std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 63);
        auto us = from_mask(m, 6);
        try {
            auto order = peel_order(g, us);
            ASSERT_EQ(order.size(), us.size());
            VertexSet seen;
            for (auto [u, v] : order) {
                EXPECT_TRUE(std::binary_search(g.neighbours(u).begin(), g.neighbours(u).end(), v));
                EXPECT_FALSE(std::binary_search(seen.begin(), seen.end(), v));
                seen.insert(seen.end(), g.neighbours(u).begin(), g.neighbours(u).end());
                seen = detail::normalized(std::move(seen));
            }
            ++peeled;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::NoBoundaryVertex);
            // Then some subset has empty boundary.
            EXPECT_FALSE(is_boundary_expander(g, us.size(), 1).pass);
        }
    }
    EXPECT_GT(peeled, 50);
}

TEST(Expander, SamplerDeterministicWithBoundedDegree) {
    auto a = sample_expander(10, 20, 3, 99);
    auto b = sample_expander(10, 20, 3, 99);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, sample_expander(10, 20, 3, 100));
    for (Var u = 1; u <= 10; ++u) {
        EXPECT_GE(a.neighbours(u).size(), 1u);
        EXPECT_LE(a.neighbours(u).size(), 3u);
    }
}

TEST(Expander, NeighbourhoodOfCertifiedSetsIsLarge) {
    // For an (r, c) boundary expander every left set of size <= r has
    // |N(U)| >= |boundary(U)| >= c |U|.
    std::mt19937_64 rng(47);
    for (int t = 0; t < 50; ++t) {
        auto g = random_graph(rng, 6, 14, 3);
        if (!is_boundary_expander(g, 3, 1.5).pass) continue;
        for (std::uint32_t s = 1; s < 64; ++s) {
            auto us = from_mask(s, 6);
            if (us.size() > 3) continue;
            EXPECT_GE(static_cast<double>(neighbourhood(g, us).size()), 1.5 * static_cast<double>(us.size()));
        }
    }
}

TEST(ExpanderParams, DerivedRelations) {
    auto p = ExpanderParams::from_condensation(2, 0.5, 8, 1 << 20);
    EXPECT_DOUBLE_EQ(p.delta, 0.025);
    EXPECT_DOUBLE_EQ(p.d0, 10.0);
    EXPECT_EQ(p.d, 2u);
    EXPECT_EQ(p.r, 320u);
    EXPECT_NO_THROW(p.validate());
    EXPECT_NEAR(p.lambda, 0.125, 1e-12);
    EXPECT_NEAR(p.n0, std::pow(3.0, 16.0), 1e-3);
    auto q = ExpanderParams::explicit_sizes(5, 16, 3, 4);
    EXPECT_NO_THROW(q.validate());
    EXPECT_FALSE(q.in_asymptotic_regime());
    q.d = 0;
    EXPECT_THROW(q.validate(), Error);
}
