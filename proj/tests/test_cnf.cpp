#include <gtest/gtest.h>

#include <random>

#include "hcond/cnf.hpp"
#include "hcond/dimacs.hpp"

using namespace hcond;

namespace {

Clause C(std::initializer_list<long> xs) { return Clause::from_dimacs(xs); }

Clause random_clause(std::mt19937_64& rng, Var n, std::size_t max_width) {
    std::vector<Var> vars(n);
    for (Var v = 0; v < n; ++v) vars[v] = v + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::size_t w = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(max_width, n))(rng);
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < w; ++i) lits.emplace_back(vars[i], rng() & 1);
    return Clause(lits);
}

} // namespace

TEST(Literal, NegationIsInvolution) {
    Literal a = Literal::pos(3);
    EXPECT_EQ(~~a, a);
    EXPECT_NE(~a, a);
    EXPECT_EQ((~a).var(), 3u);
    EXPECT_TRUE((~a).negative());
}

TEST(Literal, DimacsRoundTrip) {
    for (long x : {1L, -1L, 17L, -42L}) EXPECT_EQ(Literal::from_dimacs(x).to_dimacs(), x);
    EXPECT_THROW(Literal::from_dimacs(0), Error);
}

TEST(Clause, CanonicalAndStructuralEquality) {
    EXPECT_EQ(C({3, -1, 2, 3}), C({-1, 2, 3}));
    EXPECT_EQ(C({3, -1, 2}).width(), 3u);
    EXPECT_TRUE(Clause{}.empty());
    EXPECT_EQ(Clause{}.to_string(), "⊥");
}

TEST(Clause, RejectsTrivialClause) {
    try {
        C({1, -1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TrivialResult);
    }
}

TEST(Resolve, BasicRule) {
    EXPECT_EQ(resolve(C({1, 2}), C({-1, 3}), 1), C({2, 3}));
    EXPECT_EQ(resolve(C({1}), C({-1}), 1), Clause{});
}

TEST(Resolve, HomogeneousShape) {
    // C = u1 v ~u2, resolved on x = 3.
    EXPECT_EQ(resolve(C({1, -2, 3}), C({1, -2, -3}), 3), C({1, -2}));
    EXPECT_TRUE(homogeneous_pair(C({1, -2, 3}), C({1, -2, -3})));
    EXPECT_FALSE(homogeneous_pair(C({1, 2}), C({-1, 3})));
}

TEST(Resolve, Errors) {
    try {
        resolve(C({1, 2}), C({1, 3}), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PivotAbsent);
    }
    try {
        resolve(C({1, 2}), C({-1, -2}), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TrivialResolvent);
    }
    EXPECT_THROW(resolve(C({2}), C({-2}), 1), Error);
}

TEST(Subsumes, Examples) {
    EXPECT_TRUE(subsumes(C({1}), C({1, 2})));
    EXPECT_TRUE(subsumes(Clause{}, C({-4, 5})));
    EXPECT_FALSE(subsumes(C({1, 2}), C({1, -2})));
}

TEST(Weaken, Examples) {
    std::vector<Literal> y{Literal::pos(2)};
    EXPECT_EQ(weaken(C({1}), y), C({1, 2}));
    EXPECT_EQ(weaken(C({1, -3}), {}), C({1, -3}));
    std::vector<Literal> notx{Literal::neg(1)};
    try {
        weaken(C({1}), notx);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TrivialResult);
    }
}

TEST(Resolve, WidthBoundAndSoundnessExhaustive) {
    std::mt19937_64 rng(7);
    const Var n = 6;
    int checked = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        Clause a = random_clause(rng, n, 4), b = random_clause(rng, n, 4);
        Var pivot = 0;
        if (clash_count(a, b, &pivot) != 1) continue;
        Clause r = resolve(a, b, pivot);
        ASSERT_LE(r.width(), a.width() + b.width() - 2);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<bool> asg(n + 1);
            for (Var v = 1; v <= n; ++v) asg[v] = (mask >> (v - 1)) & 1;
            if (satisfies(asg, a) && satisfies(asg, b)) {
                ASSERT_TRUE(satisfies(asg, r));
            }
        }
        ++checked;
    }
    EXPECT_GT(checked, 200);
}

TEST(CnfFormula, RejectsDuplicatesAndOutOfRange) {
    CnfFormula f(3);
    EXPECT_TRUE(f.add(C({1, 2})));
    EXPECT_FALSE(f.add(C({2, 1})));
    EXPECT_EQ(f.size(), 1u);
    EXPECT_THROW(f.add(C({4})), Error);
    EXPECT_EQ(f.max_width(), 2u);
}

TEST(CnfFormula, BruteForceSatisfiability) {
    EXPECT_FALSE(is_satisfiable_bruteforce(CnfFormula(1, {C({1}), C({-1})})));
    EXPECT_TRUE(is_satisfiable_bruteforce(CnfFormula(2, {C({1, 2}), C({-1})})));
}

TEST(Dimacs, RoundTrip) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        CnfFormula f(8);
        for (int i = 0; i < 10; ++i) f.add(random_clause(rng, 8, 4));
        auto g = dimacs::parse(dimacs::to_string(f));
        EXPECT_EQ(f, g);
        EXPECT_EQ(f.clauses(), g.clauses());
    }
}

TEST(Dimacs, ParsesCommentsAndMultiLineClauses) {
    auto f = dimacs::parse("c hello\np cnf 3 2\n1 -2\n 0\n-3 0\n");
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0], C({1, -2}));
    EXPECT_EQ(f[1], C({-3}));
}

TEST(Dimacs, RejectsMalformedInput) {
    EXPECT_THROW(dimacs::parse("1 2 0\n"), Error);           // no header
    EXPECT_THROW(dimacs::parse("p cnf 2 1\n1 3 0\n"), Error); // variable out of range
    EXPECT_THROW(dimacs::parse("p cnf 2 2\n1 0\n"), Error);   // clause count mismatch
    EXPECT_THROW(dimacs::parse("p cnf 2 1\n1 2\n"), Error);   // unterminated clause
}
