#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace arsys;

TEST(Subsystems, CoordinatePlane) {
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    const auto s = restrict(chi, r, {{1, 0, 0}, {0, 0, 1}});
    EXPECT_EQ(s.E_H, (std::vector<IntVector>{{0, 0, 1}, {1, 0, 0}}));
    EXPECT_EQ(s.positive_in_H.size(), 2u);
    EXPECT_FALSE(s.restricted_diagram.has_edge(0, 1));
    EXPECT_TRUE(s.lattice_saturated);
}

TEST(Subsystems, NonCoordinatePlane) {
    // Only e1+e2 and e2+e3 are positive roots in this plane; e1+2e2+e3 is not a
    // root, so the restriction is of type A1 x A1.
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    const auto s = restrict(chi, r, {{1, 1, 0}, {0, 1, 1}});
    EXPECT_EQ(s.positive_in_H, (std::vector<IntVector>{{0, 1, 1}, {1, 1, 0}}));
    EXPECT_EQ(s.E_H, (std::vector<IntVector>{{0, 1, 1}, {1, 1, 0}}));
    EXPECT_FALSE(r.contains_root({1, 2, 1}));
    EXPECT_TRUE(s.restricted.finite());
    EXPECT_EQ(s.restricted.roots.size(), 4u);
    EXPECT_FALSE(s.restricted_diagram.has_edge(0, 1));
}

TEST(Subsystems, PermutedSpanGivesTheSameBasis) {
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    const auto a = restrict(chi, r, {{1, 1, 0}, {0, 0, 1}});
    const auto b = restrict(chi, r, {{0, 0, 1}, {1, 1, 0}});
    const auto c = restrict(chi, r, {{1, 1, 1}, {0, 0, 1}});
    EXPECT_EQ(a.E_H, b.E_H);
    EXPECT_EQ(a.E_H, c.E_H);
}

TEST(Subsystems, FullSpanReturnsTheWholeSystem) {
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    const auto s = restrict(chi, r, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    EXPECT_EQ(s.E_H, (std::vector<IntVector>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
    EXPECT_EQ(s.roots_in_H, r.roots);
}

TEST(Subsystems, Hyperplane) {
    // x1 = x2 contains e3, e1+e2 and e1+e2+e3: an A2 subsystem.
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    const auto s = restrict_to_normals(chi, r, {{1, -1, 0}});
    EXPECT_EQ(s.dimension(), 2);
    EXPECT_EQ(s.roots_in_H.size(), 6u);
    EXPECT_EQ(s.E_H, (std::vector<IntVector>{{0, 0, 1}, {1, 1, 0}}));
    EXPECT_TRUE(s.restricted_diagram.has_edge(0, 1));
}

TEST(Subsystems, InputErrors) {
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    EXPECT_THROW(restrict(chi, r, {{2, 0, 0}}), InputError);
    EXPECT_THROW(restrict(chi, r, {{1, 0, 0}, {1, 0, 0}}), InputError);
    EXPECT_THROW(restrict(chi, r, {}), InputError);
}

TEST(Subsystems, FunctionalBasisAgreesWithIndecomposables) {
    for (const auto& in : fixtures::instances(2)) {
        SCOPED_TRACE(in.name);
        const auto r = explore(in.chi);
        for (std::size_t a = 0; a < r.roots.size(); ++a)
            for (std::size_t b = a + 1; b < r.roots.size(); ++b) {
                const std::vector<IntVector> span{r.roots[a], r.roots[b]};
                if (rank(span) < 2) continue;
                const auto s = restrict(in.chi, r, span);
                EXPECT_EQ(functional_basis(r, span), s.E_H);
            }
    }
}

TEST(Subsystems, SandwichAndUniquenessOnAllRootPairs) {
    std::size_t pairs = 0;
    for (const auto& in : fixtures::instances(2)) {
        SCOPED_TRACE(in.name);
        const auto r = explore(in.chi);
        for (std::size_t a = 0; a < r.roots.size(); ++a)
            for (std::size_t b = a + 1; b < r.roots.size(); ++b) {
                const std::vector<IntVector> span{r.roots[a], r.roots[b]};
                if (rank(span) < 2) continue;
                const auto s = restrict(in.chi, r, span);
                ++pairs;
                ASSERT_EQ(s.dimension(), 2);
                // E_H is a basis of span(Delta cap H) ...
                EXPECT_EQ(rank(s.E_H), 2);
                // ... every positive root in H is a natural combination of it ...
                for (const auto& beta : s.positive_in_H) {
                    const auto c = coordinates_in_span(s.E_H, beta);
                    ASSERT_TRUE(c);
                    EXPECT_EQ(c->denominator, 1);
                    for (auto x : c->numerators) EXPECT_GE(x, 0);
                }
                // ... and E_H is contained in the positive roots, so it is unique:
                // any other such basis would have to consist of indecomposables.
                for (const auto& e : s.E_H) EXPECT_TRUE(std::binary_search(s.positive_in_H.begin(), s.positive_in_H.end(), e));
                EXPECT_EQ(indecomposable_roots(s.positive_in_H), s.E_H);
            }
    }
    EXPECT_GT(pairs, 1000u);
}

TEST(Subsystems, LinearIndependenceCriterion) {
    const auto chi = fixtures::a3_generic();
    const auto r = explore(chi);
    EXPECT_TRUE(check_lbasis(r, {{1, 0, 0}, {0, 1, 0}}));
    EXPECT_TRUE(check_lbasis(r, {{1, 1, 0}, {0, 0, 1}}));
    // e1 + e2 - e2 = e1 is a root
    EXPECT_FALSE(check_lbasis(r, {{1, 1, 0}, {0, 1, 0}}));
    EXPECT_TRUE(check_lbasis(r, {{1, 1, 1}}));
    EXPECT_THROW(check_lbasis(r, {{1, 0, 0}, {-1, 0, 0}}), InputError);
}

TEST(Subsystems, CriterionAgreesWithHalfSpaceOnTheCatalog) {
    for (const auto& in : fixtures::instances(2)) {
        SCOPED_TRACE(in.name);
        const auto r = explore(in.chi);
        for (std::size_t a = 0; a < r.roots.size(); ++a)
            for (std::size_t b = 0; b < r.roots.size(); ++b) {
                if (a == b) continue;
                const std::vector<IntVector> f{r.roots[a], r.roots[b]};
                if (rank(f) < 2) continue;
                const auto rep = lbasis_report(r, f);
                EXPECT_EQ(rep.criterion, rep.half_space) << to_string(f[0]) << " " << to_string(f[1]);
            }
    }
}
