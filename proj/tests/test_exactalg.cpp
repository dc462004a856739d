#include <gtest/gtest.h>

#include <random>

#include "cohomolab/exactalg.hpp"

using namespace cohomolab;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -5, int hi = 5)
{
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix M(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) M(i, j) = d(rng);
    return M;
}

Integer det(const IntMatrix& A)
{
    const std::size_t n = A.rows();
    if (n == 0) return 1;
    if (n == 1) return A(0, 0);
    Integer s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (A(0, j).is_zero()) continue;
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) cols.push_back(k);
        Integer m = det(A.select_rows(rows).select_columns(cols));
        s += (j % 2 ? -1 : 1) * A(0, j) * m;
    }
    return s;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// d_1 d_2 ... d_k = gcd of all k x k minors
std::vector<Integer> minor_gcds(const IntMatrix& A)
{
    std::vector<Integer> out;
    for (std::size_t k = 1; k <= std::min(A.rows(), A.cols()); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(A.rows(), k, 0, cur, rs);
        subsets(A.cols(), k, 0, cur, cs);
        Integer g = 0;
        for (auto& r : rs)
            for (auto& c : cs) g = gcd(g, Integer(abs(det(A.select_rows(r).select_columns(c)))));
        out.push_back(g);
    }
    return out;
}

void expect_smith_invariants(const IntMatrix& A, const SmithForm& s)
{
    EXPECT_EQ(s.U * A * s.V, s.S);
    EXPECT_EQ(abs(det(s.U)), 1);
    EXPECT_EQ(abs(det(s.V)), 1);
    EXPECT_EQ(s.U * s.Uinv, IntMatrix::identity(A.rows()));
    for (std::size_t i = 0; i < s.diag.size(); ++i) {
        EXPECT_GT(s.diag[i], 0);
        if (i + 1 < s.diag.size()) {
            EXPECT_TRUE((s.diag[i + 1] % s.diag[i]).is_zero());
        }
    }
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (i != j) {
                EXPECT_TRUE(s.S(i, j).is_zero());
            }
}

} // namespace

TEST(SmithNormalForm, DiagonalTwoThree)
{
    IntMatrix A{{2, 0}, {0, 3}};
    auto s = smith_normal_form(A);
    EXPECT_EQ(s.S, (IntMatrix{{1, 0}, {0, 6}}));
    expect_smith_invariants(A, s);
    EXPECT_EQ(minor_gcds(A), (std::vector<Integer>{1, 6}));
}

TEST(SmithNormalForm, ZeroMatrix)
{
    IntMatrix A(2, 3);
    auto s = smith_normal_form(A);
    EXPECT_EQ(s.S, IntMatrix(2, 3));
    EXPECT_EQ(s.U, IntMatrix::identity(2));
    EXPECT_EQ(s.V, IntMatrix::identity(3));
    EXPECT_EQ(s.rank, 0u);
}

TEST(SmithNormalForm, OneByOne)
{
    auto s = smith_normal_form(IntMatrix{{1}});
    EXPECT_EQ(s.S, (IntMatrix{{1}}));
}

TEST(SmithNormalForm, Deterministic)
{
    std::mt19937 rng(3);
    auto A = random_matrix(rng, 5, 6);
    auto s1 = smith_normal_form(A), s2 = smith_normal_form(A);
    EXPECT_EQ(s1.U, s2.U);
    EXPECT_EQ(s1.V, s2.V);
    EXPECT_EQ(s1.S, s2.S);
}

TEST(SmithNormalForm, RandomMatricesAgainstMinors)
{
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int it = 0; it < 200; ++it) {
        const std::size_t r = static_cast<std::size_t>(dim(rng)), c = static_cast<std::size_t>(dim(rng));
        IntMatrix A = random_matrix(rng, r, c);
        auto s = smith_normal_form(A);
        expect_smith_invariants(A, s);
        if (r <= 4 && c <= 4) {
            auto g = minor_gcds(A);
            Integer prod = 1;
            for (std::size_t k = 0; k < g.size(); ++k) {
                if (k < s.diag.size()) prod *= s.diag[k];
                EXPECT_EQ(k < s.diag.size() ? prod : Integer(0), g[k]);
            }
        }
    }
}

TEST(SmithNormalForm, LargeEntriesFallBackToBigIntegers)
{
    const Integer big = Integer(1) << 70;
    IntMatrix A(2, 2, {big, big + 1, big + 2, big * 3});
    auto s = smith_normal_form(A);
    expect_smith_invariants(A, s);
    Integer d = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    EXPECT_EQ(s.diag[0] * s.diag[1], abs(d));
}

TEST(Subquotient, ZmodTwoPlusZ)
{
    IntMatrix Z = IntMatrix::identity(2);
    IntMatrix B{{2, 0}, {0, 0}};
    auto g = subquotient(Z, B);
    EXPECT_EQ(g.free_rank, 1u);
    EXPECT_EQ(g.torsion, std::vector<Integer>{2});
    EXPECT_EQ(g.to_string(), "Z (+) Z_2");
}

TEST(Subquotient, TrivialCases)
{
    EXPECT_TRUE(subquotient(IntMatrix{{1}}, IntMatrix{{1}}).is_trivial());
    EXPECT_TRUE(subquotient(IntMatrix(0, 0), IntMatrix(0, 0)).is_trivial());
    EXPECT_EQ(subquotient(IntMatrix(0, 0), IntMatrix(0, 0)).to_string(), "0");
}

TEST(Subquotient, ContainmentViolation)
{
    IntMatrix Z{{2}};
    EXPECT_THROW(subquotient(Z, IntMatrix{{1}}), ContainmentViolation);
}

TEST(Subquotient, InvariantUnderUnimodularColumnOperations)
{
    std::mt19937 rng(99);
    for (int it = 0; it < 50; ++it) {
        IntMatrix Z = random_matrix(rng, 4, 3);
        IntMatrix C = random_matrix(rng, 3, 2, -3, 3);
        IntMatrix B = Z * C;
        auto g = subquotient(Z, B);
        // random unimodular transforms: elementary operations
        IntMatrix E = IntMatrix::identity(3);
        E(0, 1) = 2;
        E(2, 0) = -1;
        IntMatrix P{{0, 1}, {1, 0}};
        EXPECT_EQ(subquotient(Z * E, B * P), g);
        IntMatrix F = IntMatrix::identity(2);
        F(1, 0) = 3;
        EXPECT_EQ(subquotient(Z, B * F), g);
        EXPECT_EQ(subquotient(Z.select_columns({2, 0, 1}), B), g);
    }
}

TEST(Subquotient, CoordinatesOfGenerators)
{
    IntMatrix Z{{1, 0}, {0, 1}, {1, 1}};
    IntMatrix B{{2, 0}, {0, 3}, {2, 3}};
    Subquotient S(Z, B);
    EXPECT_EQ(S.group().torsion, std::vector<Integer>{6});
    auto g0 = S.generators().column(0);
    EXPECT_EQ(S.coordinates(g0), IntVector{1});
    IntVector x = B.column(0);
    EXPECT_EQ(S.coordinates(x), IntVector{0});
}

TEST(GroupHom, TimesTwoOnZ4)
{
    SubquotientPresentation src{IntMatrix{{1}}, IntMatrix{{4}}};
    GroupHom h = hom_on_subquotients(IntMatrix{{2}}, src, src);
    EXPECT_EQ(h.domain().torsion, std::vector<Integer>{4});
    // enumerate Z_4: x -> 2x
    for (int x = 0; x < 4; ++x) EXPECT_EQ(h.apply({x})[0], (2 * x) % 4);
    EXPECT_EQ(h.kernel().group().torsion, std::vector<Integer>{2});
    EXPECT_EQ(h.image().group().torsion, std::vector<Integer>{2});
    EXPECT_EQ(h.cokernel().group().torsion, std::vector<Integer>{2});
    GroupHom h2 = compose(h, h);
    EXPECT_TRUE(h2.is_zero());
}

TEST(GroupHom, IdentityAndZero)
{
    SubquotientPresentation src{IntMatrix::identity(2), IntMatrix{{3, 0}, {0, 0}}};
    GroupHom id = hom_on_subquotients(IntMatrix::identity(2), src, src);
    EXPECT_EQ(id, GroupHom::identity(id.domain()));
    EXPECT_TRUE(id.is_isomorphism());
    GroupHom z = hom_on_subquotients(IntMatrix(2, 2), src, src);
    EXPECT_TRUE(z.is_zero());
}

TEST(GroupHom, NotWellDefined)
{
    SubquotientPresentation src{IntMatrix{{1}}, IntMatrix{{4}}};
    SubquotientPresentation dst{IntMatrix{{1}}, IntMatrix{{3}}};
    EXPECT_THROW(hom_on_subquotients(IntMatrix{{1}}, src, dst), NotWellDefined);
    SubquotientPresentation free{IntMatrix{{1}}, IntMatrix(1, 0)};
    EXPECT_THROW(hom_on_subquotients(IntMatrix{{1}}, src, free), NotWellDefined);
}

TEST(GroupHom, FunctorialityOnRandomTriples)
{
    std::mt19937 rng(7);
    int checked = 0;
    for (int it = 0; it < 60; ++it) {
        // lattices with B = Z * C so containment holds; maps chosen to preserve them
        IntMatrix Z1 = random_matrix(rng, 3, 3), C1 = random_matrix(rng, 3, 2, -2, 2);
        IntMatrix f = random_matrix(rng, 3, 3, -2, 2), g = random_matrix(rng, 3, 3, -2, 2);
        SubquotientPresentation s1{Z1, Z1 * C1};
        SubquotientPresentation s2{f * Z1, f * Z1 * C1};
        SubquotientPresentation s3{g * f * Z1, g * f * Z1 * C1};
        GroupHom hf = hom_on_subquotients(f, s1, s2);
        GroupHom hg = hom_on_subquotients(g, s2, s3);
        GroupHom hgf = hom_on_subquotients(g * f, s1, s3);
        EXPECT_EQ(compose(hg, hf), hgf);
        EXPECT_EQ(hom_on_subquotients(IntMatrix::identity(3), s1, s1), GroupHom::identity(hf.domain()));
        ++checked;
    }
    EXPECT_EQ(checked, 60);
}

TEST(FPAbelianGroup, CanonicalFromCyclic)
{
    auto g = FPAbelianGroup::from_cyclic(1, {2, 3, 4, 1, 0});
    EXPECT_EQ(g.free_rank, 2u);
    EXPECT_EQ(g.torsion, (std::vector<Integer>{2, 12}));
    EXPECT_EQ(g.to_string(), "Z^2 (+) Z_2 (+) Z_12");
}

TEST(Lattice, SolveAndKernel)
{
    IntMatrix A{{1, 2, 3}, {4, 5, 6}};
    IntMatrix K = kernel_basis(A);
    EXPECT_EQ(K.cols(), 1u);
    EXPECT_TRUE((A * K).is_zero());
    IntVector x;
    ASSERT_TRUE(solve(A, {6, 15}, x));
    EXPECT_EQ(A * x, (IntVector{6, 15}));
    EXPECT_FALSE(solve(IntMatrix{{2}}, {1}, x));
}
