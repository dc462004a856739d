#include <gtest/gtest.h>

#include "cohomolab/surfaces.hpp"

using namespace cohomolab;

namespace {

FPAbelianGroup G(std::size_t r, std::vector<Integer> t = {}) { return FPAbelianGroup(r, std::move(t)); }

void expect_surface_condition(const SimplicialComplex& K, bool closed)
{
    std::map<Simplex, int> deg;
    for (auto& t : K.simplices(2))
        for (std::size_t j = 0; j < 3; ++j) ++deg[face_without(t, j)];
    int boundary = 0;
    for (auto& e : K.simplices(1)) {
        int d = deg[e];
        EXPECT_TRUE(d == 1 || d == 2);
        if (d == 1) ++boundary;
    }
    EXPECT_EQ(boundary == 0, closed);
}

// Matrix of a Z_2 hom in the given bases (columns are coordinate vectors).
IntMatrix in_bases_mod2(const IntMatrix& M, const IntMatrix& src_basis, const IntMatrix& dst_basis)
{
    // solve dst_basis * X = M * src_basis mod 2 by brute force over 2x2 choices
    IntMatrix rhs = M * src_basis;
    IntMatrix X(dst_basis.cols(), rhs.cols());
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
        bool found = false;
        for (unsigned mask = 0; mask < (1u << dst_basis.cols()) && !found; ++mask) {
            bool ok = true;
            for (std::size_t i = 0; i < rhs.rows() && ok; ++i) {
                Integer s = 0;
                for (std::size_t k = 0; k < dst_basis.cols(); ++k)
                    if (mask & (1u << k)) s += dst_basis(i, k);
                ok = mod_nonneg(s - rhs(i, j), 2).is_zero();
            }
            if (ok) {
                found = true;
                for (std::size_t k = 0; k < dst_basis.cols(); ++k) X(k, j) = (mask >> k) & 1u;
            }
        }
        EXPECT_TRUE(found);
    }
    return X;
}

} // namespace

TEST(Subdivision, ChainMapAndHomology)
{
    PolygonComplex P = polygon_complex(surface_word(SurfaceKind::klein, 0));
    EXPECT_TRUE(validate_complex(P.complex.chain_complex()));
    EXPECT_EQ(homology(P.complex.chain_complex(), 1), G(1, {2}));
    Subdivision s = barycentric_subdivision(P.complex);
    EXPECT_TRUE(check_chain_map(s.chain_map));
    auto h = induced_map(s.chain_map, 1);
    EXPECT_TRUE(h.is_isomorphism());
    Subdivision s2 = barycentric_subdivision(s.complex);
    EXPECT_TRUE(check_chain_map(s2.chain_map));
}

TEST(Catalog, Torus)
{
    auto M = surface_model(SurfaceKind::orientable, 1);
    expect_surface_condition(M.complex, true);
    EXPECT_EQ(simplicial_homology(M.complex, 1), G(2));
    EXPECT_EQ(simplicial_homology(M.complex, 2), G(1));
    EXPECT_EQ(euler_characteristic(chain_complex_of(M.complex)), 0);
}

TEST(Catalog, KleinBottle)
{
    auto M = surface_model(SurfaceKind::klein);
    expect_surface_condition(M.complex, true);
    EXPECT_EQ(simplicial_homology(M.complex, 1), G(1, {2}));
    EXPECT_EQ(simplicial_homology(M.complex, 1).to_string(), "Z (+) Z_2");
    EXPECT_TRUE(simplicial_homology(M.complex, 2).is_trivial());
}

TEST(Catalog, ProjectivePlane)
{
    auto M = surface_model(SurfaceKind::rp2);
    expect_surface_condition(M.complex, true);
    EXPECT_EQ(simplicial_homology(M.complex, 1), G(0, {2}));
    EXPECT_EQ(simplicial_cohomology(M.complex, 2), G(0, {2}));
}

TEST(Catalog, CrosscapFamilies)
{
    for (int g = 1; g <= 2; ++g) {
        auto N1 = surface_model(SurfaceKind::crosscap1, g);
        EXPECT_EQ(simplicial_homology(N1.complex, 1), G(static_cast<std::size_t>(2 * g), {2}));
        auto N2 = surface_model(SurfaceKind::crosscap2, g);
        EXPECT_EQ(simplicial_homology(N2.complex, 1), G(static_cast<std::size_t>(2 * g + 1), {2}));
        auto S = surface_model(SurfaceKind::orientable, g + 1);
        EXPECT_EQ(simplicial_homology(S.complex, 1), G(static_cast<std::size_t>(2 * g + 2)));
    }
}

TEST(Catalog, BoundedSurfaces)
{
    auto M = surface_model(SurfaceKind::moebius);
    expect_surface_condition(M.complex, false);
    EXPECT_EQ(simplicial_homology(M.complex, 1), G(1));
    auto C = surface_model(SurfaceKind::cylinder);
    expect_surface_condition(C.complex, false);
    EXPECT_EQ(simplicial_homology(C.complex, 1), G(1));
    // the boundary of the band wraps twice around its core
    HomologyGroup H(chain_complex_of(M.complex), 1, Coefficients::integers);
    auto core = H.coordinates(path_chain(M.complex, M.cycle("core").vertices));
    auto bd = H.coordinates(path_chain(M.complex, M.cycle("boundary").vertices));
    EXPECT_EQ(abs(bd[0]), 2 * abs(core[0]));
}

TEST(Catalog, UnknownKind)
{
    EXPECT_THROW(surface_kind_from_string("mobius"), UnsupportedKind);
    EXPECT_THROW(surface_model(SurfaceKind::orientable, -1), UnsupportedKind);
}

TEST(Catalog, UniversalCoefficientsAndEuler)
{
    std::vector<SurfaceModel> cat = {surface_model(SurfaceKind::sphere),        surface_model(SurfaceKind::orientable, 1),
                                     surface_model(SurfaceKind::rp2),           surface_model(SurfaceKind::klein),
                                     surface_model(SurfaceKind::crosscap1, 1), surface_model(SurfaceKind::moebius)};
    for (auto& M : cat) {
        auto C = chain_complex_of(M.complex);
        auto hz = homology_all(C, Coefficients::integers);
        auto h2 = homology_all(C, Coefficients::mod2);
        auto hq = homology_all(C, Coefficients::rationals);
        long long alt = 0;
        for (int n = 0; n <= 2; ++n) {
            std::size_t expected = hz[n].free_rank + count_even_torsion(hz[n]) + (n ? count_even_torsion(hz[n - 1]) : 0);
            EXPECT_EQ(h2[n].torsion.size(), expected) << to_string(M.kind) << " n=" << n;
            EXPECT_EQ(h2[n].free_rank, 0u);
            alt += (n % 2 ? -1 : 1) * static_cast<long long>(hq[n].free_rank);
        }
        EXPECT_EQ(alt, euler_characteristic(C));
    }
}

TEST(DoubleCover, RejectsOrientable)
{
    EXPECT_THROW(double_cover(surface_model(SurfaceKind::orientable, 1)), AlreadyOrientable);
    EXPECT_THROW(double_cover(surface_model(SurfaceKind::sphere)), AlreadyOrientable);
}

TEST(DoubleCover, ProjectivePlane)
{
    auto base = surface_model(SurfaceKind::rp2);
    auto dc = double_cover(base);
    EXPECT_EQ(simplicial_homology(dc.cover.complex, 2), G(1));
    EXPECT_TRUE(simplicial_homology(dc.cover.complex, 1).is_trivial());
    auto pi = chain_map_of(dc.projection);
    auto h = induced_map(pi, 1, Coefficients::mod2);
    EXPECT_TRUE(h.is_zero());
    EXPECT_EQ(h.codomain(), G(0, {2}));
    // pullback on H^1(-, Z_2) is zero: its kernel is all of Z_2
    auto hd = induced_map(HomologyGroup(cochain_dual(pi.target), 1, Coefficients::mod2),
                          HomologyGroup(cochain_dual(pi.source), 1, Coefficients::mod2),
                          pi.component(1).transpose());
    EXPECT_EQ(hd.kernel().group(), G(0, {2}));
}

TEST(DoubleCover, DeckInvolution)
{
    for (auto kind : {SurfaceKind::rp2, SurfaceKind::klein, SurfaceKind::moebius}) {
        auto dc = double_cover(surface_model(kind));
        for (std::size_t v = 0; v < dc.cover.complex.vertex_count(); ++v) {
            EXPECT_NE(dc.involution(static_cast<int>(v)), static_cast<int>(v));
            EXPECT_EQ(dc.involution(dc.involution(static_cast<int>(v))), static_cast<int>(v));
            EXPECT_EQ(dc.projection(dc.involution(static_cast<int>(v))), dc.projection(static_cast<int>(v)));
        }
        // top Z_2 homology of the cover is one-dimensional when closed
        if (kind != SurfaceKind::moebius)
            EXPECT_EQ(simplicial_homology(dc.cover.complex, 2, Coefficients::mod2).torsion.size(), 1u);
        auto pi = chain_map_of(dc.projection);
        auto tau = chain_map_of(dc.involution);
        auto h = induced_map(pi, 1, Coefficients::mod2);
        auto ht = induced_map(tau, 1, Coefficients::mod2);
        EXPECT_EQ(compose(h, ht), h);
        // image of pi_* has index 2
        auto im = h.image().group();
        EXPECT_EQ(h.codomain().torsion.size(), im.torsion.size() + 1) << to_string(kind);
    }
}

TEST(DoubleCover, TorusOverKlein)
{
    auto base = surface_model(SurfaceKind::klein);
    auto dc = double_cover(base);
    EXPECT_EQ(dc.cover.kind, SurfaceKind::orientable);
    const auto& T = dc.cover.complex;
    const auto& K = base.complex;
    EXPECT_EQ(simplicial_homology(T, 1), G(2));
    // b does not lift to a closed loop, a does
    const auto& lb = dc.cover.marked_cycles[1];
    const auto& la = dc.cover.marked_cycles[0];
    EXPECT_EQ(lb.name, "lift(b^2)");
    EXPECT_EQ(la.name, "lift(a)");

    auto pi = chain_map_of(dc.projection);
    HomologyGroup HT(pi.source, 1, Coefficients::mod2), HK(pi.target, 1, Coefficients::mod2);
    auto h = induced_map(HT, HK, pi.component(1));
    IntMatrix cover_basis = IntMatrix::from_columns(2, {HT.coordinates(path_chain(T, lb.vertices)),
                                                        HT.coordinates(path_chain(T, la.vertices))});
    IntMatrix base_basis = IntMatrix::from_columns(2, {HK.coordinates(path_chain(K, base.cycle("b").vertices)),
                                                       HK.coordinates(path_chain(K, base.cycle("a").vertices))});
    EXPECT_EQ(in_bases_mod2(h.matrix(), cover_basis, base_basis), (IntMatrix{{0, 0}, {0, 1}}));

    // over Z: lift(b^2) maps to 2b and lift(a) to a
    HomologyGroup HKz(pi.target, 1, Coefficients::integers);
    IntVector b = path_chain(K, base.cycle("b").vertices), a = path_chain(K, base.cycle("a").vertices);
    IntVector twob = b;
    for (auto& x : twob) x *= 2;
    EXPECT_EQ(HKz.coordinates(pi.component(1) * path_chain(T, lb.vertices)), HKz.coordinates(twob));
    EXPECT_EQ(HKz.coordinates(pi.component(1) * path_chain(T, la.vertices)), HKz.coordinates(a));
    auto hz = induced_map(pi, 1, Coefficients::integers);
    EXPECT_EQ(hz.cokernel().group(), G(0, {2}));
}

TEST(DoubleCover, CrosscapCoverGenus)
{
    auto dc = double_cover(surface_model(SurfaceKind::crosscap1, 1));
    EXPECT_EQ(simplicial_homology(dc.cover.complex, 1), G(4));
    auto h = induced_map(chain_map_of(dc.projection), 1, Coefficients::mod2);
    EXPECT_EQ(h.image().group().torsion.size() + 1, h.codomain().torsion.size());
}
