#include <gtest/gtest.h>

#include <random>

#include "cohomolab/cechgeom.hpp"
#include "random_models.hpp"

using namespace cohomolab;
using namespace cohomolab::testing;

namespace {

double dist1(double a, double b)
{
    const double d = mod1(a - b);
    return std::min(d, 1.0 - d);
}

ChartedSurface star_disc(const ChartedSurface& S, int v)
{
    std::vector<std::array<int, 3>> tri;
    std::vector<int> charts;
    for (int t : S.stars().at(v)) {
        tri.push_back(S.triangles()[static_cast<std::size_t>(t)]);
        charts.push_back(S.charts()[static_cast<std::size_t>(t)]);
    }
    return ChartedSurface(tri, charts);
}

} // namespace

TEST(Cover, CircleNerve)
{
    auto d = flat_circle_datum(0.25);
    EXPECT_EQ(d.cover.nerve(0).size(), 3u);
    EXPECT_EQ(d.cover.nerve(1).size(), 3u);
    EXPECT_TRUE(d.cover.nerve(2).empty());
    EXPECT_EQ(d.cover.simplices({0, 2}, 0), std::vector<Simplex>{{0}});
    EXPECT_TRUE(is_good_cover(d.cover));
}

TEST(Cover, RejectsUncoveredBase)
{
    SimplicialComplex S = sphere(1);
    SimplicialComplex arc = SimplicialComplex::from_maximal(3, {{0, 1}});
    EXPECT_THROW(Cover(S, {arc}), InvalidComplex);
}

TEST(Cover, MonopoleCoverIsGood)
{
    auto d = monopole_datum();
    EXPECT_TRUE(is_good_cover(d.cover));
    EXPECT_EQ(d.cover.nerve(2).size(), 4u);
    EXPECT_TRUE(d.cover.nerve(3).empty());
    for (auto& t : d.cover.nerve(2)) EXPECT_EQ(d.cover.simplices(t, 0).size(), 1u);
}

TEST(CDCochain, AlternatingValues)
{
    CDCochain c(1, 1);
    c.set({0, 2}, {3, 5}, 0.5);
    EXPECT_DOUBLE_EQ(c.at({2, 0}, {3, 5}), -0.5);
    EXPECT_DOUBLE_EQ(c.at({0, 2}, {5, 3}), -0.5);
    EXPECT_DOUBLE_EQ(c.at({2, 0}, {5, 3}), 0.5);
    EXPECT_DOUBLE_EQ(c.at({0, 0}, {3, 5}), 0.0);
}

TEST(CDCochain, TotalDifferentialSquaresToZero)
{
    std::mt19937 rng(11);
    for (int it = 0; it < 100; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        const int p = pick(rng, 0, 2), q = pick(rng, 0, 1);
        CDCochain c = random_cochain(rng, U, p, q);
        for (auto conv : {TotalSign::twist_d, TotalSign::twist_delta}) {
            HyperCochain dd = total_differential(U, total_differential(U, c, conv), conv);
            EXPECT_LT(dd.max_abs(), 1e-12);
        }
        EXPECT_LT(cech_delta(U, cech_delta(U, c)).max_abs(), 1e-12);
        EXPECT_LT(simplicial_d(U, simplicial_d(U, c)).max_abs(), 1e-12);
    }
}

TEST(CDCochain, DoubleComplexOfCircleCover)
{
    auto d = flat_circle_datum(0.0);
    DoubleComplex D = cech_double_complex(d.cover);
    EXPECT_TRUE(validate_double_complex(D).ok);
    FilteredComplex F = total_complex(D, Filtration::first);
    EXPECT_EQ(homology(F.complex(), 0), FPAbelianGroup(1, {}));
    EXPECT_EQ(homology(F.complex(), 1), FPAbelianGroup(1, {}));
    EXPECT_TRUE(homology(F.complex(), 2).is_trivial());
    EXPECT_TRUE(limit_vs_total(F).ok);
    EXPECT_TRUE(limit_vs_total(total_complex(D, Filtration::second)).ok);
}

TEST(Line, CircleHolonomyIsTransition)
{
    for (double c : {0.0, 0.25, 0.7, 1.3, -0.4}) {
        auto d = flat_circle_datum(c);
        EXPECT_TRUE(validate_line_cocycle(d.cover, d.line).ok);
        EXPECT_LT(dist1(holonomy_loop(d.cover, d.line, d.loop), c), 1e-12);
        EXPECT_TRUE(chern_class(d.cover, d.line).c.values.empty());
    }
}

TEST(Line, CircleLoopWithDetour)
{
    auto d = flat_circle_datum(0.25);
    // go around once, back up one edge inside the last chart, and forward again
    ChartedPath g{{0, 1, 2, 3, 4, 5, 0, 5}, {0, 0, 1, 1, 2, 2, 2, 2}, true};
    EXPECT_LT(dist1(holonomy_loop(d.cover, d.line, g), 0.25), 1e-12);
}

TEST(Line, MonopoleChernNumberOne)
{
    auto d = monopole_datum();
    auto rep = validate_line_cocycle(d.cover, d.line);
    ASSERT_TRUE(rep.ok) << rep.violations.front();
    ChernClass c = chern_class(d.cover, d.line);
    EXPECT_DOUBLE_EQ(nerve_pairing(d.cover, c.c, d.nerve_cycle), 1.0);
    ChartedSurface S = fundamental_surface(d.cover);
    const double surf = surface_pairing(d.cover, c.c, S);
    EXPECT_DOUBLE_EQ(std::fabs(surf), 1.0);
    auto F = curvature(d.cover, d.line);
    double total = 0;
    for (auto& x : S.triangles()) {
        Simplex s{x[0], x[1], x[2]};
        total += sort_with_sign(s) * F.at(s);
    }
    EXPECT_NEAR(total, surf, 1e-12);
}

TEST(Line, CurvatureEqualsChernOnRandomSurfaces)
{
    std::mt19937 rng(5);
    for (int it = 0; it < 30; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        auto L = random_line(rng, U).line;
        ASSERT_TRUE(validate_line_cocycle(U, L).ok);
        ChartedSurface S = reassign_charts(rng, U, fundamental_surface(U));
        const double chern = surface_pairing(U, chern_class(U, L).c, S);
        EXPECT_NEAR(chern, std::round(chern), 1e-9);
        auto F = curvature(U, L);
        double total = 0;
        for (auto& x : S.triangles()) {
            Simplex s{x[0], x[1], x[2]};
            total += sort_with_sign(s) * F.at(s);
        }
        EXPECT_NEAR(total, chern, 1e-9);
    }
}

TEST(Line, ChernPairingIsGaugeInvariant)
{
    auto d = monopole_datum();
    std::mt19937 rng(3);
    for (int it = 0; it < 10; ++it) {
        LineData L = gauge_transform(d.cover, d.line, random_cochain(rng, d.cover, 0, 0));
        EXPECT_TRUE(validate_line_cocycle(d.cover, L).ok);
        EXPECT_DOUBLE_EQ(nerve_pairing(d.cover, chern_class(d.cover, L).c, d.nerve_cycle), 1.0);
    }
}

TEST(Line, LoopInvariances)
{
    std::mt19937 rng(21);
    for (int it = 0; it < 40; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        auto L = random_line(rng, U).line;
        ChartedPath g = random_loop(rng, U, pick(rng, 2, 12));
        const double h = holonomy_loop(U, L, g);
        ChartedPath g2 = g;
        reassign_charts(rng, U, g2);
        EXPECT_LT(dist1(holonomy_loop(U, L, g2), h), 1e-9);
        LineData L2 = gauge_transform(U, L, random_cochain(rng, U, 0, 0));
        EXPECT_LT(dist1(holonomy_loop(U, L2, g), h), 1e-9);
        SubdividedCover sd = subdivide(U);
        EXPECT_LT(dist1(holonomy_loop(sd.cover, pullback(sd, L), subdivide(sd, g)), h), 1e-9);
    }
}

TEST(Line, PathProperties)
{
    std::mt19937 rng(8);
    for (int it = 0; it < 30; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        auto r = random_line(rng, U, false);
        // integer shifts keep h a trivialization
        r.line.rho = r.line.rho + random_integer_constants(rng, U, 1);
        ChartedPath loop = random_loop(rng, U, pick(rng, 2, 10));
        ChartedPath open = loop;
        open.closed = false;
        open.vertices.push_back(loop.vertices.front());
        EXPECT_LT(dist1(holonomy_path(U, r.line, r.h, open), holonomy_loop(U, r.line, loop)), 1e-9);

        // open path, its chart reassignment and its reverse
        ChartedPath p = open;
        p.vertices.pop_back();
        p.charts.pop_back();
        if (p.vertices.size() < 2) continue;
        const double h = holonomy_path(U, r.line, r.h, p);
        ChartedPath p2 = p;
        reassign_charts(rng, U, p2);
        EXPECT_LT(dist1(holonomy_path(U, r.line, r.h, p2), h), 1e-9);
        ChartedPath back = p;
        for (std::size_t i = p.edge_count(); i-- > 0;) {
            back.vertices.push_back(p.vertices[i]);
            back.charts.push_back(p.charts[i]);
        }
        EXPECT_LT(dist1(holonomy_path(U, r.line, r.h, back), 0.0), 1e-9);

        // additivity under concatenation
        const std::size_t cut = static_cast<std::size_t>(pick(rng, 1, static_cast<int>(p.edge_count())));
        ChartedPath a{{p.vertices.begin(), p.vertices.begin() + static_cast<std::ptrdiff_t>(cut) + 1},
                      {p.charts.begin(), p.charts.begin() + static_cast<std::ptrdiff_t>(cut)}, false};
        if (cut < p.edge_count()) {
            ChartedPath b{{p.vertices.begin() + static_cast<std::ptrdiff_t>(cut), p.vertices.end()},
                          {p.charts.begin() + static_cast<std::ptrdiff_t>(cut), p.charts.end()}, false};
            EXPECT_LT(dist1(holonomy_path(U, r.line, r.h, a) + holonomy_path(U, r.line, r.h, b), h), 1e-9);
        }
    }
}

TEST(Line, PathRejectsBadTrivialization)
{
    auto d = flat_circle_datum(0.3);
    CDCochain t(0, 0);
    ChartedPath p{{0, 1, 2, 3}, {0, 0, 1}, false};
    EXPECT_THROW(holonomy_path(d.cover, d.line, t, p), NotATrivialization);
    d.line.rho = CDCochain(1, 0);
    EXPECT_NO_THROW(holonomy_path(d.cover, d.line, t, p));
}

TEST(Line, Errors)
{
    auto d = flat_circle_datum(0.3);
    ChartedPath bad{{0, 1, 2, 3, 4, 5}, {0, 0, 0, 1, 2, 2}, true};
    EXPECT_THROW(holonomy_loop(d.cover, d.line, bad), ChartIncompatible);
    EXPECT_THROW(gauge_transform(d.cover, d.line, CDCochain(1, 0)), BidegreeMismatch);

    auto m = monopole_datum();
    LineData L = m.line;
    auto& f = L.rho.values.at({1, 2});
    f.begin()->second += 0.1;
    EXPECT_FALSE(validate_line_cocycle(m.cover, L).ok);
    EXPECT_THROW(chern_class(m.cover, L), NotACocycle);

    L = m.line;
    auto e = m.cover.simplices({0, 1}, 1).front();
    L.A.add({0}, e, 0.5);
    EXPECT_FALSE(validate_line_cocycle(m.cover, L).ok);
}

TEST(Line, CurvatureGluingMismatch)
{
    std::mt19937 rng(2);
    SimplicialComplex X = product(sphere(1), sphere(1));
    Cover U = random_ball_cover(rng, X);
    LineData L = random_line(rng, U).line;
    for (auto& t : X.simplices(2))
        if (U.charts_containing(t).size() > 1) {
            L.A.add({U.charts_containing(t).back()}, face_without(t, 0), 0.25);
            break;
        }
    EXPECT_THROW(curvature(U, L), GluingMismatch);
}

TEST(Line, RealChernOfTrivialization)
{
    auto d = monopole_datum();
    CDCochain h = scaled(d.line.rho, 0.5);
    RealChern rc = real_chern_of_trivialization(d.cover, h, 1e-9, scaled(d.line.A, 0.5));
    ASSERT_TRUE(rc.denominator.has_value());
    EXPECT_EQ(*rc.denominator, 2);
    EXPECT_DOUBLE_EQ(nerve_pairing(d.cover, rc.c, d.nerve_cycle), 0.5);
    ChartedSurface S = fundamental_surface(d.cover);
    double total = 0;
    for (auto& x : S.triangles()) {
        Simplex s{x[0], x[1], x[2]};
        total += sort_with_sign(s) * rc.curvature->at(s);
    }
    EXPECT_NEAR(total, surface_pairing(d.cover, rc.c, S), 1e-12);

    std::mt19937 rng(4);
    CDCochain shifted = h + cech_delta(d.cover, random_cochain(rng, d.cover, 0, 0));
    RealChern rc2 = real_chern_of_trivialization(d.cover, shifted);
    EXPECT_LT((rc2.c - rc.c).max_abs(), 1e-12);

    // a cover with an edge inside a triple overlap; a jump of h along it is not constant
    bool found = false;
    for (int it = 0; it < 50 && !found; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        for (auto& t : U.nerve(2)) {
            auto edges = U.simplices(t, 1);
            if (edges.empty()) continue;
            CDCochain bad(1, 0);
            bad.set({t[0], t[1]}, {edges[0][0]}, 0.3);
            EXPECT_THROW(real_chern_of_trivialization(U, bad), NotConstantCoboundary);
            found = true;
            break;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Gerbe, RandomDataAreCocycles)
{
    std::mt19937 rng(9);
    for (int it = 0; it < 20; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        auto rep = validate_gerbe_cocycle(U, random_gerbe(rng, U));
        EXPECT_TRUE(rep.ok) << (rep.violations.empty() ? "" : rep.violations.front());
        EXPECT_TRUE(validate_gerbe_cocycle(U, random_trivial_gerbe(rng, U).gerbe).ok);
    }
}

TEST(Gerbe, SingleChartIsIntegralOfB)
{
    SimplicialComplex X = sphere(2);
    Cover U(X, {X});
    std::mt19937 rng(1);
    GerbeData G;
    G.B = random_global(rng, U, 2);
    ChartedSurface S = fundamental_surface(U);
    double total = 0;
    for (auto& x : S.triangles()) total += G.B.at({0}, {x[0], x[1], x[2]});
    EXPECT_LT(dist1(holonomy_surface(U, G, S), total), 1e-12);
}

TEST(Gerbe, ClosedSurfaceInvariances)
{
    std::mt19937 rng(31);
    for (int it = 0; it < 30; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        GerbeData G = random_gerbe(rng, U);
        ChartedSurface S = reassign_charts(rng, U, fundamental_surface(U));
        const double h = holonomy_surface(U, G, S);
        for (int k = 0; k < 3; ++k)
            EXPECT_LT(dist1(holonomy_surface(U, G, reassign_charts(rng, U, S)), h), 1e-9);
        EXPECT_LT(dist1(holonomy_surface(U, G, S, 1), h), 1e-9);
        EXPECT_LT(dist1(holonomy_surface(U, G, S, 2), h), 1e-9);
        GerbeData G2 = gauge_transform(U, G, random_cochain(rng, U, 1, 0), random_cochain(rng, U, 0, 1));
        EXPECT_LT(dist1(holonomy_surface(U, G2, S), h), 1e-9);
        if (it % 3 == 0) {
            SubdividedCover sd = subdivide(U);
            EXPECT_LT(dist1(holonomy_surface(sd.cover, pullback(sd, G), subdivide(sd, S)), h), 1e-9);
        }
    }
}

TEST(Gerbe, CoboundaryHasTrivialHolonomy)
{
    std::mt19937 rng(13);
    for (int it = 0; it < 30; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        GerbeData zero;
        GerbeData G = gauge_transform(U, zero, random_cochain(rng, U, 1, 0), random_cochain(rng, U, 0, 1));
        ChartedSurface S = reassign_charts(rng, U, fundamental_surface(U));
        EXPECT_NEAR(holonomy_surface_raw(U, G, S), 0.0, 1e-9);
    }
}

TEST(Gerbe, FlatGerbeMeasuresCechClass)
{
    // rho = c on one triple overlap of the sphere cover, Lambda = B = 0
    auto d = monopole_datum();
    for (double c : {0.25, 0.6}) {
        GerbeData G;
        G.rho = scaled(chern_class(d.cover, d.line).c, c);
        ASSERT_TRUE(validate_gerbe_cocycle(d.cover, G).ok);
        ChartedSurface S = fundamental_surface(d.cover);
        const double expected = c * surface_pairing(d.cover, chern_class(d.cover, d.line).c, S);
        EXPECT_LT(dist1(holonomy_surface(d.cover, G, S), expected), 1e-12);
    }
}

TEST(Gerbe, OpenSurfaces)
{
    std::mt19937 rng(17);
    for (int it = 0; it < 30; ++it) {
        Cover U = random_ball_cover(rng, random_surface_base(rng));
        TrivialGerbe T = random_trivial_gerbe(rng, U);
        ChartedSurface S = reassign_charts(rng, U, fundamental_surface(U));
        const double closed = holonomy_surface(U, T.gerbe, S);
        EXPECT_LT(dist1(holonomy_open_surface(U, T.gerbe, T.h, T.A, S), closed), 1e-9);

        // split into two halves: additivity
        std::vector<std::array<int, 3>> t1, t2;
        std::vector<int> c1, c2;
        for (std::size_t i = 0; i < S.triangles().size(); ++i) {
            (i % 2 ? t1 : t2).push_back(S.triangles()[i]);
            (i % 2 ? c1 : c2).push_back(S.charts()[i]);
        }
        ChartedSurface A(t1, c1), B(t2, c2);
        EXPECT_FALSE(A.closed());
        const double ha = holonomy_open_surface(U, T.gerbe, T.h, T.A, A);
        const double hb = holonomy_open_surface(U, T.gerbe, T.h, T.A, B);
        EXPECT_LT(dist1(ha + hb, closed), 1e-9);
        EXPECT_LT(dist1(holonomy_open_surface(U, T.gerbe, T.h, T.A, reassign_charts(rng, U, A)), ha), 1e-9);

        const int v = S.stars().begin()->first;
        ChartedSurface disc = star_disc(S, v);
        const double hd = holonomy_open_surface(U, T.gerbe, T.h, T.A, disc);
        EXPECT_LT(dist1(holonomy_open_surface(U, T.gerbe, T.h, T.A, reassign_charts(rng, U, disc)), hd), 1e-9);
    }
}

TEST(Gerbe, Errors)
{
    std::mt19937 rng(6);
    Cover U = random_ball_cover(rng, random_surface_base(rng));
    while (U.nerve(2).empty()) U = random_ball_cover(rng, random_surface_base(rng));
    TrivialGerbe T = random_trivial_gerbe(rng, U);
    ChartedSurface S = fundamental_surface(U);
    ChartedSurface disc = star_disc(S, S.stars().begin()->first);
    EXPECT_THROW(holonomy_surface(U, T.gerbe, disc), NotClosed);
    CDCochain badA = T.A;
    for (auto& pr : U.nerve(1))
        if (!U.simplices(pr, 1).empty()) {
            badA.add({pr[0]}, U.simplices(pr, 1).front(), 0.3);
            break;
        }
    EXPECT_THROW(holonomy_open_surface(U, T.gerbe, T.h, badA, disc), NotATrivialization);
    EXPECT_THROW(gauge_transform(U, T.gerbe, T.A, T.h), BidegreeMismatch);

    std::vector<int> charts = S.charts();
    for (std::size_t t = 0; t < charts.size(); ++t) {
        auto x = S.triangles()[t];
        Simplex s{x[0], x[1], x[2]};
        sort_with_sign(s);
        for (int a = 0; a < static_cast<int>(U.size()); ++a)
            if (!U.chart(a).contains(s)) {
                charts[t] = a;
                EXPECT_THROW(holonomy_surface(U, T.gerbe, ChartedSurface(S.triangles(), charts)), ChartIncompatible);
                t = charts.size();
                break;
            }
    }
    EXPECT_THROW(ChartedSurface({{0, 1, 2}, {0, 1, 3}}, {0, 0}), InvalidComplex);
}
