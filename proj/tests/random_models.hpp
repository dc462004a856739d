#pragma once

// Random filtered and double complexes for property tests.

#include <random>

#include <deque>

#include "cohomolab/cechgeom.hpp"
#include "cohomolab/clifford.hpp"
#include "cohomolab/spectral.hpp"

namespace cohomolab::testing {

inline int pick(std::mt19937& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

inline long long nonzero(std::mt19937& rng, int m)
{
    int v = pick(rng, 1, m);
    return pick(rng, 0, 1) ? v : -v;
}

// Sum of elementary pieces (a lone generator, or e -> k f) in degrees 0..3,
// conjugated by random unimodular maps that preserve the filtration.
inline FilteredComplex random_filtered(std::mt19937& rng, int max_gens = 10, int max_len = 4)
{
    const int top = 3;
    const int len = pick(rng, 1, max_len);
    std::vector<std::vector<int>> filt(top + 1);
    struct Arrow {
        int n;
        std::size_t from, to;
        long long k;
    };
    std::vector<Arrow> arrows;
    int gens = 0;
    const int target = pick(rng, 2, max_gens);
    while (gens < target) {
        const int n = pick(rng, 0, top);
        const int p = pick(rng, 0, len);
        if (n < top && gens + 2 <= target && pick(rng, 0, 2)) {
            const int p2 = pick(rng, p, len);
            arrows.push_back({n, filt[n].size(), filt[n + 1].size(), nonzero(rng, 3)});
            filt[n].push_back(p);
            filt[n + 1].push_back(p2);
            gens += 2;
        } else {
            filt[n].push_back(p);
            ++gens;
        }
    }
    std::vector<std::size_t> ranks;
    for (auto& f : filt) ranks.push_back(f.size());
    std::vector<IntMatrix> d;
    for (int n = 0; n <= top; ++n) d.emplace_back(n < top ? ranks[n + 1] : 0, ranks[n]);
    for (auto& a : arrows) d[a.n](a.to, a.from) = a.k;

    for (int n = 0; n <= top; ++n) {
        const std::size_t r = ranks[n];
        for (int it = 0; r >= 2 && it < 4; ++it) {
            std::size_t i = pick(rng, 0, static_cast<int>(r) - 1), k = pick(rng, 0, static_cast<int>(r) - 1);
            if (i == k || filt[n][i] < filt[n][k]) continue;
            const long long c = nonzero(rng, 2);
            IntMatrix T = IntMatrix::identity(r), Ti = IntMatrix::identity(r);
            T(i, k) = c;
            Ti(i, k) = -c;
            d[n] = d[n] * Ti;
            if (n > 0) d[n - 1] = T * d[n - 1];
        }
    }
    return FilteredComplex(ChainComplex(true, 0, ranks, d), filt, len);
}

// Sum of elementary first-quadrant pieces (points, horizontal and vertical
// arrows, anticommuting squares) with random unimodular base changes.
inline DoubleComplex random_double(std::mt19937& rng, int span = 4, int max_rank = 3)
{
    DoubleComplex D;
    auto room = [&](int p, int q) { return p < span && q < span && D.rank(p, q) < static_cast<std::size_t>(max_rank); };
    struct Edge {
        Bidegree from, to;
        std::size_t i, j;
        long long k;
        bool horizontal;
    };
    std::vector<Edge> edges;
    auto add = [&](int p, int q) { return D.ranks[{p, q}]++; };
    const int pieces = pick(rng, 1, 7);
    for (int it = 0; it < pieces; ++it) {
        const int p = pick(rng, 0, span - 1), q = pick(rng, 0, span - 1);
        switch (pick(rng, 0, 3)) {
        case 0:
            if (room(p, q)) add(p, q);
            break;
        case 1:
            if (room(p, q) && room(p + 1, q)) {
                auto a = add(p, q), b = add(p + 1, q);
                edges.push_back({{p, q}, {p + 1, q}, a, b, nonzero(rng, 3), true});
            }
            break;
        case 2:
            if (room(p, q) && room(p, q + 1)) {
                auto a = add(p, q), b = add(p, q + 1);
                edges.push_back({{p, q}, {p, q + 1}, a, b, nonzero(rng, 3), false});
            }
            break;
        default:
            if (room(p, q) && room(p + 1, q) && room(p, q + 1) && room(p + 1, q + 1)) {
                auto x = add(p, q), y1 = add(p + 1, q), y2 = add(p, q + 1), z = add(p + 1, q + 1);
                const long long a = nonzero(rng, 2), c = nonzero(rng, 2), k = nonzero(rng, 2);
                edges.push_back({{p, q}, {p + 1, q}, x, y1, a, true});
                edges.push_back({{p, q}, {p, q + 1}, x, y2, c, false});
                edges.push_back({{p + 1, q}, {p + 1, q + 1}, y1, z, c * k, false});
                edges.push_back({{p, q + 1}, {p + 1, q + 1}, y2, z, -a * k, true});
            }
        }
    }
    for (auto& [k, r] : D.ranks) {
        const auto [p, q] = k;
        D.d1[k] = IntMatrix(D.rank(p + 1, q), r);
        D.d2[k] = IntMatrix(D.rank(p, q + 1), r);
    }
    for (auto& e : edges) (e.horizontal ? D.d1 : D.d2)[e.from](e.j, e.i) = e.k;

    for (auto& [k, r] : D.ranks) {
        const auto [p, q] = k;
        for (int it = 0; r >= 2 && it < 3; ++it) {
            std::size_t i = pick(rng, 0, static_cast<int>(r) - 1), j = pick(rng, 0, static_cast<int>(r) - 1);
            if (i == j) continue;
            const long long c = nonzero(rng, 2);
            IntMatrix T = IntMatrix::identity(r), Ti = IntMatrix::identity(r);
            T(i, j) = c;
            Ti(i, j) = -c;
            D.d1[k] = D.d1[k] * Ti;
            D.d2[k] = D.d2[k] * Ti;
            if (D.d1.count({p - 1, q})) D.d1[{p - 1, q}] = T * D.d1[{p - 1, q}];
            if (D.d2.count({p, q - 1})) D.d2[{p, q - 1}] = T * D.d2[{p, q - 1}];
        }
    }
    return D;
}

inline double uniform(std::mt19937& rng, double a = -1.0, double b = 1.0)
{
    return std::uniform_real_distribution<double>(a, b)(rng);
}

// Graph distances from v in the 1-skeleton.
inline std::vector<int> distances(const SimplicialComplex& K, int v)
{
    std::vector<std::vector<int>> adj(K.vertex_count());
    for (auto& e : K.simplices(1)) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    std::vector<int> d(K.vertex_count(), -1);
    std::deque<int> todo{v};
    d[v] = 0;
    while (!todo.empty()) {
        int x = todo.front();
        todo.pop_front();
        for (int y : adj[x])
            if (d[y] < 0) {
                d[y] = d[x] + 1;
                todo.push_back(y);
            }
    }
    return d;
}

// Cover by full subcomplexes on graph balls of radius 1 or 2.
inline Cover random_ball_cover(std::mt19937& rng, const SimplicialComplex& X)
{
    std::vector<SimplicialComplex> charts;
    auto covered = [&](const Simplex& s) {
        for (auto& c : charts)
            if (c.contains(s)) return true;
        return false;
    };
    auto all = X.all_simplices();
    std::shuffle(all.begin(), all.end(), rng);
    for (auto& s : all) {
        if (covered(s)) continue;
        const int centre = s[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(s.size()) - 1))];
        const int r = pick(rng, 1, 2);
        auto d = distances(X, centre);
        std::vector<Simplex> keep;
        for (auto& t : X.all_simplices()) {
            bool in = true;
            for (int v : t) in = in && d[v] >= 0 && d[v] <= r;
            if (in) keep.push_back(t);
        }
        charts.emplace_back(X.vertex_count(), keep);
    }
    return Cover(X, charts);
}

// Random real (p,q) cochain supported on the intersections.
inline CDCochain random_cochain(std::mt19937& rng, const Cover& U, int p, int q)
{
    CDCochain c(p, q);
    for (auto& t : U.nerve(static_cast<std::size_t>(p)))
        for (auto& s : U.simplices(t, q)) c.set(t, s, uniform(rng));
    return c;
}

// Cech p-cochain, constant integer on each intersection.
inline CDCochain random_integer_constants(std::mt19937& rng, const Cover& U, int p)
{
    CDCochain c(p, 0);
    for (auto& t : U.nerve(static_cast<std::size_t>(p))) {
        const double k = pick(rng, -2, 2);
        for (auto& v : U.simplices(t, 0)) c.set(t, v, k);
    }
    return c;
}

// Global q-cochain placed on every chart.
inline CDCochain random_global(std::mt19937& rng, const Cover& U, int q)
{
    CDCochain c(0, q);
    for (auto& s : U.base().simplices(q)) {
        const double v = uniform(rng);
        for (int a : U.charts_containing(s)) c.set({a}, s, v);
    }
    return c;
}

// Line datum rho = delta h + n with a connection plus a random global 1-form.
// Returns h as a trivialization when n = 0.
struct RandomLine {
    LineData line;
    CDCochain h;
};

inline RandomLine random_line(std::mt19937& rng, const Cover& U, bool integer_part = true)
{
    RandomLine r;
    r.h = random_cochain(rng, U, 0, 0);
    r.line.rho = cech_delta(U, r.h);
    if (integer_part) r.line.rho = r.line.rho + random_integer_constants(rng, U, 1);
    r.line.A = connection_from_rho(U, r.line.rho) + random_global(rng, U, 1);
    return r;
}

inline GerbeData random_gerbe(std::mt19937& rng, const Cover& U)
{
    CDCochain rho = cech_delta(U, random_cochain(rng, U, 1, 0)) + random_integer_constants(rng, U, 2);
    GerbeData G = gerbe_from_rho(U, rho);
    G.B = G.B + random_global(rng, U, 2);
    return G;
}

// Trivial gerbe (delta h + n, d h + delta a, beta + d a) with trivialization (h, -a).
struct TrivialGerbe {
    GerbeData gerbe;
    CDCochain h, A;
};

inline TrivialGerbe random_trivial_gerbe(std::mt19937& rng, const Cover& U)
{
    TrivialGerbe t;
    t.h = random_cochain(rng, U, 1, 0);
    CDCochain a = random_cochain(rng, U, 0, 1);
    GerbeData zero;
    zero.rho = random_integer_constants(rng, U, 2);
    zero.B = random_global(rng, U, 2);
    t.gerbe = gauge_transform(U, zero, t.h, a);
    t.A = scaled(a, -1.0);
    return t;
}

inline int random_chart(std::mt19937& rng, const Cover& U, const Simplex& s)
{
    auto cs = U.charts_containing(s);
    return cs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(cs.size()) - 1))];
}

// Random walk of the given length closed up along a shortest path.
inline ChartedPath random_loop(std::mt19937& rng, const Cover& U, int length)
{
    const SimplicialComplex& X = U.base();
    std::vector<std::vector<int>> adj(X.vertex_count());
    for (auto& e : X.simplices(1)) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    ChartedPath g;
    int v = X.simplices(0)[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(X.count(0)) - 1))][0];
    const int start = v;
    g.vertices.push_back(v);
    for (int i = 0; i < length; ++i) {
        v = adj[v][static_cast<std::size_t>(pick(rng, 0, static_cast<int>(adj[v].size()) - 1))];
        g.vertices.push_back(v);
    }
    auto d = distances(X, start);
    while (v != start) {
        for (int y : adj[v])
            if (d[y] == d[v] - 1) {
                v = y;
                break;
            }
        g.vertices.push_back(v);
    }
    g.vertices.pop_back();
    if (g.vertices.size() < 2) g.vertices = {start, adj[start][0]};
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        Simplex e{g.tail(i), g.head(i)};
        sort_with_sign(e);
        g.charts.push_back(random_chart(rng, U, e));
    }
    return g;
}

inline void reassign_charts(std::mt19937& rng, const Cover& U, ChartedPath& g)
{
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        Simplex e{g.tail(i), g.head(i)};
        sort_with_sign(e);
        g.charts[i] = random_chart(rng, U, e);
    }
}

inline ChartedSurface reassign_charts(std::mt19937& rng, const Cover& U, const ChartedSurface& S)
{
    std::vector<int> charts;
    for (auto& x : S.triangles()) {
        Simplex s{x[0], x[1], x[2]};
        sort_with_sign(s);
        charts.push_back(random_chart(rng, U, s));
    }
    return ChartedSurface(S.triangles(), charts);
}

// A few bases: subdivided sphere and the product torus.
inline SimplicialComplex random_surface_base(std::mt19937& rng)
{
    if (pick(rng, 0, 1)) return product(sphere(1), sphere(1));
    return subdivide(Cover(sphere(2), {sphere(2)})).cover.base();
}


// ---------------------------------------------------------------------------
// Clifford algebra samples.

inline Signature random_signature(std::mt19937& rng, std::size_t n)
{
    std::vector<int> d(n);
    for (auto& x : d) x = pick(rng, 0, 1) ? 1 : -1;
    return Signature(d);
}

inline Rational random_rational(std::mt19937& rng, int m = 5)
{
    return Rational(pick(rng, -m, m), pick(rng, 1, 3));
}

inline CliffordElement random_element(std::mt19937& rng, const Signature& sig, int max_terms = 6)
{
    CliffordElement x(sig);
    int terms = pick(rng, 1, max_terms);
    Blade top = (Blade(1) << sig.n()) - 1;
    for (int i = 0; i < terms; ++i) x.add(Blade(pick(rng, 0, int(top))), random_rational(rng));
    return x;
}

inline std::vector<Rational> random_vector(std::mt19937& rng, const Signature& sig)
{
    std::vector<Rational> v(sig.n());
    for (auto& x : v) x = random_rational(rng);
    return v;
}

// Exact unit vector in a random coordinate plane: a circle or hyperbola point
// with rational parameter t.
inline std::vector<Rational> random_unit_vector(std::mt19937& rng, const Signature& sig)
{
    std::vector<Rational> v(sig.n(), Rational(0));
    std::size_t i = std::size_t(pick(rng, 0, int(sig.n()) - 1));
    if (sig.n() == 1 || pick(rng, 0, 4) == 0) {
        v[i] = pick(rng, 0, 1) ? 1 : -1;
        return v;
    }
    std::size_t j = i;
    while (j == i) j = std::size_t(pick(rng, 0, int(sig.n()) - 1));
    Rational t(pick(rng, -7, 7), pick(rng, 2, 9));
    while (t * t == 1) t = Rational(pick(rng, -7, 7), pick(rng, 2, 9));
    if (sig.diag()[i] == sig.diag()[j]) {
        v[i] = (1 - t * t) / (1 + t * t);
        v[j] = 2 * t / (1 + t * t);
    } else {
        v[i] = (1 + t * t) / (1 - t * t);
        v[j] = 2 * t / (1 - t * t);
    }
    return v;
}

inline PinElement<Rational> random_pin(std::mt19937& rng, const Signature& sig, int max_len = 3)
{
    std::vector<std::vector<Rational>> f;
    int len = pick(rng, 1, max_len);
    for (int k = 0; k < len; ++k) f.push_back(random_unit_vector(rng, sig));
    return PinElement<Rational>(sig, f, pick(rng, 0, 1) ? 1 : -1);
}

} // namespace cohomolab::testing
