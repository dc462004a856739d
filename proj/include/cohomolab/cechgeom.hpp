#pragma once

// Discrete Cech-de Rham data over a simplicial base: covers, real Cech
// cochains of simplicial cochains, line bundle and gerbe hypercocycles,
// Chern classes, curvature and holonomy of loops, paths and surfaces.
//
// S^1-valued functions are stored as logarithms rho with g = exp(2 pi i rho),
// so every holonomy lives in R/Z. Simplicial d uses the Stokes sign (-1)^j
// for the face opposite the j-th vertex (0-based): (df)(a,b) = f(b) - f(a).
// Relations: line bundles delta A = d rho; gerbes delta Lambda = d rho3 and
// delta B = d Lambda, with (delta c)_{a0..ap+1} = sum_j (-1)^j c_{..^aj..}.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace cohomolab {

inline double mod1(double x)
{
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

inline bool close_mod1(double a, double b, double tol = 1e-9)
{
    const double d = mod1(a - b);
    return d < tol || d > 1.0 - tol;
}

inline bool near_integer(double x, double tol) { return std::fabs(x - std::round(x)) <= tol; }

// Sorts v in place and returns the sign of the sorting permutation (0 on repeats).
inline int sort_with_sign(std::vector<int>& v)
{
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] == v[i]) return 0;
    return sign;
}

inline std::string tuple_to_string(const std::vector<int>& t) { return simplex_to_string(t); }

// ---------------------------------------------------------------------------
// Covers
// ---------------------------------------------------------------------------

class Cover {
public:
    Cover() = default;
    Cover(SimplicialComplex base, std::vector<SimplicialComplex> charts, std::vector<std::string> names = {},
          std::size_t max_tuple = 4)
        : base_(std::move(base)), charts_(std::move(charts)), names_(std::move(names))
    {
        if (names_.empty())
            for (std::size_t i = 0; i < charts_.size(); ++i) names_.push_back(std::to_string(i));
        if (names_.size() != charts_.size()) throw DimensionMismatch("one name per chart expected");
        for (std::size_t i = 0; i < charts_.size(); ++i) {
            if (charts_[i].vertex_count() != base_.vertex_count())
                throw DimensionMismatch("chart " + names_[i] + " has a different vertex range");
            for (auto& s : charts_[i].all_simplices())
                if (!base_.contains(s))
                    throw NotASubcomplex("chart " + names_[i] + " contains " + simplex_to_string(s) + " outside the base");
        }
        for (auto& s : base_.all_simplices()) {
            bool hit = false;
            for (auto& c : charts_) hit = hit || c.contains(s);
            if (!hit) throw InvalidComplex("simplex " + simplex_to_string(s) + " is not covered by any chart");
        }
        // nerve: tuples with a common vertex
        std::vector<int> cur;
        build_nerve(cur, 0, std::min(max_tuple, charts_.size()));
        std::sort(nerve_.begin(), nerve_.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
    }

    const SimplicialComplex& base() const { return base_; }
    std::size_t size() const { return charts_.size(); }
    const SimplicialComplex& chart(int a) const { return charts_.at(static_cast<std::size_t>(a)); }
    const std::vector<SimplicialComplex>& charts() const { return charts_; }
    const std::vector<std::string>& names() const { return names_; }
    // Sorted chart tuples with nonempty intersection, shortest first.
    const std::vector<std::vector<int>>& nerve() const { return nerve_; }

    std::vector<std::vector<int>> nerve(std::size_t p) const
    {
        std::vector<std::vector<int>> out;
        for (auto& t : nerve_)
            if (t.size() == p + 1) out.push_back(t);
        return out;
    }

    bool in_all(const std::vector<int>& tuple, const Simplex& s) const
    {
        for (int a : tuple)
            if (!chart(a).contains(s)) return false;
        return true;
    }

    // q-simplices of the intersection of the charts in the tuple.
    std::vector<Simplex> simplices(const std::vector<int>& tuple, int q) const
    {
        std::vector<Simplex> out;
        if (tuple.empty()) return out;
        for (auto& s : chart(tuple[0]).simplices(q))
            if (in_all(tuple, s)) out.push_back(s);
        return out;
    }

    SimplicialComplex intersection(const std::vector<int>& tuple) const
    {
        std::vector<Simplex> all;
        for (int q = 0; q <= base_.dimension(); ++q)
            for (auto& s : simplices(tuple, q)) all.push_back(s);
        return SimplicialComplex(base_.vertex_count(), all);
    }

    // Smallest chart containing s (the partition of unity used by the constructors).
    int first_chart(const Simplex& s) const
    {
        for (std::size_t a = 0; a < charts_.size(); ++a)
            if (charts_[a].contains(s)) return static_cast<int>(a);
        throw ChartIncompatible("no chart contains " + simplex_to_string(s));
    }

    std::vector<int> charts_containing(const Simplex& s) const
    {
        std::vector<int> out;
        for (std::size_t a = 0; a < charts_.size(); ++a)
            if (charts_[a].contains(s)) out.push_back(static_cast<int>(a));
        return out;
    }

private:
    void build_nerve(std::vector<int>& cur, int from, std::size_t max_size)
    {
        for (int a = from; a < static_cast<int>(charts_.size()); ++a) {
            cur.push_back(a);
            bool nonempty = false;
            for (auto& v : chart(cur[0]).simplices(0))
                if (in_all(cur, v)) {
                    nonempty = true;
                    break;
                }
            if (nonempty) {
                nerve_.push_back(cur);
                if (cur.size() < max_size) build_nerve(cur, a + 1, max_size);
            }
            cur.pop_back();
        }
    }

    SimplicialComplex base_;
    std::vector<SimplicialComplex> charts_;
    std::vector<std::string> names_;
    std::vector<std::vector<int>> nerve_;
};

// Every nonempty intersection has the homology of a point.
inline bool is_good_cover(const Cover& U)
{
    for (auto& t : U.nerve()) {
        SimplicialComplex K = U.intersection(t);
        for (int n = 0; n <= std::max(K.dimension(), 0); ++n)
            if (!simplicial_homology(K, n, Coefficients::integers, true).is_trivial()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cech cochains of simplicial cochains
// ---------------------------------------------------------------------------

struct CDCochain {
    int p = 0, q = 0;
    // sorted chart tuple -> sorted q-simplex -> value
    std::map<std::vector<int>, std::map<Simplex, double>> values;

    CDCochain() = default;
    CDCochain(int pp, int qq) : p(pp), q(qq) {}

    // Value on an arbitrary chart tuple and an oriented vertex list.
    double at(std::vector<int> tuple, std::vector<int> simplex) const
    {
        const int st = sort_with_sign(tuple);
        const int ss = sort_with_sign(simplex);
        if (st == 0 || ss == 0) return 0.0;
        auto it = values.find(tuple);
        if (it == values.end()) return 0.0;
        auto jt = it->second.find(simplex);
        return jt == it->second.end() ? 0.0 : st * ss * jt->second;
    }

    void set(const std::vector<int>& tuple, const Simplex& s, double v) { values[tuple][s] = v; }
    void add(const std::vector<int>& tuple, const Simplex& s, double v) { values[tuple][s] += v; }

    double max_abs() const
    {
        double m = 0;
        for (auto& [t, f] : values)
            for (auto& [s, v] : f) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline CDCochain operator+(CDCochain a, const CDCochain& b)
{
    if (a.p != b.p || a.q != b.q) throw BidegreeMismatch("sum of cochains of different bidegree");
    for (auto& [t, f] : b.values)
        for (auto& [s, v] : f) a.add(t, s, v);
    return a;
}

inline CDCochain scaled(CDCochain a, double k)
{
    for (auto& [t, f] : a.values)
        for (auto& [s, v] : f) v *= k;
    return a;
}

inline CDCochain operator-(const CDCochain& a, const CDCochain& b) { return a + scaled(b, -1.0); }

// Checks that values sit on nerve tuples of the right length and inside the intersection.
inline void require_supported(const Cover& U, const CDCochain& c, const std::string& what)
{
    for (auto& [t, f] : c.values) {
        if (static_cast<int>(t.size()) != c.p + 1)
            throw BidegreeMismatch(what + ": tuple " + tuple_to_string(t) + " has the wrong length");
        for (auto& [s, v] : f)
            if (static_cast<int>(s.size()) != c.q + 1 || !U.in_all(t, s))
                throw ChartIncompatible(what + ": value on " + simplex_to_string(s) + " outside U" + tuple_to_string(t));
    }
}

inline CDCochain cech_delta(const Cover& U, const CDCochain& c)
{
    CDCochain out(c.p + 1, c.q);
    for (auto& t : U.nerve(static_cast<std::size_t>(c.p + 1)))
        for (auto& s : U.simplices(t, c.q)) {
            double v = 0;
            for (std::size_t j = 0; j < t.size(); ++j) v += (j % 2 ? -1.0 : 1.0) * c.at(face_without(t, j), s);
            if (v != 0.0) out.set(t, s, v);
        }
    return out;
}

inline CDCochain simplicial_d(const Cover& U, const CDCochain& c)
{
    CDCochain out(c.p, c.q + 1);
    for (auto& t : U.nerve(static_cast<std::size_t>(c.p)))
        for (auto& s : U.simplices(t, c.q + 1)) {
            double v = 0;
            for (std::size_t j = 0; j < s.size(); ++j) v += (j % 2 ? -1.0 : 1.0) * c.at(t, face_without(s, j));
            if (v != 0.0) out.set(t, s, v);
        }
    return out;
}

// Sum of cochains of several bidegrees.
struct HyperCochain {
    std::map<Bidegree, CDCochain> parts;

    void add(const CDCochain& c)
    {
        auto it = parts.find({c.p, c.q});
        if (it == parts.end())
            parts.emplace(Bidegree{c.p, c.q}, c);
        else
            it->second = it->second + c;
    }
    double max_abs() const
    {
        double m = 0;
        for (auto& [k, c] : parts) m = std::max(m, c.max_abs());
        return m;
    }
};

enum class TotalSign {
    twist_d,    // D = delta + (-1)^p d
    twist_delta // D = (-1)^q delta + d
};

inline HyperCochain total_differential(const Cover& U, const CDCochain& c, TotalSign conv = TotalSign::twist_d)
{
    HyperCochain out;
    CDCochain dl = cech_delta(U, c), dd = simplicial_d(U, c);
    if (conv == TotalSign::twist_d) {
        out.add(dl);
        out.add(c.p % 2 ? scaled(dd, -1.0) : dd);
    } else {
        out.add(c.q % 2 ? scaled(dl, -1.0) : dl);
        out.add(dd);
    }
    return out;
}

inline HyperCochain total_differential(const Cover& U, const HyperCochain& h, TotalSign conv = TotalSign::twist_d)
{
    HyperCochain out;
    for (auto& [k, c] : h.parts)
        for (auto& [kk, part] : total_differential(U, c, conv).parts) out.add(part);
    return out;
}

// Integer Cech-simplicial double complex of the cover: K^{p,q} is free on
// pairs (tuple of length p+1, q-simplex of its intersection); d1 = Cech delta,
// d2 = (-1)^p times simplicial d, so the squares anticommute.
inline DoubleComplex cech_double_complex(const Cover& U)
{
    DoubleComplex D;
    std::map<Bidegree, std::map<std::pair<std::vector<int>, Simplex>, std::size_t>> index;
    std::size_t maxp = 0;
    for (auto& t : U.nerve()) maxp = std::max(maxp, t.size() - 1);
    for (std::size_t p = 0; p <= maxp; ++p)
        for (auto& t : U.nerve(p))
            for (int q = 0; q <= U.base().dimension(); ++q)
                for (auto& s : U.simplices(t, q)) {
                    auto& m = index[{static_cast<int>(p), q}];
                    m.emplace(std::make_pair(t, s), m.size());
                }
    for (auto& [k, m] : index) D.ranks[k] = m.size();
    for (auto& [k, m] : index) {
        const auto [p, q] = k;
        auto h = index.find({p + 1, q});
        auto v = index.find({p, q + 1});
        IntMatrix H(h == index.end() ? 0 : h->second.size(), m.size());
        IntMatrix V(v == index.end() ? 0 : v->second.size(), m.size());
        if (h != index.end())
            for (auto& [key, row] : h->second)
                for (std::size_t j = 0; j < key.first.size(); ++j) {
                    auto it = m.find({face_without(key.first, j), key.second});
                    if (it != m.end()) H(row, it->second) += j % 2 ? -1 : 1;
                }
        if (v != index.end())
            for (auto& [key, row] : v->second)
                for (std::size_t j = 0; j < key.second.size(); ++j) {
                    auto it = m.find({key.first, face_without(key.second, j)});
                    if (it != m.end()) V(row, it->second) += ((j % 2 ? -1 : 1) * (p % 2 ? -1 : 1));
                }
        if (H.rows()) D.d1[k] = H;
        if (V.rows()) D.d2[k] = V;
    }
    return D;
}

// ---------------------------------------------------------------------------
// Line bundles and gerbes
// ---------------------------------------------------------------------------

struct LineData {
    CDCochain rho{1, 0}; // rho_{ab} on vertices of U_ab
    CDCochain A{0, 1};   // A_a on edges of U_a
};

struct GerbeData {
    CDCochain rho{2, 0};
    CDCochain Lambda{1, 1};
    CDCochain B{0, 2};
};

struct CocycleReport {
    bool ok = true;
    double max_error = 0;
    std::vector<std::string> violations;
    explicit operator bool() const { return ok; }
    void note(double err, double tol, const std::string& what)
    {
        max_error = std::max(max_error, err);
        if (err > tol) {
            ok = false;
            violations.push_back(what);
        }
    }
};

inline void check_integral(const Cover& U, const CDCochain& c, double tol, CocycleReport& rep, const std::string& what)
{
    CDCochain dc = cech_delta(U, c);
    for (auto& t : U.nerve(static_cast<std::size_t>(c.p + 1)))
        for (auto& v : U.simplices(t, 0)) {
            const double x = dc.at(t, v);
            rep.note(std::fabs(x - std::round(x)), tol,
                     what + " is not integral at vertex " + simplex_to_string(v) + " of U" + tuple_to_string(t));
        }
}

inline void check_equal(const Cover& U, const CDCochain& a, const CDCochain& b, double tol, CocycleReport& rep,
                        const std::string& what)
{
    for (auto& t : U.nerve(static_cast<std::size_t>(a.p)))
        for (auto& s : U.simplices(t, a.q))
            rep.note(std::fabs(a.at(t, s) - b.at(t, s)), tol,
                     what + " fails on " + simplex_to_string(s) + " of U" + tuple_to_string(t));
}

inline CocycleReport validate_line_cocycle(const Cover& U, const LineData& L, double tol = 1e-9)
{
    require_supported(U, L.rho, "rho");
    require_supported(U, L.A, "A");
    CocycleReport rep;
    check_integral(U, L.rho, tol, rep, "delta rho");
    check_equal(U, cech_delta(U, L.A), simplicial_d(U, L.rho), tol, rep, "A_b - A_a = d rho_ab");
    return rep;
}

inline CocycleReport validate_gerbe_cocycle(const Cover& U, const GerbeData& G, double tol = 1e-9)
{
    require_supported(U, G.rho, "rho");
    require_supported(U, G.Lambda, "Lambda");
    require_supported(U, G.B, "B");
    CocycleReport rep;
    check_integral(U, G.rho, tol, rep, "delta rho");
    check_equal(U, cech_delta(U, G.Lambda), simplicial_d(U, G.rho), tol, rep, "delta Lambda = d rho");
    check_equal(U, cech_delta(U, G.B), simplicial_d(U, G.Lambda), tol, rep, "delta B = d Lambda");
    return rep;
}

// Connection solving delta A = d rho through the partition of unity that
// sends each edge to its first chart: A_a(e) = (d rho_{k a})(e), k = first chart of e.
inline CDCochain connection_from_rho(const Cover& U, const CDCochain& rho)
{
    CDCochain A(0, 1);
    for (auto& e : U.base().simplices(1)) {
        const int k = U.first_chart(e);
        for (int a : U.charts_containing(e)) {
            const double v = rho.at({k, a}, {e[1]}) - rho.at({k, a}, {e[0]});
            if (v != 0.0) A.set({a}, e, v);
        }
    }
    return A;
}

// Lambda and B for a given rho3 by the same partition of unity.
inline GerbeData gerbe_from_rho(const Cover& U, const CDCochain& rho)
{
    GerbeData G;
    G.rho = rho;
    for (auto& e : U.base().simplices(1)) {
        const int k = U.first_chart(e);
        auto cs = U.charts_containing(e);
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j) {
                const int a = cs[i], b = cs[j];
                const double v = rho.at({k, a, b}, {e[1]}) - rho.at({k, a, b}, {e[0]});
                if (v != 0.0) G.Lambda.set({a, b}, e, v);
            }
    }
    for (auto& t : U.base().simplices(2)) {
        const int k = U.first_chart(t);
        for (int a : U.charts_containing(t)) {
            double v = 0;
            for (std::size_t j = 0; j < 3; ++j) v += (j % 2 ? -1.0 : 1.0) * G.Lambda.at({k, a}, face_without(t, j));
            if (v != 0.0) G.B.set({a}, t, v);
        }
    }
    return G;
}

// ---------------------------------------------------------------------------
// Chern classes and curvature
// ---------------------------------------------------------------------------

struct ChernClass {
    CDCochain c{2, 0}; // integer values on triple-overlap vertices
};

inline ChernClass chern_class(const Cover& U, const LineData& L, double tol = 1e-9)
{
    auto rep = validate_line_cocycle(U, L, tol);
    if (!rep) throw NotACocycle(rep.violations.front());
    ChernClass out;
    CDCochain d = cech_delta(U, L.rho);
    for (auto& [t, f] : d.values)
        for (auto& [s, v] : f)
            if (std::round(v) != 0.0) out.c.set(t, s, std::round(v));
    return out;
}

// Value of a locally constant Cech cochain on a tuple; throws when it varies.
inline double constant_value(const Cover& U, const CDCochain& c, const std::vector<int>& t, double tol = 1e-9)
{
    auto vs = U.simplices(t, 0);
    if (vs.empty()) return 0.0;
    const double v0 = c.at(t, vs[0]);
    for (auto& v : vs)
        if (std::fabs(c.at(t, v) - v0) > tol)
            throw NotACocycle("class is not constant on U" + tuple_to_string(t));
    return v0;
}

// Pairing of a locally constant Cech 2-cochain with a 2-chain of the nerve.
inline double nerve_pairing(const Cover& U, const CDCochain& c, const std::map<std::vector<int>, long long>& cycle)
{
    double s = 0;
    for (auto& [t, k] : cycle) {
        std::vector<int> tt = t;
        const int sign = sort_with_sign(tt);
        if (sign == 0) continue;
        s += static_cast<double>(k) * sign * constant_value(U, c, tt);
    }
    return s;
}

// Curvature F = dA_a on any chart a containing the triangle.
inline std::map<Simplex, double> curvature(const Cover& U, const LineData& L, double tol = 1e-9)
{
    std::map<Simplex, double> F;
    for (auto& t : U.base().simplices(2)) {
        std::optional<double> val;
        for (int a : U.charts_containing(t)) {
            double v = 0;
            for (std::size_t j = 0; j < 3; ++j) v += (j % 2 ? -1.0 : 1.0) * L.A.at({a}, face_without(t, j));
            if (val && std::fabs(*val - v) > tol)
                throw GluingMismatch("dA differs between charts on " + simplex_to_string(t));
            if (!val) val = v;
        }
        F[t] = val.value_or(0.0);
    }
    return F;
}

// ---------------------------------------------------------------------------
// Charted loops, paths and surfaces
// ---------------------------------------------------------------------------

// Closed: edges (v_i, v_{i+1 mod l}); open: edges (v_i, v_{i+1}) for i < l.
// charts[i] is the chart of edge i.
struct ChartedPath {
    std::vector<int> vertices;
    std::vector<int> charts;
    bool closed = true;

    std::size_t edge_count() const { return closed ? vertices.size() : vertices.size() - 1; }
    int head(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }
    int tail(std::size_t i) const { return vertices[i]; }
};

inline void check_path(const Cover& U, const ChartedPath& g)
{
    if (g.vertices.empty() || (!g.closed && g.vertices.size() < 2)) throw InvalidComplex("path without edges");
    if (g.charts.size() != g.edge_count()) throw DimensionMismatch("one chart per edge expected");
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        Simplex e{g.tail(i), g.head(i)};
        if (sort_with_sign(e) == 0) throw InvalidComplex("degenerate edge in path");
        if (!U.base().contains(e)) throw InvalidComplex("edge " + simplex_to_string(e) + " is not in the base");
        const int a = g.charts[i];
        if (a < 0 || a >= static_cast<int>(U.size()) || !U.chart(a).contains(e))
            throw ChartIncompatible("edge " + std::to_string(i) + " is not inside its chart");
    }
}

inline double holonomy_loop_raw(const Cover& U, const LineData& L, const ChartedPath& g)
{
    if (!g.closed) throw InvalidComplex("holonomy_loop needs a closed path");
    check_path(U, g);
    const std::size_t l = g.edge_count();
    double s = 0;
    for (std::size_t i = 0; i < l; ++i) {
        s += L.A.at({g.charts[i]}, {g.tail(i), g.head(i)});
        s += L.rho.at({g.charts[i], g.charts[(i + 1) % l]}, {g.head(i)});
    }
    return s;
}

inline double holonomy_loop(const Cover& U, const LineData& L, const ChartedPath& g)
{
    return mod1(holonomy_loop_raw(U, L, g));
}

// Checks (delta t)_{ab} = t_b - t_a == rho_ab (mod 1) on every pair overlap.
inline void check_trivialization(const Cover& U, const LineData& L, const CDCochain& t, double tol)
{
    if (t.p != 0 || t.q != 0) throw BidegreeMismatch("a trivialization is a (0,0) cochain");
    CDCochain dt = cech_delta(U, t);
    for (auto& pr : U.nerve(1))
        for (auto& v : U.simplices(pr, 0))
            if (!close_mod1(dt.at(pr, v), L.rho.at(pr, v), tol))
                throw NotATrivialization("t_b - t_a != rho_ab at " + simplex_to_string(v) + " of U" + tuple_to_string(pr));
}

inline double holonomy_path(const Cover& U, const LineData& L, const CDCochain& triv, const ChartedPath& g,
                            double tol = 1e-9)
{
    if (g.closed) throw InvalidComplex("holonomy_path needs an open path");
    check_path(U, g);
    check_trivialization(U, L, triv, tol);
    const std::size_t l = g.edge_count();
    double s = 0;
    for (std::size_t i = 0; i < l; ++i) {
        s += L.A.at({g.charts[i]}, {g.tail(i), g.head(i)});
        if (i + 1 < l) s += L.rho.at({g.charts[i], g.charts[i + 1]}, {g.head(i)});
    }
    s += triv.at({g.charts.front()}, {g.vertices.front()}) - triv.at({g.charts.back()}, {g.vertices.back()});
    return mod1(s);
}

class ChartedSurface {
public:
    struct Edge {
        int a = 0, b = 0;      // a < b
        int plus = -1;         // triangle inducing a -> b
        int minus = -1;        // triangle inducing b -> a
        bool interior() const { return plus >= 0 && minus >= 0; }
    };

    ChartedSurface() = default;
    ChartedSurface(std::vector<std::array<int, 3>> triangles, std::vector<int> charts)
        : tri_(std::move(triangles)), charts_(std::move(charts))
    {
        if (tri_.size() != charts_.size()) throw DimensionMismatch("one chart per triangle expected");
        std::map<std::pair<int, int>, std::size_t> eidx;
        for (std::size_t t = 0; t < tri_.size(); ++t) {
            auto& x = tri_[t];
            if (x[0] == x[1] || x[1] == x[2] || x[0] == x[2]) throw InvalidComplex("degenerate triangle");
            for (int j = 0; j < 3; ++j) {
                const int u = x[j], v = x[(j + 1) % 3];
                const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
                auto it = eidx.find(key);
                if (it == eidx.end()) {
                    it = eidx.emplace(key, edges_.size()).first;
                    edges_.push_back({key.first, key.second, -1, -1});
                }
                int& slot = u < v ? edges_[it->second].plus : edges_[it->second].minus;
                if (slot >= 0)
                    throw InvalidComplex("edge " + simplex_to_string({key.first, key.second}) +
                                         " is induced twice with the same orientation");
                slot = static_cast<int>(t);
            }
        }
        // vertex stars
        std::map<int, std::map<int, int>> first; // v -> (next vertex after v -> triangle)
        for (std::size_t t = 0; t < tri_.size(); ++t)
            for (int j = 0; j < 3; ++j) first[tri_[t][j]][tri_[t][(j + 1) % 3]] = static_cast<int>(t);
        for (auto& [v, m] : first) {
            int start = std::numeric_limits<int>::max();
            for (auto& [a, t] : m) start = std::min(start, t);
            std::vector<int> star{start};
            bool cyclic = false;
            int cur = start;
            while (true) {
                auto& x = tri_[static_cast<std::size_t>(cur)];
                int j = 0;
                while (x[j] != v) ++j;
                const int last = x[(j + 2) % 3];
                auto it = m.find(last);
                if (it == m.end()) break;
                if (it->second == start) {
                    cyclic = true;
                    break;
                }
                if (star.size() > m.size()) throw InvalidComplex("vertex star of " + std::to_string(v) + " is not a disc");
                star.push_back(it->second);
                cur = it->second;
            }
            if (cyclic && star.size() == m.size())
                stars_[v] = star;
            else
                boundary_vertices_.insert(v);
        }
    }

    const std::vector<std::array<int, 3>>& triangles() const { return tri_; }
    const std::vector<int>& charts() const { return charts_; }
    std::vector<int>& charts() { return charts_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<int, std::vector<int>>& stars() const { return stars_; }
    const std::set<int>& boundary_vertices() const { return boundary_vertices_; }
    bool closed() const
    {
        for (auto& e : edges_)
            if (!e.interior()) return false;
        return boundary_vertices_.empty();
    }

private:
    std::vector<std::array<int, 3>> tri_;
    std::vector<int> charts_;
    std::vector<Edge> edges_;
    std::map<int, std::vector<int>> stars_;
    std::set<int> boundary_vertices_;
};

inline void check_surface_charts(const Cover& U, const ChartedSurface& S)
{
    for (std::size_t t = 0; t < S.triangles().size(); ++t) {
        auto& x = S.triangles()[t];
        Simplex s{x[0], x[1], x[2]};
        sort_with_sign(s);
        if (!U.base().contains(s)) throw InvalidComplex("triangle " + simplex_to_string(s) + " is not in the base");
        const int a = S.charts()[t];
        if (a < 0 || a >= static_cast<int>(U.size()) || !U.chart(a).contains(s))
            throw ChartIncompatible("triangle " + std::to_string(t) + " is not inside its chart");
    }
}

// Vertex term at v: sum_j c(phi(B^1), phi(B^{j+1}), phi(B^j)) over the cyclic star,
// with the base triangle B^1 chosen by the shift.
inline double vertex_term(const CDCochain& c, const ChartedSurface& S, int v, const std::vector<int>& star,
                          std::size_t shift = 0)
{
    const std::size_t k = star.size();
    auto ch = [&](std::size_t j) { return S.charts()[static_cast<std::size_t>(star[(j + shift) % k])]; };
    double s = 0;
    for (std::size_t j = 0; j < k; ++j) s += c.at({ch(0), ch(j + 1), ch(j)}, {v});
    return s;
}

// Pairing of a Cech 2-cochain (constant near each vertex) with a closed charted surface.
inline double surface_pairing(const Cover& U, const CDCochain& c, const ChartedSurface& S, std::size_t shift = 0)
{
    if (!S.closed()) throw NotClosed("surface has boundary");
    check_surface_charts(U, S);
    double s = 0;
    for (auto& [v, star] : S.stars()) s += vertex_term(c, S, v, star, shift);
    return s;
}

inline double holonomy_surface_raw(const Cover& U, const GerbeData& G, const ChartedSurface& S, std::size_t shift = 0)
{
    if (!S.closed()) throw NotClosed("surface has boundary");
    check_surface_charts(U, S);
    double s = 0;
    for (std::size_t t = 0; t < S.triangles().size(); ++t) {
        auto& x = S.triangles()[t];
        s += G.B.at({S.charts()[t]}, {x[0], x[1], x[2]});
    }
    for (auto& e : S.edges())
        s += G.Lambda.at({S.charts()[static_cast<std::size_t>(e.plus)], S.charts()[static_cast<std::size_t>(e.minus)]},
                         {e.a, e.b});
    for (auto& [v, star] : S.stars()) s += vertex_term(G.rho, S, v, star, shift);
    return s;
}

inline double holonomy_surface(const Cover& U, const GerbeData& G, const ChartedSurface& S, std::size_t shift = 0)
{
    return mod1(holonomy_surface_raw(U, G, S, shift));
}

// Trivialization (h, A) of a gerbe: delta h == rho (mod 1) and Lambda = d h - delta A.
inline void check_gerbe_trivialization(const Cover& U, const GerbeData& G, const CDCochain& h, const CDCochain& A,
                                       double tol)
{
    if (h.p != 1 || h.q != 0 || A.p != 0 || A.q != 1) throw BidegreeMismatch("trivialization needs h in (1,0) and A in (0,1)");
    CDCochain dh = cech_delta(U, h);
    for (auto& t : U.nerve(2))
        for (auto& v : U.simplices(t, 0))
            if (!close_mod1(dh.at(t, v), G.rho.at(t, v), tol))
                throw NotATrivialization("delta h != rho at " + simplex_to_string(v) + " of U" + tuple_to_string(t));
    CDCochain rhs = simplicial_d(U, h) - cech_delta(U, A);
    for (auto& pr : U.nerve(1))
        for (auto& e : U.simplices(pr, 1))
            if (std::fabs(rhs.at(pr, e) - G.Lambda.at(pr, e)) > tol)
                throw NotATrivialization("Lambda != d h - delta A on " + simplex_to_string(e) + " of U" + tuple_to_string(pr));
}

inline double holonomy_open_surface(const Cover& U, const GerbeData& G, const CDCochain& h, const CDCochain& A,
                                    const ChartedSurface& S, double tol = 1e-9)
{
    check_surface_charts(U, S);
    check_gerbe_trivialization(U, G, h, A, tol);
    double s = 0;
    for (std::size_t t = 0; t < S.triangles().size(); ++t) {
        auto& x = S.triangles()[t];
        const int a = S.charts()[t];
        s += G.B.at({a}, {x[0], x[1], x[2]});
        for (int j = 0; j < 3; ++j) s += A.at({a}, {x[j], x[(j + 1) % 3]});
    }
    return mod1(s);
}

// ---------------------------------------------------------------------------
// Gauge transformations and trivializations
// ---------------------------------------------------------------------------

// (rho, A) + D(g): A_a += d g_a, rho_ab += g_b - g_a.
inline LineData gauge_transform(const Cover& U, const LineData& L, const CDCochain& g)
{
    if (g.p != 0 || g.q != 0) throw BidegreeMismatch("line gauge transformations are (0,0) cochains");
    return {L.rho + cech_delta(U, g), L.A + simplicial_d(U, g)};
}

// (rho, Lambda, B) + (delta h, d h + delta a, d a).
inline GerbeData gauge_transform(const Cover& U, const GerbeData& G, const CDCochain& h, const CDCochain& a)
{
    if (h.p != 1 || h.q != 0 || a.p != 0 || a.q != 1) throw BidegreeMismatch("gerbe gauge transformations are (1,0) + (0,1)");
    return {G.rho + cech_delta(U, h), G.Lambda + simplicial_d(U, h) + cech_delta(U, a), G.B + simplicial_d(U, a)};
}

struct RealChern {
    CDCochain c{2, 0};                 // delta h, constant on each triple overlap component
    std::optional<int> denominator;     // least n <= 1000 with n c integral
    std::optional<std::map<Simplex, double>> curvature; // dA when a flat connection is supplied
};

inline RealChern real_chern_of_trivialization(const Cover& U, const CDCochain& h, double tol = 1e-9,
                                              const std::optional<CDCochain>& A = {})
{
    if (h.p != 1 || h.q != 0) throw BidegreeMismatch("expected a (1,0) cochain");
    RealChern out;
    out.c = cech_delta(U, h);
    // constant along edges of each triple overlap
    for (auto& t : U.nerve(2))
        for (auto& e : U.simplices(t, 1))
            if (std::fabs(out.c.at(t, {e[0]}) - out.c.at(t, {e[1]})) > tol)
                throw NotConstantCoboundary("delta h varies along " + simplex_to_string(e) + " in U" + tuple_to_string(t));
    for (int n = 1; n <= 1000 && !out.denominator; ++n) {
        bool ok = true;
        for (auto& [t, f] : out.c.values)
            for (auto& [s, v] : f) ok = ok && near_integer(n * v, tol * n);
        if (ok) out.denominator = n;
    }
    if (A) {
        LineData L{h, *A};
        auto rep = CocycleReport();
        check_equal(U, cech_delta(U, *A), simplicial_d(U, h), tol, rep, "A_b - A_a = d h_ab");
        if (!rep) throw NotATrivialization(rep.violations.front());
        out.curvature = curvature(U, L, tol);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Standard instances
// ---------------------------------------------------------------------------

// Closed charted surface on all triangles of an orientable closed 2-dimensional
// base, oriented by a generator of H_2; each triangle gets its first chart.
inline ChartedSurface fundamental_surface(const Cover& U)
{
    const SimplicialComplex& K = U.base();
    HomologyGroup H(chain_complex_of(K), 2, Coefficients::integers);
    if (H.group().free_rank != 1 || !H.group().torsion.empty()) throw NotASphere("base is not a closed orientable surface");
    IntVector z = H.generator(0);
    std::vector<std::array<int, 3>> tri;
    std::vector<int> charts;
    const auto& T = K.simplices(2);
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (z[i].is_zero()) continue;
        tri.push_back(z[i] > 0 ? std::array<int, 3>{T[i][0], T[i][1], T[i][2]} : std::array<int, 3>{T[i][0], T[i][2], T[i][1]});
        charts.push_back(U.first_chart(T[i]));
    }
    return ChartedSurface(tri, charts);
}

// Barycentric subdivision of the base with the subdivided charts and the
// simplicial approximation pi : sd(X) -> X (barycentre of s -> largest vertex of s).
struct SubdividedCover {
    Cover cover;
    std::vector<int> pi;
    std::map<Simplex, int> barycentre;
};

inline SubdividedCover subdivide(const Cover& U)
{
    const SimplicialComplex& X = U.base();
    SubdividedCover out;
    std::vector<Simplex> verts;
    for (int k = 0; k <= X.dimension(); ++k)
        for (auto& s : X.simplices(k)) {
            out.barycentre[s] = static_cast<int>(verts.size());
            verts.push_back(s);
            out.pi.push_back(s.back());
        }
    const std::size_t n = verts.size();
    auto flags_of = [&](auto&& keep) {
        std::vector<Simplex> result;
        std::vector<Simplex> chain;
        std::function<void(const Simplex&)> grow = [&](const Simplex& top) {
            Simplex ids;
            for (auto& c : chain) ids.push_back(out.barycentre.at(c));
            std::sort(ids.begin(), ids.end());
            result.push_back(ids);
            const unsigned full = (1u << top.size()) - 1;
            for (unsigned mask = 1; mask < full; ++mask) {
                Simplex f;
                for (std::size_t j = 0; j < top.size(); ++j)
                    if (mask >> j & 1u) f.push_back(top[j]);
                chain.push_back(f);
                grow(f);
                chain.pop_back();
            }
        };
        for (int k = 0; k <= X.dimension(); ++k)
            for (auto& s : X.simplices(k))
                if (keep(s)) {
                    chain = {s};
                    grow(s);
                }
        std::sort(result.begin(), result.end());
        result.erase(std::unique(result.begin(), result.end()), result.end());
        return result;
    };
    SimplicialComplex sd(n, flags_of([](const Simplex&) { return true; }));
    std::vector<SimplicialComplex> charts;
    for (auto& c : U.charts()) charts.emplace_back(n, flags_of([&](const Simplex& s) { return c.contains(s); }));
    out.cover = Cover(sd, charts, U.names());
    return out;
}

// Pullback of a cochain along pi.
inline CDCochain pullback(const SubdividedCover& S, const CDCochain& c)
{
    CDCochain out(c.p, c.q);
    for (auto& t : S.cover.nerve(static_cast<std::size_t>(c.p)))
        for (auto& s : S.cover.simplices(t, c.q)) {
            std::vector<int> img;
            for (int v : s) img.push_back(S.pi[static_cast<std::size_t>(v)]);
            const double v = c.at(t, img);
            if (v != 0.0) out.set(t, s, v);
        }
    return out;
}

inline LineData pullback(const SubdividedCover& S, const LineData& L) { return {pullback(S, L.rho), pullback(S, L.A)}; }

inline GerbeData pullback(const SubdividedCover& S, const GerbeData& G)
{
    return {pullback(S, G.rho), pullback(S, G.Lambda), pullback(S, G.B)};
}

inline ChartedPath subdivide(const SubdividedCover& S, const ChartedPath& g)
{
    ChartedPath out;
    out.closed = g.closed;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        Simplex e{g.tail(i), g.head(i)};
        sort_with_sign(e);
        out.vertices.push_back(S.barycentre.at({g.tail(i)}));
        out.vertices.push_back(S.barycentre.at(e));
        out.charts.push_back(g.charts[i]);
        out.charts.push_back(g.charts[i]);
    }
    if (!g.closed) out.vertices.push_back(S.barycentre.at({g.vertices.back()}));
    return out;
}

inline ChartedSurface subdivide(const SubdividedCover& S, const ChartedSurface& surf)
{
    std::vector<std::array<int, 3>> tri;
    std::vector<int> charts;
    for (std::size_t t = 0; t < surf.triangles().size(); ++t) {
        auto x = surf.triangles()[t];
        Simplex all{x[0], x[1], x[2]};
        sort_with_sign(all);
        const int b = S.barycentre.at(all);
        const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
        for (int k = 0; k < 6; ++k) {
            const int p0 = x[perm[k][0]], p1 = x[perm[k][1]];
            Simplex e{p0, p1};
            sort_with_sign(e);
            const int v = S.barycentre.at({p0}), m = S.barycentre.at(e);
            tri.push_back(k < 3 ? std::array<int, 3>{v, m, b} : std::array<int, 3>{m, v, b});
            charts.push_back(surf.charts()[t]);
        }
    }
    return ChartedSurface(tri, charts);
}

// Circle with vertices 0..5 and three arcs U_0 = [0,2], U_1 = [2,4], U_2 = [4,0];
// rho_01 = rho_12 = 0, rho_20 = c, A = 0.
struct CircleDatum {
    Cover cover;
    LineData line;
    ChartedPath loop;
};

inline CircleDatum flat_circle_datum(double c)
{
    std::vector<Simplex> all;
    for (int i = 0; i < 6; ++i) {
        all.push_back({i});
        all.push_back({std::min(i, (i + 1) % 6), std::max(i, (i + 1) % 6)});
    }
    SimplicialComplex S(6, all);
    auto arc = [](int a) {
        std::vector<Simplex> s{{a}, {(a + 1) % 6}, {(a + 2) % 6}};
        for (int i = a; i < a + 2; ++i) s.push_back({std::min(i % 6, (i + 1) % 6), std::max(i % 6, (i + 1) % 6)});
        return SimplicialComplex::from_maximal(6, s);
    };
    CircleDatum d{Cover(S, {arc(0), arc(2), arc(4)}), {}, {}};
    d.line.rho.set({0, 2}, {0}, -c);
    d.loop.vertices = {0, 1, 2, 3, 4, 5};
    d.loop.charts = {0, 0, 1, 1, 2, 2};
    return d;
}

// Sphere sd(boundary of the 3-simplex) covered by the closed stars of the four
// original vertices (a good cover whose nerve is the boundary of a 3-simplex),
// with a line datum of Chern number one.
struct SphereDatum {
    Cover cover;
    SubdividedCover sd;
    LineData line;
    std::map<std::vector<int>, long long> nerve_cycle;
};

inline SphereDatum monopole_datum()
{
    SimplicialComplex S = sphere(2);
    std::vector<SimplicialComplex> trivial{S};
    Cover coarse(S, trivial);
    SphereDatum d;
    d.sd = subdivide(coarse);
    const SimplicialComplex& X = d.sd.cover.base();
    std::vector<SimplicialComplex> charts;
    for (int i = 0; i < 4; ++i) {
        std::vector<Simplex> top;
        for (auto& t : X.simplices(2))
            if (std::binary_search(t.begin(), t.end(), d.sd.barycentre.at({i}))) top.push_back(t);
        charts.push_back(SimplicialComplex::from_maximal(X.vertex_count(), top));
    }
    d.cover = Cover(X, charts);
    // rho_12: 0 at b_012, 1/2 at m_12, 1 at b_123
    d.line.rho.set({1, 2}, {d.sd.barycentre.at({0, 1, 2})}, 0.0);
    d.line.rho.set({1, 2}, {d.sd.barycentre.at({1, 2})}, 0.5);
    d.line.rho.set({1, 2}, {d.sd.barycentre.at({1, 2, 3})}, 1.0);
    d.line.A = connection_from_rho(d.cover, d.line.rho);
    d.nerve_cycle = {{{1, 2, 3}, 1}, {{0, 2, 3}, -1}, {{0, 1, 3}, 1}, {{0, 1, 2}, -1}};
    return d;
}

} // namespace cohomolab
