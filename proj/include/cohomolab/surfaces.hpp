#pragma once

// Delta-complexes from polygon words, barycentric subdivision, the surface
// catalog and orientation double covers.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "simplicial.hpp"

namespace cohomolab {

// Cell k,i has vertex tuple verts[k][i] (ids of 0-cells, possibly repeated)
// and, for k >= 1, faces[k][i][j] = the (k-1)-cell opposite position j.
struct DeltaComplex {
    std::vector<std::vector<std::vector<std::size_t>>> faces;
    std::vector<std::vector<std::vector<std::size_t>>> verts;

    int dimension() const { return static_cast<int>(verts.size()) - 1; }
    std::size_t count(int k) const
    {
        return k >= 0 && k < static_cast<int>(verts.size()) ? verts[static_cast<std::size_t>(k)].size() : 0;
    }

    ChainComplex chain_complex() const
    {
        std::vector<std::size_t> ranks;
        std::vector<IntMatrix> d;
        for (int k = 0; k <= dimension(); ++k) {
            ranks.push_back(count(k));
            IntMatrix M(count(k - 1), count(k));
            for (std::size_t i = 0; k > 0 && i < count(k); ++i)
                for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j)
                    M(faces[static_cast<std::size_t>(k)][i][j], i) += boundary_sign(j);
            d.push_back(M);
        }
        return ChainComplex(false, 0, ranks, d);
    }

    // Cell reached from (k, cell) by keeping only the positions in mask.
    std::pair<int, std::size_t> face(int k, std::size_t cell, unsigned mask) const
    {
        for (int p = k; p >= 0; --p)
            if (!(mask & (1u << p))) {
                cell = faces[static_cast<std::size_t>(k)][cell][static_cast<std::size_t>(p)];
                --k;
            }
        return {k, cell};
    }
};

// An oriented 1-cell: (cell id, +1 or -1).
using OrientedEdge = std::pair<std::size_t, int>;
using EdgePath = std::vector<OrientedEdge>;

struct Subdivision {
    DeltaComplex complex;
    // edge_image[e] = path in the subdivision traversing e forwards
    std::vector<EdgePath> edge_image;
    ChainMap chain_map; // C(X) -> C(sd X)
};

namespace detail {

struct SdKey {
    int dim;
    std::size_t cell;
    std::vector<unsigned> chain;
    bool operator<(const SdKey& o) const
    {
        return std::tie(dim, cell, chain) < std::tie(o.dim, o.cell, o.chain);
    }
};

inline unsigned reindex(unsigned s, unsigned t)
{
    unsigned out = 0;
    int r = 0;
    for (int p = 0; p < 32; ++p)
        if (t & (1u << p)) {
            if (s & (1u << p)) out |= 1u << r;
            ++r;
        }
    return out;
}

inline void chains_ending_at(unsigned full, std::vector<unsigned>& cur, std::vector<std::vector<unsigned>>& out)
{
    // cur holds the chain from its smallest element upwards, built backwards
    out.push_back(std::vector<unsigned>(cur.rbegin(), cur.rend()));
    unsigned top = cur.back();
    for (unsigned s = (top - 1) & top; s; s = (s - 1) & top) {
        cur.push_back(s);
        chains_ending_at(full, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

inline Subdivision barycentric_subdivision(const DeltaComplex& X)
{
    using detail::SdKey;
    const int D = X.dimension();
    std::vector<std::map<SdKey, std::size_t>> ids(static_cast<std::size_t>(D + 1));
    std::vector<std::vector<SdKey>> keys(static_cast<std::size_t>(D + 1));
    // vertices first, ordered by (dimension, cell) of the original cell
    for (int d = 0; d <= D; ++d)
        for (std::size_t c = 0; c < X.count(d); ++c) {
            const unsigned full = (1u << (d + 1)) - 1;
            std::vector<unsigned> cur{full};
            std::vector<std::vector<unsigned>> chains;
            detail::chains_ending_at(full, cur, chains);
            std::sort(chains.begin(), chains.end(),
                      [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
            for (auto& ch : chains) {
                const std::size_t k = ch.size() - 1;
                SdKey key{d, c, ch};
                ids[k][key] = keys[k].size();
                keys[k].push_back(key);
            }
        }
    Subdivision out;
    DeltaComplex& Y = out.complex;
    Y.faces.resize(static_cast<std::size_t>(D + 1));
    Y.verts.resize(static_cast<std::size_t>(D + 1));
    for (int k = 0; k <= D; ++k) {
        for (const SdKey& key : keys[static_cast<std::size_t>(k)]) {
            std::vector<std::size_t> vs;
            for (unsigned s : key.chain) {
                auto [gd, g] = X.face(key.dim, key.cell, s);
                vs.push_back(ids[0].at(SdKey{gd, g, {(1u << (gd + 1)) - 1}}));
            }
            Y.verts[static_cast<std::size_t>(k)].push_back(vs);
            std::vector<std::size_t> fs;
            for (int i = 0; k > 0 && i <= k; ++i) {
                if (i < k) {
                    SdKey f = key;
                    f.chain.erase(f.chain.begin() + i);
                    fs.push_back(ids[static_cast<std::size_t>(k - 1)].at(f));
                } else {
                    const unsigned T = key.chain[static_cast<std::size_t>(k - 1)];
                    auto [gd, g] = X.face(key.dim, key.cell, T);
                    SdKey f{gd, g, {}};
                    for (int j = 0; j < k; ++j) f.chain.push_back(detail::reindex(key.chain[static_cast<std::size_t>(j)], T));
                    fs.push_back(ids[static_cast<std::size_t>(k - 1)].at(f));
                }
            }
            Y.faces[static_cast<std::size_t>(k)].push_back(fs);
        }
    }
    for (std::size_t e = 0; e < X.count(1); ++e)
        out.edge_image.push_back({{ids[1].at(SdKey{1, e, {1u, 3u}}), 1}, {ids[1].at(SdKey{1, e, {2u, 3u}}), -1}});

    // sd(F) = sum over orderings of the positions of F of sign * (flag cell)
    out.chain_map.source = X.chain_complex();
    out.chain_map.target = Y.chain_complex();
    for (int d = 0; d <= D; ++d) {
        IntMatrix M(Y.count(d), X.count(d));
        std::vector<int> perm(static_cast<std::size_t>(d + 1));
        for (std::size_t c = 0; c < X.count(d); ++c) {
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<unsigned> ch;
                unsigned acc = 0;
                for (int p : perm) {
                    acc |= 1u << p;
                    ch.push_back(acc);
                }
                M(ids[static_cast<std::size_t>(d)].at(SdKey{d, c, ch}), c) += sort_sign(perm);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        out.chain_map.components[d] = M;
    }
    return out;
}

inline EdgePath push_path(const EdgePath& p, const Subdivision& sd)
{
    EdgePath out;
    for (auto [e, dir] : p) {
        const EdgePath& img = sd.edge_image[e];
        if (dir > 0)
            out.insert(out.end(), img.begin(), img.end());
        else
            for (auto it = img.rbegin(); it != img.rend(); ++it) out.push_back({it->first, -it->second});
    }
    return out;
}

// Converts a Delta-complex whose cells have distinct increasing vertices and
// distinct vertex sets into a simplicial complex.
inline SimplicialComplex to_simplicial(const DeltaComplex& X)
{
    std::vector<Simplex> all;
    for (int k = 0; k <= X.dimension(); ++k)
        for (auto& vs : X.verts[static_cast<std::size_t>(k)]) {
            Simplex s(vs.begin(), vs.end());
            for (std::size_t i = 1; i < s.size(); ++i)
                if (s[i - 1] >= s[i]) throw NotSimplicial("cell with repeated or unordered vertices " + simplex_to_string(s));
            all.push_back(s);
        }
    return SimplicialComplex(X.count(0), all);
}

// ---------------------------------------------------------------------------
// Polygon words
// ---------------------------------------------------------------------------

struct Letter {
    std::string name;
    int exponent;
};
using PolygonWord = std::vector<Letter>;

struct PolygonComplex {
    DeltaComplex complex;
    std::vector<std::string> letters; // 1-cell i < letters.size() is that letter
};

// Fan triangulation of the polygon with the given side word around a centre.
inline PolygonComplex polygon_complex(const PolygonWord& w)
{
    const std::size_t n = w.size();
    if (n < 2) throw UnsupportedKind("polygon word needs at least two letters");
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    auto tail = [&](std::size_t i) { return w[i].exponent > 0 ? i : (i + 1) % n; };
    auto head = [&](std::size_t i) { return w[i].exponent > 0 ? (i + 1) % n : i; };

    PolygonComplex P;
    std::map<std::string, std::size_t> letter_id;
    std::map<std::string, std::size_t> first_pos;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i].exponent != 1 && w[i].exponent != -1) throw UnsupportedKind("exponents must be +-1");
        auto it = first_pos.find(w[i].name);
        if (it == first_pos.end()) {
            first_pos[w[i].name] = i;
            letter_id[w[i].name] = P.letters.size();
            P.letters.push_back(w[i].name);
        } else {
            unite(tail(i), tail(it->second));
            unite(head(i), head(it->second));
        }
    }
    std::map<std::size_t, std::size_t> corner_vertex;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (!corner_vertex.count(r)) corner_vertex[r] = corner_vertex.size();
    }
    const std::size_t centre = corner_vertex.size();
    auto cv = [&](std::size_t i) { return corner_vertex.at(find(i % n)); };

    DeltaComplex& X = P.complex;
    X.verts.resize(3);
    X.faces.resize(3);
    for (std::size_t v = 0; v <= centre; ++v) X.verts[0].push_back({v});
    for (std::size_t l = 0; l < P.letters.size(); ++l) {
        std::size_t i = first_pos.at(P.letters[l]);
        std::size_t a = cv(tail(i)), b = cv(head(i));
        X.verts[1].push_back({a, b});
        X.faces[1].push_back({b, a});
    }
    const std::size_t spoke0 = X.verts[1].size();
    for (std::size_t i = 0; i < n; ++i) {
        X.verts[1].push_back({cv(i), centre});
        X.faces[1].push_back({centre, cv(i)});
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = w[i].exponent > 0 ? i : (i + 1) % n;
        const std::size_t hi = w[i].exponent > 0 ? (i + 1) % n : i;
        X.verts[2].push_back({cv(lo), cv(hi), centre});
        X.faces[2].push_back({spoke0 + hi, spoke0 + lo, letter_id.at(w[i].name)});
    }
    return P;
}

// ---------------------------------------------------------------------------
// Surface catalog
// ---------------------------------------------------------------------------

enum class SurfaceKind { sphere, orientable, rp2, klein, crosscap1, crosscap2, moebius, cylinder };

inline const char* to_string(SurfaceKind k)
{
    switch (k) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::orientable: return "orientable";
    case SurfaceKind::rp2: return "rp2";
    case SurfaceKind::klein: return "klein";
    case SurfaceKind::crosscap1: return "crosscap1";
    case SurfaceKind::crosscap2: return "crosscap2";
    case SurfaceKind::moebius: return "moebius";
    case SurfaceKind::cylinder: return "cylinder";
    }
    return "?";
}

inline SurfaceKind surface_kind_from_string(const std::string& s)
{
    for (auto k : {SurfaceKind::sphere, SurfaceKind::orientable, SurfaceKind::rp2, SurfaceKind::klein,
                   SurfaceKind::crosscap1, SurfaceKind::crosscap2, SurfaceKind::moebius, SurfaceKind::cylinder})
        if (s == to_string(k)) return k;
    if (s == "torus") return SurfaceKind::orientable;
    throw UnsupportedKind("unknown surface kind '" + s + "'");
}

struct MarkedCycle {
    std::string name;
    std::vector<int> vertices; // closed: front() == back()
};

struct SurfaceModel {
    SurfaceKind kind = SurfaceKind::sphere;
    int genus = 0;
    SimplicialComplex complex;
    std::vector<MarkedCycle> marked_cycles;

    const MarkedCycle& cycle(const std::string& name) const
    {
        for (auto& c : marked_cycles)
            if (c.name == name) return c;
        throw OutOfRange("no marked cycle named " + name);
    }
};

// Signed 1-chain of a vertex path.
inline IntVector path_chain(const SimplicialComplex& K, const std::vector<int>& path)
{
    IntVector c(K.count(1));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int a = path[i], b = path[i + 1];
        Simplex e = a < b ? Simplex{a, b} : Simplex{b, a};
        auto idx = K.index_of(e);
        if (!idx) throw NotSimplicial("path step " + std::to_string(a) + "->" + std::to_string(b) + " is not an edge");
        c[*idx] += a < b ? 1 : -1;
    }
    return c;
}

inline std::vector<int> edge_path_vertices(const DeltaComplex& X, const EdgePath& p)
{
    std::vector<int> out;
    for (auto [e, dir] : p) {
        const auto& vs = X.verts[1][e];
        int a = static_cast<int>(dir > 0 ? vs[0] : vs[1]);
        int b = static_cast<int>(dir > 0 ? vs[1] : vs[0]);
        if (out.empty()) out.push_back(a);
        if (out.back() != a) throw NotSimplicial("edge path is not connected");
        out.push_back(b);
    }
    return out;
}

inline PolygonWord surface_word(SurfaceKind kind, int g)
{
    PolygonWord w;
    auto handles = [&](int count, const std::string& prefix) {
        for (int i = 1; i <= count; ++i) {
            std::string a = prefix + "a" + std::to_string(i), b = prefix + "b" + std::to_string(i);
            w.push_back({a, 1});
            w.push_back({b, 1});
            w.push_back({a, -1});
            w.push_back({b, -1});
        }
    };
    switch (kind) {
    case SurfaceKind::orientable: handles(g, ""); break;
    case SurfaceKind::rp2: w = {{"a", 1}, {"a", 1}}; break;
    case SurfaceKind::klein: w = {{"a", 1}, {"b", 1}, {"a", 1}, {"b", -1}}; break;
    case SurfaceKind::crosscap1:
        handles(g, "");
        w.push_back({"c", 1});
        w.push_back({"c", 1});
        break;
    case SurfaceKind::crosscap2:
        handles(g, "");
        w.push_back({"a", 1});
        w.push_back({"b", 1});
        w.push_back({"a", 1});
        w.push_back({"b", -1});
        break;
    case SurfaceKind::moebius: w = {{"x", 1}, {"a", 1}, {"y", 1}, {"a", 1}}; break;
    case SurfaceKind::cylinder: w = {{"x", 1}, {"a", 1}, {"y", 1}, {"a", -1}}; break;
    case SurfaceKind::sphere: break;
    }
    return w;
}

inline SurfaceModel surface_model(SurfaceKind kind, int g = 0)
{
    if (g < 0) throw UnsupportedKind("genus must be nonnegative");
    SurfaceModel M;
    M.kind = kind;
    M.genus = g;
    if (kind == SurfaceKind::sphere || (kind == SurfaceKind::orientable && g == 0)) {
        M.kind = SurfaceKind::sphere;
        M.genus = 0;
        M.complex = sphere(2);
        return M;
    }
    if (kind == SurfaceKind::crosscap1 && g == 0) return surface_model(SurfaceKind::rp2, 0);
    if (kind == SurfaceKind::crosscap2 && g == 0) return surface_model(SurfaceKind::klein, 0);

    PolygonComplex P = polygon_complex(surface_word(kind, g));
    Subdivision s1 = barycentric_subdivision(P.complex);
    Subdivision s2 = barycentric_subdivision(s1.complex);
    M.complex = to_simplicial(s2.complex);

    std::vector<std::pair<std::string, EdgePath>> loops;
    if (kind == SurfaceKind::moebius) {
        // letters: x = 0, a = 1, y = 2
        loops.push_back({"core", {{1, 1}, {0, 1}}});
        loops.push_back({"boundary", {{0, 1}, {2, -1}}});
    } else if (kind == SurfaceKind::cylinder) {
        loops.push_back({"x", {{0, 1}}});
        loops.push_back({"y", {{2, 1}}});
    } else {
        for (std::size_t l = 0; l < P.letters.size(); ++l) loops.push_back({P.letters[l], {{l, 1}}});
    }
    for (auto& [name, path] : loops) {
        EdgePath p2 = push_path(push_path(path, s1), s2);
        MarkedCycle c{name, edge_path_vertices(s2.complex, p2)};
        if (c.vertices.front() != c.vertices.back()) throw NotSimplicial("marked cycle " + name + " is not closed");
        M.marked_cycles.push_back(c);
    }
    return M;
}

inline bool is_orientable_kind(SurfaceKind k)
{
    return k == SurfaceKind::sphere || k == SurfaceKind::orientable || k == SurfaceKind::cylinder;
}

// ---------------------------------------------------------------------------
// Orientation double cover
// ---------------------------------------------------------------------------

struct DoubleCover {
    SurfaceModel cover;
    SimplicialMap projection;
    SimplicialMap involution;
};

// Lifts a vertex path of the base starting at the cover vertex `start`.
inline std::vector<int> lift_path(const SimplicialMap& projection, const std::vector<int>& path, int start)
{
    const SimplicialComplex& C = projection.source;
    std::map<std::pair<int, int>, int> step; // (cover vertex, base neighbour) -> cover vertex
    for (auto& e : C.simplices(1)) {
        step[{e[0], projection(e[1])}] = e[1];
        step[{e[1], projection(e[0])}] = e[0];
    }
    if (projection(start) != path.front()) throw NotSimplicial("lift start does not lie over the path start");
    std::vector<int> out{start};
    for (std::size_t i = 1; i < path.size(); ++i) {
        auto it = step.find({out.back(), path[i]});
        if (it == step.end()) throw NotSimplicial("path step has no lift");
        out.push_back(it->second);
    }
    return out;
}

inline DoubleCover double_cover(const SurfaceModel& base)
{
    if (is_orientable_kind(base.kind)) throw AlreadyOrientable(std::string(to_string(base.kind)) + " is orientable");
    const SimplicialComplex& K = base.complex;
    const auto& tris = K.simplices(2);
    const std::size_t T = tris.size();
    std::vector<std::size_t> parent(T * 6), sheet_parent(T * 2);
    std::iota(parent.begin(), parent.end(), 0);
    std::iota(sheet_parent.begin(), sheet_parent.end(), 0);
    std::function<std::size_t(std::vector<std::size_t>&, std::size_t)> find = [&](std::vector<std::size_t>& p,
                                                                                   std::size_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    };
    auto corner = [](std::size_t t, int s, std::size_t pos) { return (t * 2 + static_cast<std::size_t>(s)) * 3 + pos; };

    // edge -> incident (triangle, opposite position)
    std::map<Simplex, std::vector<std::pair<std::size_t, std::size_t>>> inc;
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < 3; ++j) inc[face_without(tris[t], j)].push_back({t, j});
    for (auto& [e, list] : inc) {
        if (list.size() > 2) throw NotSimplicial("edge " + simplex_to_string(e) + " lies in more than two triangles");
        if (list.size() < 2) continue;
        auto [t1, j1] = list[0];
        auto [t2, j2] = list[1];
        const int o1 = j1 % 2 == 0 ? 1 : -1, o2 = j2 % 2 == 0 ? 1 : -1;
        for (int s1 = 0; s1 < 2; ++s1) {
            const int s2 = o1 == o2 ? 1 - s1 : s1;
            sheet_parent[find(sheet_parent, t1 * 2 + static_cast<std::size_t>(s1))] =
                find(sheet_parent, t2 * 2 + static_cast<std::size_t>(s2));
            for (int v : e) {
                auto p1 = static_cast<std::size_t>(std::find(tris[t1].begin(), tris[t1].end(), v) - tris[t1].begin());
                auto p2 = static_cast<std::size_t>(std::find(tris[t2].begin(), tris[t2].end(), v) - tris[t2].begin());
                parent[find(parent, corner(t1, s1, p1))] = find(parent, corner(t2, s2, p2));
            }
        }
    }
    std::set<std::size_t> sheets;
    for (std::size_t x = 0; x < T * 2; ++x) sheets.insert(find(sheet_parent, x));
    if (sheets.size() != 1) throw AlreadyOrientable("orientation cover is disconnected");

    // name the two lifts of v as 2v (the class of the first corner on sheet 0) and 2v+1
    std::vector<long> first_class(K.vertex_count(), -1);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t p = 0; p < 3; ++p) {
            auto v = static_cast<std::size_t>(tris[t][p]);
            if (first_class[v] < 0) first_class[v] = static_cast<long>(find(parent, corner(t, 0, p)));
        }
    std::vector<Simplex> cover_tris;
    std::map<std::pair<std::size_t, long>, int> seen;
    for (std::size_t t = 0; t < T; ++t)
        for (int s = 0; s < 2; ++s) {
            Simplex c;
            for (std::size_t p = 0; p < 3; ++p) {
                auto v = static_cast<std::size_t>(tris[t][p]);
                long cls = static_cast<long>(find(parent, corner(t, s, p)));
                int x = cls == first_class[v] ? 0 : 1;
                auto key = std::make_pair(v, cls);
                auto it = seen.find(key);
                if (it == seen.end()) {
                    for (auto& [k2, x2] : seen)
                        if (k2.first == v && x2 == x) throw NotSimplicial("vertex star is not a disc");
                    seen[key] = x;
                }
                c.push_back(2 * static_cast<int>(v) + x);
            }
            cover_tris.push_back(c);
        }
    SimplicialComplex cover = SimplicialComplex::from_maximal(2 * K.vertex_count(), cover_tris);
    if (cover.count(2) != 2 * T) throw NotSimplicial("cover triangles collapsed");

    std::vector<int> proj, inv;
    for (std::size_t v = 0; v < cover.vertex_count(); ++v) {
        proj.push_back(static_cast<int>(v / 2));
        inv.push_back(static_cast<int>(v ^ 1u));
    }
    DoubleCover out;
    out.projection = SimplicialMap(cover, K, proj);
    out.involution = SimplicialMap(cover, cover, inv);
    out.cover.complex = cover;
    switch (base.kind) {
    case SurfaceKind::rp2: out.cover.kind = SurfaceKind::sphere; break;
    case SurfaceKind::klein: out.cover.kind = SurfaceKind::orientable; out.cover.genus = 1; break;
    case SurfaceKind::crosscap1: out.cover.kind = SurfaceKind::orientable; out.cover.genus = 2 * base.genus; break;
    case SurfaceKind::crosscap2: out.cover.kind = SurfaceKind::orientable; out.cover.genus = 2 * base.genus + 1; break;
    case SurfaceKind::moebius: out.cover.kind = SurfaceKind::cylinder; break;
    default: break;
    }
    for (auto& c : base.marked_cycles) {
        std::vector<int> lift = lift_path(out.projection, c.vertices, 2 * c.vertices.front());
        std::string name = "lift(" + c.name + ")";
        if (lift.back() != lift.front()) {
            std::vector<int> again = lift_path(out.projection, c.vertices, lift.back());
            lift.insert(lift.end(), again.begin() + 1, again.end());
            name = "lift(" + c.name + "^2)";
        }
        out.cover.marked_cycles.push_back({name, lift});
    }
    return out;
}

} // namespace cohomolab
