#pragma once

// Finite simplicial complexes, pairs and maps; cones, suspensions, joins,
// products and the compactified pairs used for Borel-Moore homology.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "complexes.hpp"

namespace cohomolab {

using Simplex = std::vector<int>;

inline std::string simplex_to_string(const Simplex& s)
{
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "]";
}

inline Simplex face_without(const Simplex& s, std::size_t j)
{
    Simplex f;
    f.reserve(s.size() - 1);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (i != j) f.push_back(s[i]);
    return f;
}

// Sign attached to the face obtained by removing the vertex at 0-based
// position j: (-1)^k with k = j+1 the 1-based position.
inline int boundary_sign(std::size_t j) { return j % 2 == 0 ? -1 : 1; }

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    // The list must be closed under faces; vertices are the listed 0-simplices.
    SimplicialComplex(std::size_t vertex_count, const std::vector<Simplex>& simplices) : n_(vertex_count)
    {
        for (auto& s : simplices) insert_checked(s);
        finalize();
        for (auto& level : simp_)
            for (auto& s : level)
                for (std::size_t j = 0; s.size() > 1 && j < s.size(); ++j)
                    if (!contains(face_without(s, j)))
                        throw NotFaceClosed("face " + simplex_to_string(face_without(s, j)) + " of " +
                                            simplex_to_string(s) + " is missing");
    }

    static SimplicialComplex from_maximal(std::size_t vertex_count, const std::vector<Simplex>& maximal)
    {
        std::set<Simplex> all;
        for (auto s : maximal) {
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw NotSimplicial("repeated vertex in " + simplex_to_string(s));
            const std::size_t k = s.size();
            if (k == 0 || k > 30) throw NotSimplicial("bad simplex size");
            for (unsigned long mask = 1; mask < (1ul << k); ++mask) {
                Simplex f;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask & (1ul << i)) f.push_back(s[i]);
                all.insert(f);
            }
        }
        return SimplicialComplex(vertex_count, std::vector<Simplex>(all.begin(), all.end()));
    }

    std::size_t vertex_count() const { return n_; }
    int dimension() const { return static_cast<int>(simp_.size()) - 1; }
    std::size_t count(int k) const
    {
        return k >= 0 && k < static_cast<int>(simp_.size()) ? simp_[static_cast<std::size_t>(k)].size() : 0;
    }
    const std::vector<Simplex>& simplices(int k) const
    {
        static const std::vector<Simplex> none;
        return k >= 0 && k < static_cast<int>(simp_.size()) ? simp_[static_cast<std::size_t>(k)] : none;
    }
    std::vector<Simplex> all_simplices() const
    {
        std::vector<Simplex> out;
        for (auto& level : simp_) out.insert(out.end(), level.begin(), level.end());
        return out;
    }
    std::optional<std::size_t> index_of(const Simplex& s) const
    {
        if (s.empty() || s.size() > idx_.size()) return std::nullopt;
        auto& m = idx_[s.size() - 1];
        auto it = m.find(s);
        if (it == m.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Simplex& s) const
    {
        if (s.empty() || s.size() > simp_.size()) return false;
        return std::binary_search(simp_[s.size() - 1].begin(), simp_[s.size() - 1].end(), s);
    }
    bool empty() const { return simp_.empty(); }
    std::size_t total_count() const
    {
        std::size_t c = 0;
        for (auto& l : simp_) c += l.size();
        return c;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return a.n_ == b.n_ && a.simp_ == b.simp_;
    }

private:
    void insert_checked(const Simplex& s)
    {
        if (s.empty()) throw NotSimplicial("empty simplex");
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || static_cast<std::size_t>(s[i]) >= n_)
                throw NotSimplicial("vertex " + std::to_string(s[i]) + " out of range in " + simplex_to_string(s));
            if (i && s[i - 1] >= s[i])
                throw NotSimplicial("vertices not strictly increasing in " + simplex_to_string(s));
        }
        if (simp_.size() < s.size()) simp_.resize(s.size());
        simp_[s.size() - 1].push_back(s);
    }
    void finalize()
    {
        idx_.assign(simp_.size(), {});
        for (std::size_t k = 0; k < simp_.size(); ++k) {
            auto& level = simp_[k];
            std::sort(level.begin(), level.end());
            if (std::adjacent_find(level.begin(), level.end()) != level.end())
                throw NotSimplicial("duplicate simplex " +
                                    simplex_to_string(*std::adjacent_find(level.begin(), level.end())));
            for (std::size_t i = 0; i < level.size(); ++i) idx_[k][level[i]] = i;
        }
        while (!simp_.empty() && simp_.back().empty()) simp_.pop_back();
        idx_.resize(simp_.size());
    }

    std::size_t n_ = 0;
    std::vector<std::vector<Simplex>> simp_;
    std::vector<std::map<Simplex, std::size_t>> idx_;
};

// Boundary matrix d_k : C_k -> C_{k-1} restricted to the given index sets.
inline IntMatrix boundary_matrix(const SimplicialComplex& K, int k)
{
    IntMatrix M(K.count(k - 1), K.count(k));
    if (k <= 0) return M;
    const auto& cells = K.simplices(k);
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t j = 0; j < cells[c].size(); ++j) {
            auto r = K.index_of(face_without(cells[c], j));
            if (!r) throw NotFaceClosed("missing face of " + simplex_to_string(cells[c]));
            M(*r, c) = boundary_sign(j);
        }
    return M;
}

inline ChainComplex chain_complex_of(const SimplicialComplex& K)
{
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> d;
    for (int k = 0; k <= K.dimension(); ++k) {
        ranks.push_back(K.count(k));
        d.push_back(boundary_matrix(K, k));
    }
    return ChainComplex(false, 0, ranks, d);
}

// Coboundary on chains by coface enumeration: a k-simplex i goes to the signed
// sum of the (k+1)-simplices j containing it, sign (-1)^(position of the
// vertex of j not in i, counted from 1). Checked against the transposed boundary.
inline IntMatrix coboundary_of(const SimplicialComplex& K, int k)
{
    IntMatrix M(K.count(k + 1), K.count(k));
    const auto& cells = K.simplices(k);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Simplex& s = cells[c];
        for (std::size_t v = 0; v < K.vertex_count(); ++v) {
            const int vi = static_cast<int>(v);
            if (std::binary_search(s.begin(), s.end(), vi)) continue;
            Simplex t = s;
            auto pos = std::lower_bound(t.begin(), t.end(), vi);
            const std::size_t rho = static_cast<std::size_t>(pos - t.begin()) + 1;
            t.insert(pos, vi);
            if (auto r = K.index_of(t)) M(*r, c) = rho % 2 == 0 ? 1 : -1;
        }
    }
    if (!(M == boundary_matrix(K, k + 1).transpose()))
        throw NotFaceClosed("coboundary disagrees with transposed boundary in degree " + std::to_string(k));
    return M;
}

// ---------------------------------------------------------------------------
// Pairs
// ---------------------------------------------------------------------------

struct SimplicialPair {
    SimplicialComplex total, sub;

    SimplicialPair() = default;
    SimplicialPair(SimplicialComplex t, SimplicialComplex s) : total(std::move(t)), sub(std::move(s))
    {
        for (auto& x : sub.all_simplices())
            if (!total.contains(x)) throw NotASubcomplex("simplex " + simplex_to_string(x) + " is not in the total complex");
    }
};

// Chain complex of C(total)/C(sub): generators are the simplices outside sub.
inline ChainComplex relative_chain_complex(const SimplicialPair& P)
{
    const auto& K = P.total;
    std::vector<std::vector<std::size_t>> keep(static_cast<std::size_t>(std::max(K.dimension() + 1, 0)));
    std::vector<std::map<std::size_t, std::size_t>> pos(keep.size());
    for (int k = 0; k <= K.dimension(); ++k)
        for (std::size_t i = 0; i < K.count(k); ++i)
            if (!P.sub.contains(K.simplices(k)[i])) {
                pos[static_cast<std::size_t>(k)][i] = keep[static_cast<std::size_t>(k)].size();
                keep[static_cast<std::size_t>(k)].push_back(i);
            }
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> d;
    for (int k = 0; k <= K.dimension(); ++k) {
        const auto& cols = keep[static_cast<std::size_t>(k)];
        ranks.push_back(cols.size());
        IntMatrix M(k > 0 ? keep[static_cast<std::size_t>(k - 1)].size() : 0, cols.size());
        for (std::size_t c = 0; k > 0 && c < cols.size(); ++c) {
            const Simplex& s = K.simplices(k)[cols[c]];
            for (std::size_t j = 0; j < s.size(); ++j) {
                auto f = *K.index_of(face_without(s, j));
                auto it = pos[static_cast<std::size_t>(k - 1)].find(f);
                if (it != pos[static_cast<std::size_t>(k - 1)].end()) M(it->second, c) = boundary_sign(j);
            }
        }
        d.push_back(M);
    }
    return ChainComplex(false, 0, ranks, d);
}

inline FPAbelianGroup pair_homology(const SimplicialPair& P, int n, Coefficients k = Coefficients::integers,
                                    bool reduced = false)
{
    if (P.sub.empty()) return homology(chain_complex_of(P.total), n, k, reduced);
    return homology(relative_chain_complex(P), n, k, false);
}

inline FPAbelianGroup simplicial_homology(const SimplicialComplex& K, int n, Coefficients k = Coefficients::integers,
                                          bool reduced = false)
{
    return homology(chain_complex_of(K), n, k, reduced);
}

inline FPAbelianGroup simplicial_cohomology(const SimplicialComplex& K, int n, Coefficients k = Coefficients::integers)
{
    return homology(cochain_dual(chain_complex_of(K)), n, k, false);
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

struct SimplicialMap {
    SimplicialComplex source, target;
    std::vector<int> vertex_map;

    SimplicialMap() = default;
    SimplicialMap(SimplicialComplex s, SimplicialComplex t, std::vector<int> vm)
        : source(std::move(s)), target(std::move(t)), vertex_map(std::move(vm))
    {
        if (vertex_map.size() != source.vertex_count()) throw DimensionMismatch("vertex map length");
        for (auto& x : source.all_simplices()) {
            Simplex img = image(x);
            if (!target.contains(img))
                throw NotSimplicial("image of " + simplex_to_string(x) + " is not a simplex of the target");
        }
    }

    int operator()(int v) const { return vertex_map[static_cast<std::size_t>(v)]; }

    // Sorted vertex set of the image (possibly degenerate).
    Simplex image(const Simplex& s) const
    {
        Simplex img;
        for (int v : s) img.push_back(vertex_map[static_cast<std::size_t>(v)]);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        return img;
    }
};

// Sign of the permutation sorting seq (seq must have distinct entries).
inline int sort_sign(std::vector<int> seq)
{
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            if (seq[j] < seq[i]) sign = -sign;
    return sign;
}

inline IntMatrix map_component(const SimplicialMap& f, int k)
{
    IntMatrix M(f.target.count(k), f.source.count(k));
    const auto& cells = f.source.simplices(k);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<int> img;
        for (int v : cells[c]) img.push_back(f(v));
        Simplex sorted = img;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
        M(*f.target.index_of(sorted), c) = sort_sign(img);
    }
    return M;
}

inline ChainMap chain_map_of(const SimplicialMap& f)
{
    ChainMap m{chain_complex_of(f.source), chain_complex_of(f.target), {}};
    for (int k = 0; k <= f.source.dimension(); ++k) m.components[k] = map_component(f, k);
    return m;
}

inline SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f)
{
    std::vector<int> vm;
    for (int v : f.vertex_map) vm.push_back(g(v));
    return SimplicialMap(f.source, g.target, vm);
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// Join with L relabelled after the vertices of K.
inline SimplicialComplex join(const SimplicialComplex& K, const SimplicialComplex& L)
{
    const int off = static_cast<int>(K.vertex_count());
    std::vector<Simplex> all = K.all_simplices();
    auto Ls = L.all_simplices();
    for (auto t : Ls) {
        for (int& v : t) v += off;
        all.push_back(t);
    }
    for (auto& s : K.all_simplices())
        for (auto t : Ls) {
            Simplex u = s;
            for (int v : t) u.push_back(v + off);
            all.push_back(u);
        }
    return SimplicialComplex(K.vertex_count() + L.vertex_count(), all);
}

inline SimplicialComplex points(std::size_t n)
{
    std::vector<Simplex> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back({static_cast<int>(i)});
    return SimplicialComplex(n, s);
}

inline SimplicialComplex cone(const SimplicialComplex& K) { return join(K, points(1)); }
inline SimplicialComplex unreduced_suspension(const SimplicialComplex& K) { return join(K, points(2)); }

inline SimplicialComplex full_simplex(int n)
{
    Simplex s;
    for (int i = 0; i <= n; ++i) s.push_back(i);
    return SimplicialComplex::from_maximal(static_cast<std::size_t>(n + 1), {s});
}

// S^n as the boundary of the (n+1)-simplex; S^0 is two points.
inline SimplicialComplex sphere(int n)
{
    std::vector<Simplex> facets;
    Simplex all;
    for (int i = 0; i <= n + 1; ++i) all.push_back(i);
    for (std::size_t j = 0; j < all.size(); ++j) facets.push_back(face_without(all, j));
    return SimplicialComplex::from_maximal(static_cast<std::size_t>(n + 2), facets);
}

inline SimplicialComplex subcomplex(const SimplicialComplex& K, const std::vector<Simplex>& maximal)
{
    return SimplicialComplex::from_maximal(K.vertex_count(), maximal);
}

// Staircase triangulation of K x L; vertex (a, b) gets id a*|V(L)| + b.
inline SimplicialComplex product(const SimplicialComplex& K, const SimplicialComplex& L)
{
    auto facets = [](const SimplicialComplex& X) {
        std::vector<Simplex> out;
        auto all = X.all_simplices();
        std::set<Simplex> allset(all.begin(), all.end());
        for (auto& s : all) {
            bool maximal = true;
            for (std::size_t v = 0; v < X.vertex_count() && maximal; ++v) {
                if (std::binary_search(s.begin(), s.end(), static_cast<int>(v))) continue;
                Simplex t = s;
                t.insert(std::lower_bound(t.begin(), t.end(), static_cast<int>(v)), static_cast<int>(v));
                if (allset.count(t)) maximal = false;
            }
            if (maximal) out.push_back(s);
        }
        return out;
    };
    const int nl = static_cast<int>(L.vertex_count());
    std::vector<Simplex> maximal;
    for (auto& s : facets(K))
        for (auto& t : facets(L)) {
            // lattice paths from (0,0) to (|s|-1, |t|-1)
            const std::size_t p = s.size() - 1, q = t.size() - 1;
            for (unsigned long mask = 0; mask < (1ul << (p + q)); ++mask) {
                if (static_cast<std::size_t>(__builtin_popcountl(mask)) != p) continue;
                std::size_t i = 0, j = 0;
                Simplex path{s[0] * nl + t[0]};
                for (std::size_t step = 0; step < p + q; ++step) {
                    if (mask & (1ul << step))
                        ++i;
                    else
                        ++j;
                    path.push_back(s[i] * nl + t[j]);
                }
                maximal.push_back(path);
            }
        }
    if (maximal.empty()) return SimplicialComplex(K.vertex_count() * L.vertex_count(), {});
    return SimplicialComplex::from_maximal(K.vertex_count() * L.vertex_count(), maximal);
}

// A compactification presentation (Kbar, L) read as the pair whose relative
// homology is the Borel-Moore homology of Kbar minus L.
inline SimplicialPair one_point_pair(const SimplicialComplex& compactified, const SimplicialComplex& infinity)
{
    return SimplicialPair(compactified, infinity);
}

inline FPAbelianGroup borel_moore(const SimplicialPair& P, int n, Coefficients k = Coefficients::integers)
{
    return pair_homology(P, n, k, false);
}

// R^n: (S^n, {infinity}).
inline SimplicialPair euclidean_space_bm(int n)
{
    SimplicialComplex S = sphere(n);
    return SimplicialPair(S, SimplicialComplex(S.vertex_count(), {{0}}));
}

// R^n minus the origin: (S^n, {N, S}).
inline SimplicialPair punctured_space_bm(int n)
{
    SimplicialComplex S = sphere(n);
    return SimplicialPair(S, SimplicialComplex(S.vertex_count(), {{0}, {1}}));
}

// R^m x closed (n-m)-disc presented as (S^m x D, {infinity} x D).
inline SimplicialPair modified_bm_product(int m, int n)
{
    if (m < 0 || n < m) throw OutOfRange("need 0 <= m <= n");
    SimplicialComplex S = sphere(m), D = full_simplex(n - m);
    SimplicialComplex P = product(S, D);
    std::vector<Simplex> inf;
    Simplex base;
    const int nl = static_cast<int>(D.vertex_count());
    for (int b = 0; b < nl; ++b) base.push_back(b); // vertex 0 of S times D
    inf.push_back(base);
    return SimplicialPair(P, SimplicialComplex::from_maximal(P.vertex_count(), inf));
}

} // namespace cohomolab
