#pragma once

// Chain and cochain complexes of free abelian groups, their homology over
// Z, Q and Z_2, chain maps and induced maps.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exactalg.hpp"

namespace cohomolab {

enum class Coefficients { integers, rationals, mod2 };

inline const char* to_string(Coefficients k)
{
    switch (k) {
    case Coefficients::integers: return "z";
    case Coefficients::rationals: return "q";
    case Coefficients::mod2: return "z2";
    }
    return "?";
}

// Degrees lo .. lo+ranks.size()-1 are stored; everything else has rank 0.
// diff[i] is the differential leaving degree lo+i: towards lo+i-1 for chain
// complexes, towards lo+i+1 for cochain complexes.
struct ChainComplex {
    bool cochain = false;
    int lo = 0;
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> diff;

    ChainComplex() = default;
    ChainComplex(bool is_cochain, int low, std::vector<std::size_t> r, std::vector<IntMatrix> d)
        : cochain(is_cochain), lo(low), ranks(std::move(r)), diff(std::move(d))
    {
        if (diff.size() != ranks.size()) throw InvalidComplex("one differential per stored degree expected");
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            const int n = lo + static_cast<int>(i);
            const std::size_t tr = rank(cochain ? n + 1 : n - 1);
            if (diff[i].cols() != ranks[i] || diff[i].rows() != tr)
                throw InvalidComplex("differential out of degree " + std::to_string(n) + " has shape " +
                                     std::to_string(diff[i].rows()) + "x" + std::to_string(diff[i].cols()) +
                                     ", expected " + std::to_string(tr) + "x" + std::to_string(ranks[i]));
        }
    }

    int hi() const { return lo + static_cast<int>(ranks.size()) - 1; }
    bool stores(int n) const { return n >= lo && n <= hi(); }
    std::size_t rank(int n) const { return stores(n) ? ranks[static_cast<std::size_t>(n - lo)] : 0; }
    int target_degree(int n) const { return cochain ? n + 1 : n - 1; }
    int source_degree(int n) const { return cochain ? n - 1 : n + 1; }

    // Differential leaving degree n.
    IntMatrix outgoing(int n) const
    {
        if (stores(n)) return diff[static_cast<std::size_t>(n - lo)];
        return IntMatrix(rank(target_degree(n)), rank(n));
    }
    // Differential arriving in degree n.
    IntMatrix incoming(int n) const { return outgoing(source_degree(n)); }
};

struct ValidationReport {
    bool ok = true;
    std::optional<int> degree;
    std::string message;
    explicit operator bool() const { return ok; }
};

inline ValidationReport validate_complex(const ChainComplex& C)
{
    ValidationReport rep;
    for (int n = C.lo; n <= C.hi(); ++n) {
        // d leaving n, followed by d leaving its target
        const int m = C.target_degree(n);
        IntMatrix comp = C.outgoing(m) * C.outgoing(n);
        if (!comp.is_zero()) {
            rep.ok = false;
            rep.degree = n;
            rep.message = "composite of differentials out of degree " + std::to_string(n) + " is nonzero";
            return rep;
        }
    }
    return rep;
}

inline void require_valid(const ChainComplex& C)
{
    auto rep = validate_complex(C);
    if (!rep) throw InvalidComplex(rep.message);
}

inline ChainComplex cochain_dual(const ChainComplex& C)
{
    std::vector<IntMatrix> d;
    for (int n = C.lo; n <= C.hi(); ++n) d.push_back(C.incoming(n).transpose());
    return ChainComplex(!C.cochain, C.lo, C.ranks, d);
}

// Augmented complex: an extra rank-one group in degree -1 joined to degree 0 by
// the sum-of-coefficients map (or its dual).
inline ChainComplex augmented(const ChainComplex& C)
{
    const int lo = std::min(C.lo, -1);
    const int hi = std::max(C.hi(), 0);
    std::vector<std::size_t> ranks;
    for (int n = lo; n <= hi; ++n) ranks.push_back(n == -1 ? 1 + C.rank(-1) : C.rank(n));
    if (C.rank(-1) != 0) throw InvalidComplex("augmentation needs an empty degree -1");
    std::vector<IntMatrix> d;
    const std::size_t r0 = C.rank(0);
    for (int n = lo; n <= hi; ++n) {
        const int t = C.target_degree(n);
        const std::size_t rt = t == -1 ? 1 : C.rank(t);
        const std::size_t rn = n == -1 ? 1 : C.rank(n);
        IntMatrix M(rt, rn);
        if (!C.cochain && n == 0) {
            for (std::size_t j = 0; j < r0; ++j) M(0, j) = 1;
        } else if (C.cochain && n == -1) {
            for (std::size_t i = 0; i < r0; ++i) M(i, 0) = 1;
        } else if (n != -1 && t != -1) {
            M = C.outgoing(n);
        }
        d.push_back(M);
    }
    return ChainComplex(C.cochain, lo, ranks, d);
}

inline long long euler_characteristic(const ChainComplex& C)
{
    require_valid(C);
    long long chi = 0;
    for (int n = C.lo; n <= C.hi(); ++n) chi += (n % 2 == 0 ? 1 : -1) * static_cast<long long>(C.rank(n));
    return chi;
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

namespace detail {

inline FPAbelianGroup homology_from_invariants(std::size_t dim, const std::vector<Integer>& out_inv,
                                               const std::vector<Integer>& in_inv, Coefficients k)
{
    switch (k) {
    case Coefficients::integers: {
        std::vector<Integer> tors;
        for (auto& d : in_inv)
            if (d > 1) tors.push_back(d);
        return FPAbelianGroup(dim - out_inv.size() - in_inv.size(), tors);
    }
    case Coefficients::rationals: return FPAbelianGroup(dim - out_inv.size() - in_inv.size(), {});
    case Coefficients::mod2: {
        std::size_t r_out = 0, r_in = 0;
        for (auto& d : out_inv)
            if ((d & 1) != 0) ++r_out;
        for (auto& d : in_inv)
            if ((d & 1) != 0) ++r_in;
        return FPAbelianGroup(0, std::vector<Integer>(dim - r_out - r_in, Integer(2)));
    }
    }
    return {};
}

} // namespace detail

inline FPAbelianGroup homology(const ChainComplex& C, int n, Coefficients k = Coefficients::integers,
                               bool reduced = false)
{
    if (reduced) return homology(augmented(C), n, k, false);
    require_valid(C);
    return detail::homology_from_invariants(C.rank(n), invariant_factors(C.outgoing(n)),
                                            invariant_factors(C.incoming(n)), k);
}

// Homology in every stored degree; each differential is reduced once.
inline std::map<int, FPAbelianGroup> homology_all(const ChainComplex& C, Coefficients k = Coefficients::integers,
                                                  bool reduced = false)
{
    if (reduced) return homology_all(augmented(C), k, false);
    require_valid(C);
    std::map<int, std::vector<Integer>> inv;
    for (int n = C.lo; n <= C.hi(); ++n) inv[n] = invariant_factors(C.outgoing(n));
    auto inv_at = [&](int n) {
        auto it = inv.find(n);
        return it == inv.end() ? std::vector<Integer>{} : it->second;
    };
    std::map<int, FPAbelianGroup> out;
    for (int n = C.lo; n <= C.hi(); ++n)
        out[n] = detail::homology_from_invariants(C.rank(n), inv_at(n), inv_at(C.source_degree(n)), k);
    return out;
}

// Explicit numerator/denominator lattices for H_n with generators. Over Z_2 the
// group is realized as {x : dx = 0 mod 2} / (im d + 2 Z^N); over Q the integral
// lattices are used and torsion is discarded by the callers.
inline SubquotientPresentation homology_lattices(const ChainComplex& C, int n, Coefficients k)
{
    const std::size_t N = C.rank(n);
    IntMatrix out = C.outgoing(n), in = C.incoming(n);
    if (k != Coefficients::mod2) {
        IntMatrix Z = out.rows() ? kernel_basis(out) : IntMatrix::identity(N);
        return {Z, in};
    }
    const std::size_t M = out.rows();
    IntMatrix Z;
    if (M == 0) {
        Z = IntMatrix::identity(N);
    } else {
        IntMatrix two(M, M);
        for (std::size_t i = 0; i < M; ++i) two(i, i) = 2;
        IntMatrix K = kernel_basis(hcat(out, two));
        Z = K.row_range(0, N);
    }
    IntMatrix twoN(N, N);
    for (std::size_t i = 0; i < N; ++i) twoN(i, i) = 2;
    return {Z, hcat(in, twoN)};
}

class HomologyGroup {
public:
    HomologyGroup() = default;
    HomologyGroup(const ChainComplex& C, int n, Coefficients k) : k_(k)
    {
        require_valid(C);
        lat_ = homology_lattices(C, n, k);
        sq_ = Subquotient(lat_.Z, lat_.B);
        group_ = sq_.group();
        if (k == Coefficients::rationals) group_ = FPAbelianGroup(group_.free_rank, {});
    }
    const FPAbelianGroup& group() const { return group_; }
    const Subquotient& subquotient() const { return sq_; }
    const SubquotientPresentation& lattices() const { return lat_; }
    Coefficients coefficients() const { return k_; }
    // Chain-level representative of the i-th generator.
    IntVector generator(std::size_t i) const { return sq_.generators().column(i); }
    std::size_t torsion_count() const { return sq_.group().torsion.size(); }

    // Coordinates of a cycle; over Q only the free coordinates are returned.
    IntVector coordinates(const IntVector& cycle) const
    {
        IntVector c = sq_.coordinates(cycle);
        if (k_ != Coefficients::rationals) return c;
        return IntVector(c.begin() + static_cast<std::ptrdiff_t>(torsion_count()), c.end());
    }

private:
    Coefficients k_ = Coefficients::integers;
    SubquotientPresentation lat_;
    Subquotient sq_;
    FPAbelianGroup group_;
};

// ---------------------------------------------------------------------------
// Chain maps
// ---------------------------------------------------------------------------

struct ChainMap {
    ChainComplex source, target;
    std::map<int, IntMatrix> components; // missing degrees are zero

    IntMatrix component(int n) const
    {
        auto it = components.find(n);
        if (it != components.end()) return it->second;
        return IntMatrix(target.rank(n), source.rank(n));
    }
};

inline ValidationReport check_chain_map(const ChainMap& f)
{
    ValidationReport rep;
    if (f.source.cochain != f.target.cochain) {
        rep.ok = false;
        rep.message = "source and target have different variance";
        return rep;
    }
    for (auto& [n, M] : f.components)
        if (M.rows() != f.target.rank(n) || M.cols() != f.source.rank(n)) {
            rep.ok = false;
            rep.degree = n;
            rep.message = "component in degree " + std::to_string(n) + " has the wrong shape";
            return rep;
        }
    const int lo = std::min(f.source.lo, f.target.lo) - 1;
    const int hi = std::max(f.source.hi(), f.target.hi()) + 1;
    for (int n = lo; n <= hi; ++n) {
        const int m = f.source.target_degree(n);
        if (!(f.target.outgoing(n) * f.component(n) == f.component(m) * f.source.outgoing(n))) {
            rep.ok = false;
            rep.degree = n;
            rep.message = "map does not commute with differentials in degree " + std::to_string(n);
            return rep;
        }
    }
    return rep;
}

inline GroupHom induced_map(const HomologyGroup& src, const HomologyGroup& dst, const IntMatrix& fn)
{
    const Subquotient& s = src.subquotient();
    IntMatrix M(dst.group().num_generators(), src.group().num_generators());
    const std::size_t skip = src.coefficients() == Coefficients::rationals ? src.torsion_count() : 0;
    for (std::size_t j = 0; j < M.cols(); ++j) {
        IntVector img = fn * s.generators().column(j + skip);
        IntVector c = dst.coordinates(img);
        for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
    }
    return GroupHom(src.group(), dst.group(), M);
}

inline GroupHom induced_map(const ChainMap& f, int n, Coefficients k = Coefficients::integers)
{
    auto rep = check_chain_map(f);
    if (!rep) throw NotChainMap(rep.message);
    HomologyGroup src(f.source, n, k), dst(f.target, n, k);
    return induced_map(src, dst, f.component(n));
}

// Degree of a map between homology n-spheres. Optional chain-level fundamental
// classes fix the generators; otherwise the canonical generators are used.
inline Integer degree_of_map(const ChainMap& f, int n, const std::optional<IntVector>& source_class = {},
                             const std::optional<IntVector>& target_class = {})
{
    auto rep = check_chain_map(f);
    if (!rep) throw NotChainMap(rep.message);
    HomologyGroup src(f.source, n, Coefficients::integers), dst(f.target, n, Coefficients::integers);
    const FPAbelianGroup Zgrp(1, {});
    if (src.group() != Zgrp) throw NotASphere("source H_" + std::to_string(n) + " is " + src.group().to_string());
    if (dst.group() != Zgrp) throw NotASphere("target H_" + std::to_string(n) + " is " + dst.group().to_string());
    IntVector gs = source_class ? *source_class : src.generator(0);
    Integer cs = src.coordinates(gs)[0];
    Integer ct = target_class ? dst.coordinates(*target_class)[0] : Integer(1);
    if (abs(cs) != 1 || abs(ct) != 1) throw NotASphere("supplied class is not a generator");
    // f(gs) = ci * g_t and the target class is ct * g_t with ct = +-1
    Integer ci = dst.coordinates(f.component(n) * gs)[0];
    return ci * ct;
}

} // namespace cohomolab
