#pragma once

// Spectral sequences of finitely filtered cochain complexes, double complexes,
// the axiomatic h(p,t) engine and the Atiyah-Hirzebruch spectral sequence of
// the skeleton filtration.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "simplicial.hpp"

namespace cohomolab {

// ---------------------------------------------------------------------------
// Filtered complexes
// ---------------------------------------------------------------------------

// Filtration by generators: F^p K^n is spanned by the generators of degree n
// with filtration index >= p. F^0 is everything and F^{length+1} is zero.
class FilteredComplex {
public:
    FilteredComplex() = default;
    FilteredComplex(ChainComplex complex, std::vector<std::vector<int>> filtration, std::optional<int> length = {})
        : c_(std::move(complex)), f_(std::move(filtration))
    {
        if (!c_.cochain) throw InvalidComplex("a filtered complex must be a cochain complex");
        require_valid(c_);
        if (f_.size() != c_.ranks.size()) throw DimensionMismatch("one filtration list per stored degree expected");
        int mx = 0;
        for (std::size_t i = 0; i < f_.size(); ++i) {
            if (f_[i].size() != c_.ranks[i])
                throw DimensionMismatch("filtration list of degree " + std::to_string(c_.lo + static_cast<int>(i)) +
                                        " has the wrong length");
            for (int p : f_[i]) {
                if (p < 0) throw OutOfRange("negative filtration index");
                mx = std::max(mx, p);
            }
        }
        l_ = length ? *length : mx;
        if (l_ < mx) throw OutOfRange("filtration index exceeds the declared length");
        for (int n = c_.lo; n <= c_.hi(); ++n) {
            IntMatrix d = c_.outgoing(n);
            for (std::size_t i = 0; i < d.rows(); ++i)
                for (std::size_t j = 0; j < d.cols(); ++j)
                    if (!d(i, j).is_zero() && filt(n + 1, i) < filt(n, j))
                        throw FiltrationNotPreserved("d sends generator " + std::to_string(j) + " of degree " +
                                                     std::to_string(n) + " (p=" + std::to_string(filt(n, j)) +
                                                     ") onto generator " + std::to_string(i) + " (p=" +
                                                     std::to_string(filt(n + 1, i)) + ")");
        }
    }

    const ChainComplex& complex() const { return c_; }
    const std::vector<std::vector<int>>& filtration() const { return f_; }
    int length() const { return l_; }
    int lo() const { return c_.lo; }
    int hi() const { return c_.hi(); }
    std::size_t rank(int n) const { return c_.rank(n); }

    int filt(int n, std::size_t k) const { return f_[static_cast<std::size_t>(n - c_.lo)][k]; }

    // Generators of degree n with a <= filtration < b.
    std::vector<std::size_t> indices(int n, int a, int b) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < rank(n); ++k)
            if (filt(n, k) >= a && filt(n, k) < b) out.push_back(k);
        return out;
    }

    IntMatrix inclusion(int n, const std::vector<std::size_t>& idx) const
    {
        IntMatrix M(rank(n), idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) M(idx[j], j) = 1;
        return M;
    }

    // Basis of F^p K^n as columns in K^n.
    IntMatrix F(int n, int p) const { return inclusion(n, indices(n, p, l_ + 2)); }

    // Z_r^p K^n = {a in F^p K^n : d a in F^{p+r} K^{n+1}}; Z_r = F^p for r <= 0.
    IntMatrix Z(int n, int p, int r) const
    {
        auto S = indices(n, p, l_ + 2);
        if (r <= 0) return inclusion(n, S);
        auto Q = indices(n + 1, -1, p + r);
        if (Q.empty() || S.empty()) return inclusion(n, S);
        IntMatrix M = c_.outgoing(n).select_rows(Q).select_columns(S);
        return inclusion(n, S) * kernel_basis(M);
    }

    // d(Z_r^p K^{n-1}) as columns in K^n.
    IntMatrix dZ(int n, int p, int r) const
    {
        if (!c_.stores(n - 1) || !c_.stores(n)) return IntMatrix(rank(n), 0);
        return c_.incoming(n) * Z(n - 1, p, r);
    }

    // The subcomplex F^p with its inclusion columns per degree.
    ChainComplex sub(int p) const
    {
        std::vector<std::size_t> ranks;
        std::vector<IntMatrix> d;
        for (int n = lo(); n <= hi(); ++n) {
            auto S = indices(n, p, l_ + 2);
            auto T = indices(n + 1, p, l_ + 2);
            ranks.push_back(S.size());
            d.push_back(c_.stores(n + 1) ? c_.outgoing(n).select_rows(T).select_columns(S) : IntMatrix(0, S.size()));
        }
        return ChainComplex(true, lo(), ranks, d);
    }

private:
    ChainComplex c_;
    std::vector<std::vector<int>> f_;
    int l_ = 0;
};

// ---------------------------------------------------------------------------
// Pages
// ---------------------------------------------------------------------------

// An entry is Z/B for explicit lattices in an ambient coordinate space.
struct PageEntry {
    IntMatrix Z, B;
    Subquotient sq;
    PageEntry() = default;
    PageEntry(IntMatrix z, IntMatrix b) : Z(std::move(z)), B(std::move(b)), sq(Z, B) {}
    const FPAbelianGroup& group() const { return sq.group(); }
};

using Bidegree = std::pair<int, int>;

struct Page {
    int r = 0;
    std::map<Bidegree, PageEntry> entries;
    std::map<Bidegree, GroupHom> differentials;
    // false when the differentials of this page are not determined by the data
    bool differentials_known = true;

    FPAbelianGroup group(int p, int q) const
    {
        auto it = entries.find({p, q});
        return it == entries.end() ? FPAbelianGroup() : it->second.group();
    }

    GroupHom differential(int p, int q) const
    {
        if (!differentials_known)
            throw InsufficientData("d_" + std::to_string(r) + " is not determined by the coefficient data");
        auto it = differentials.find({p, q});
        if (it != differentials.end()) return it->second;
        return GroupHom::zero(group(p, q), group(p + r, q - r + 1));
    }

    bool same_entries(const Page& o) const
    {
        std::set<Bidegree> keys;
        for (auto& [k, e] : entries) keys.insert(k);
        for (auto& [k, e] : o.entries) keys.insert(k);
        for (auto& k : keys)
            if (group(k.first, k.second) != o.group(k.first, k.second)) return false;
        return true;
    }
};

inline PageEntry filtered_entry(const FilteredComplex& F, int p, int q, int r)
{
    const int n = p + q;
    IntMatrix num = F.Z(n, p, r);
    IntMatrix den = hcat(F.Z(n, p + 1, r - 1), F.dZ(n, p - r + 1, r - 1));
    return PageEntry(num, den);
}

// E_r^{p,q} = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}) in total degree p+q.
inline Page page(const FilteredComplex& F, int r)
{
    if (r < 0) throw OutOfRange("page index must be non-negative");
    Page P;
    P.r = r;
    const int rr = std::min(r, F.length() + 1);
    for (int n = F.lo(); n <= F.hi(); ++n)
        for (int p = 0; p <= F.length(); ++p) P.entries.emplace(Bidegree{p, n - p}, filtered_entry(F, p, n - p, rr));
    for (auto& [k, e] : P.entries) {
        const Bidegree t{k.first + r, k.second - r + 1};
        auto it = P.entries.find(t);
        if (it == P.entries.end()) continue;
        const int n = k.first + k.second;
        P.differentials.emplace(k, hom_between(F.complex().outgoing(n), e.sq, it->second.sq, e.B));
    }
    return P;
}

inline GroupHom differential(const FilteredComplex& F, int r, int p, int q)
{
    if (r < 0 || p < 0 || p > F.length() || p + q < F.lo() || p + q > F.hi())
        throw OutOfRange("no entry at (" + std::to_string(p) + "," + std::to_string(q) + ")");
    return page(F, r).differential(p, q);
}

struct PageCheck {
    bool ok = true;
    std::vector<std::string> problems;
    explicit operator bool() const { return ok; }
};

// d_r lands in bidegree (p+r, q-r+1) and squares to zero.
inline PageCheck check_page(const Page& P)
{
    PageCheck rep;
    if (!P.differentials_known) return rep;
    for (auto& [k, d] : P.differentials) {
        const auto [p, q] = k;
        if (d.domain() != P.group(p, q) || d.codomain() != P.group(p + P.r, q - P.r + 1)) {
            rep.ok = false;
            rep.problems.push_back("d at (" + std::to_string(p) + "," + std::to_string(q) + ") has the wrong bidegree");
            continue;
        }
        GroupHom next = P.differential(p + P.r, q - P.r + 1);
        if (!compose(next, d).is_zero()) {
            rep.ok = false;
            rep.problems.push_back("d^2 != 0 at (" + std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }
    return rep;
}

// Homology of (E_r, d_r) at (p,q) as a subquotient of the E_r coordinate space.
inline Subquotient page_homology(const Page& P, int p, int q)
{
    const FPAbelianGroup g = P.group(p, q);
    GroupHom out = P.differential(p, q);
    GroupHom in = P.differential(p - P.r, q + P.r - 1);
    return Subquotient(out.kernel_lattice(), hcat(in.matrix(), g.relations()));
}

// Computes page(F, r+1) and checks it against ker d_r / im d_r through the map
// sending each lift in Z_{r+1} to its class in E_r.
inline Page turn_page(const Page& P, const FilteredComplex& F)
{
    Page next = page(F, P.r + 1);
    for (auto& [k, e] : next.entries) {
        const auto [p, q] = k;
        const std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ") of page " + std::to_string(P.r + 1);
        auto cur = P.entries.find(k);
        if (cur == P.entries.end()) {
            if (!e.group().is_trivial()) throw PageMismatch("entry " + at + " has no predecessor");
            continue;
        }
        Subquotient H = page_homology(P, p, q);
        if (H.group() != e.group())
            throw PageMismatch("entry " + at + " is " + e.group().to_string() + " but ker/im is " + H.group().to_string());
        const IntMatrix& G = e.sq.generators();
        IntMatrix M(H.group().num_generators(), G.cols());
        try {
            for (std::size_t j = 0; j < G.cols(); ++j) {
                IntVector c = H.coordinates(cur->second.sq.coordinates(G.column(j)));
                for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
            }
            for (std::size_t j = 0; j < e.B.cols(); ++j) {
                IntVector c = H.coordinates(cur->second.sq.coordinates(e.B.column(j)));
                for (auto& x : c)
                    if (!x.is_zero()) throw PageMismatch("boundary lift at " + at + " survives in ker/im");
            }
            if (!GroupHom(e.group(), H.group(), M).is_isomorphism())
                throw PageMismatch("canonical map at " + at + " is not an isomorphism");
        } catch (const ContainmentViolation&) {
            throw PageMismatch("lift at " + at + " is not a d_r-cycle");
        } catch (const NotWellDefined&) {
            throw PageMismatch("canonical map at " + at + " is not well defined");
        }
    }
    return next;
}

struct GradedPiece {
    int p = 0, q = 0;
    FPAbelianGroup einf, graded;
};

struct LimitReport {
    bool ok = true;
    std::vector<GradedPiece> pieces;
    explicit operator bool() const { return ok; }
};

// F^p H^n is the image of H^n(F^p) in H^n(K).
inline IntMatrix filtered_cohomology_lattice(const FilteredComplex& F, const ChainComplex& sub, int n, int p)
{
    HomologyGroup h(sub, n, Coefficients::integers);
    IntMatrix incl = F.inclusion(n, F.indices(n, p, F.length() + 2));
    IntMatrix gens = incl * h.subquotient().generators();
    IntMatrix bd = F.complex().stores(n - 1) ? F.complex().incoming(n) : IntMatrix(F.rank(n), 0);
    return hcat(gens, bd);
}

inline LimitReport limit_vs_total(const FilteredComplex& F)
{
    LimitReport rep;
    Page inf = page(F, F.length() + 1);
    std::vector<ChainComplex> subs;
    for (int p = 0; p <= F.length() + 1; ++p) subs.push_back(F.sub(p));
    for (int n = F.lo(); n <= F.hi(); ++n)
        for (int p = 0; p <= F.length(); ++p) {
            IntMatrix num = filtered_cohomology_lattice(F, subs[static_cast<std::size_t>(p)], n, p);
            IntMatrix den = filtered_cohomology_lattice(F, subs[static_cast<std::size_t>(p + 1)], n, p + 1);
            GradedPiece gp{p, n - p, inf.group(p, n - p), subquotient(num, den)};
            if (gp.einf != gp.graded) rep.ok = false;
            rep.pieces.push_back(gp);
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Double complexes
// ---------------------------------------------------------------------------

// First quadrant; d1 raises p, d2 raises q, and d1 d2 + d2 d1 = 0.
struct DoubleComplex {
    std::map<Bidegree, std::size_t> ranks;
    std::map<Bidegree, IntMatrix> d1, d2; // keyed by source bidegree

    std::size_t rank(int p, int q) const
    {
        auto it = ranks.find({p, q});
        return it == ranks.end() ? 0 : it->second;
    }
    IntMatrix horizontal(int p, int q) const
    {
        auto it = d1.find({p, q});
        return it == d1.end() ? IntMatrix(rank(p + 1, q), rank(p, q)) : it->second;
    }
    IntMatrix vertical(int p, int q) const
    {
        auto it = d2.find({p, q});
        return it == d2.end() ? IntMatrix(rank(p, q + 1), rank(p, q)) : it->second;
    }
    int max_total() const
    {
        int m = -1;
        for (auto& [k, r] : ranks)
            if (r) m = std::max(m, k.first + k.second);
        return m;
    }
};

inline ValidationReport validate_double_complex(const DoubleComplex& D)
{
    auto fail = [](const std::string& m) {
        ValidationReport r;
        r.ok = false;
        r.message = m;
        return r;
    };
    for (auto& [k, r] : D.ranks)
        if (k.first < 0 || k.second < 0) return fail("entry outside the first quadrant");
    auto at = [](int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; };
    for (auto& [k, M] : D.d1)
        if (M.rows() != D.rank(k.first + 1, k.second) || M.cols() != D.rank(k.first, k.second))
            return fail("horizontal map at " + at(k.first, k.second) + " has the wrong shape");
    for (auto& [k, M] : D.d2)
        if (M.rows() != D.rank(k.first, k.second + 1) || M.cols() != D.rank(k.first, k.second))
            return fail("vertical map at " + at(k.first, k.second) + " has the wrong shape");
    for (auto& [k, r] : D.ranks) {
        const auto [p, q] = k;
        if (!(D.horizontal(p + 1, q) * D.horizontal(p, q)).is_zero()) return fail("d1^2 != 0 at " + at(p, q));
        if (!(D.vertical(p, q + 1) * D.vertical(p, q)).is_zero()) return fail("d2^2 != 0 at " + at(p, q));
        if (!(D.vertical(p + 1, q) * D.horizontal(p, q) + D.horizontal(p, q + 1) * D.vertical(p, q)).is_zero())
            return fail("d1 d2 + d2 d1 != 0 at " + at(p, q));
    }
    return {};
}

// Converts commuting squares to anticommuting ones by the sign (-1)^p on d2.
inline DoubleComplex from_commuting(DoubleComplex D)
{
    for (auto& [k, M] : D.d2)
        if (k.first % 2) M = -M;
    return D;
}

enum class Filtration { first, second };

// Offset of block (p, n-p) inside T^n (blocks ordered by p).
inline std::size_t total_offset(const DoubleComplex& D, int n, int p)
{
    std::size_t off = 0;
    for (int i = 0; i < p; ++i) off += D.rank(i, n - i);
    return off;
}

inline FilteredComplex total_complex(const DoubleComplex& D, Filtration which = Filtration::first)
{
    auto rep = validate_double_complex(D);
    if (!rep) throw NotADoubleComplex(rep.message);
    const int top = std::max(D.max_total(), 0);
    std::vector<std::size_t> ranks;
    std::vector<std::vector<int>> filt;
    for (int n = 0; n <= top; ++n) {
        std::size_t r = 0;
        std::vector<int> f;
        for (int p = 0; p <= n; ++p)
            for (std::size_t k = 0; k < D.rank(p, n - p); ++k, ++r) f.push_back(which == Filtration::first ? p : n - p);
        ranks.push_back(r);
        filt.push_back(f);
    }
    std::vector<IntMatrix> d;
    for (int n = 0; n <= top; ++n) {
        const std::size_t rows = n < top ? ranks[static_cast<std::size_t>(n + 1)] : 0;
        IntMatrix M(rows, ranks[static_cast<std::size_t>(n)]);
        if (n < top)
            for (int p = 0; p <= n; ++p) {
                const int q = n - p;
                const std::size_t c0 = total_offset(D, n, p);
                IntMatrix h = D.horizontal(p, q), v = D.vertical(p, q);
                const std::size_t rh = total_offset(D, n + 1, p + 1), rv = total_offset(D, n + 1, p);
                for (std::size_t i = 0; i < h.rows(); ++i)
                    for (std::size_t j = 0; j < h.cols(); ++j) M(rh + i, c0 + j) += h(i, j);
                for (std::size_t i = 0; i < v.rows(); ++i)
                    for (std::size_t j = 0; j < v.cols(); ++j) M(rv + i, c0 + j) += v(i, j);
            }
        d.push_back(M);
    }
    return FilteredComplex(ChainComplex(true, 0, ranks, d), filt);
}

// Column (p fixed, d2) or row (q fixed, d1) of a double complex as a cochain complex.
inline ChainComplex column_complex(const DoubleComplex& D, int p)
{
    const int top = std::max(D.max_total(), 0);
    std::vector<std::size_t> r;
    std::vector<IntMatrix> d;
    for (int q = 0; q <= top; ++q) {
        r.push_back(D.rank(p, q));
        d.push_back(q < top ? D.vertical(p, q) : IntMatrix(0, D.rank(p, q)));
    }
    return ChainComplex(true, 0, r, d);
}

inline ChainComplex row_complex(const DoubleComplex& D, int q)
{
    const int top = std::max(D.max_total(), 0);
    std::vector<std::size_t> r;
    std::vector<IntMatrix> d;
    for (int p = 0; p <= top; ++p) {
        r.push_back(D.rank(p, q));
        d.push_back(p < top ? D.horizontal(p, q) : IntMatrix(0, D.rank(p, q)));
    }
    return ChainComplex(true, 0, r, d);
}

// ---------------------------------------------------------------------------
// Axiomatic engine
// ---------------------------------------------------------------------------

// Groups h^n(p,t) for 0 <= p <= t <= L, where L plays the role of +infinity;
// indices are clamped into [0, L]. Psi(p,t <- p2,t2) needs p <= p2 and t <= t2,
// Delta(p,t,u) : h^n(p,t) -> h^{n+1}(t,u).
class AxiomaticSystem {
public:
    using Key = std::tuple<int, int, int>;
    using PsiKey = std::tuple<int, int, int, int, int>;
    using DeltaKey = std::tuple<int, int, int, int>;

    AxiomaticSystem() = default;
    AxiomaticSystem(int lo, int hi, int length, std::map<Key, FPAbelianGroup> groups, std::map<PsiKey, GroupHom> psi,
                    std::map<DeltaKey, GroupHom> delta)
        : lo_(lo), hi_(hi), l_(length), groups_(std::move(groups)), psi_(std::move(psi)), delta_(std::move(delta))
    {
        verify();
    }

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int length() const { return l_; }
    int infinity() const { return l_ + 1; }
    int clamp(int p) const { return std::max(0, std::min(p, infinity())); }

    FPAbelianGroup group(int n, int p, int t) const
    {
        p = clamp(p);
        t = clamp(t);
        if (p >= t) return {};
        auto it = groups_.find({n, p, t});
        return it == groups_.end() ? FPAbelianGroup() : it->second;
    }

    GroupHom psi(int n, int p, int t, int p2, int t2) const
    {
        p = clamp(p), t = clamp(t), p2 = clamp(p2), t2 = clamp(t2);
        if (p > p2 || t > t2) throw OutOfRange("psi needs p <= p' and t <= t'");
        FPAbelianGroup a = group(n, p2, t2), b = group(n, p, t);
        if (p == p2 && t == t2) return GroupHom::identity(a);
        auto it = psi_.find({n, p, t, p2, t2});
        if (it == psi_.end() || a.is_trivial() || b.is_trivial()) return GroupHom::zero(a, b);
        return it->second;
    }

    GroupHom delta(int n, int p, int t, int u) const
    {
        p = clamp(p), t = clamp(t), u = clamp(u);
        if (p > t || t > u) throw OutOfRange("delta needs p <= t <= u");
        FPAbelianGroup a = group(n, p, t), b = group(n + 1, t, u);
        auto it = delta_.find({n, p, t, u});
        if (it == delta_.end() || a.is_trivial() || b.is_trivial()) return GroupHom::zero(a, b);
        return it->second;
    }

private:
    [[noreturn]] static void violation(int axiom, const std::string& where)
    {
        throw AxiomViolation("axiom " + std::to_string(axiom) + " fails at " + where);
    }

    static std::string idx(std::initializer_list<int> v)
    {
        std::string s = "(";
        bool first = true;
        for (int x : v) {
            s += (first ? "" : ",") + std::to_string(x);
            first = false;
        }
        return s + ")";
    }

    static bool exact_at(const GroupHom& f, const GroupHom& g)
    {
        IntMatrix im = hcat(f.matrix(), g.domain().relations());
        return lattice_equal(g.kernel_lattice(), im);
    }

    void verify() const
    {
        const int L = infinity();
        for (auto& [k, h] : psi_) {
            auto [n, p, t, p2, t2] = k;
            if (p == p2 && t == t2 && !(h == GroupHom::identity(group(n, p, t)))) violation(1, idx({n, p, t}));
        }
        auto apply = [&](int n, int p, int t, int p2, int t2) { return psi(n, p, t, p2, t2); };
        for (int n = lo_; n <= hi_; ++n)
            for (int p = 0; p <= L; ++p)
                for (int t = p; t <= L; ++t)
                    for (int p2 = p; p2 <= L; ++p2)
                        for (int t2 = std::max(t, p2); t2 <= L; ++t2) {
                            if (p2 == p && t2 == t) continue;
                            // factor through one elementary step
                            GroupHom whole = apply(n, p, t, p2, t2);
                            if (p2 > p && p + 1 <= t) {
                                if (!(compose(apply(n, p, t, p + 1, t), apply(n, p + 1, t, p2, t2)) == whole))
                                    violation(2, idx({n, p, t, p2, t2}));
                            }
                            if (t2 > t) {
                                if (!(compose(apply(n, p, t, p, t + 1), apply(n, p, t + 1, p2, t2)) == whole))
                                    violation(2, idx({n, p, t, p2, t2}));
                            }
                        }
        for (int n = lo_ - 1; n <= hi_; ++n)
            for (int p = 0; p <= L; ++p)
                for (int t = p; t <= L; ++t)
                    for (int u = t; u <= L; ++u) {
                        // square with each elementary step of (p,t,u)
                        const int steps[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
                        for (auto& s : steps) {
                            const int p2 = p + s[0], t2 = t + s[1], u2 = u + s[2];
                            if (u2 > L || p2 > t2 || t2 > u2) continue;
                            GroupHom lhs = compose(delta(n, p, t, u), psi(n, p, t, p2, t2));
                            GroupHom rhs = compose(psi(n + 1, t, u, t2, u2), delta(n, p2, t2, u2));
                            if (!(lhs == rhs)) violation(3, idx({n, p, t, u, p2, t2, u2}));
                        }
                        // h(t,u) -> h(p,u) -> h(p,t) -> h(t,u)[+1] -> h(p,u)[+1]
                        GroupHom a = psi(n, p, u, t, u), b = psi(n, p, t, p, u), c = delta(n, p, t, u),
                                 e = psi(n + 1, p, u, t, u);
                        if (!exact_at(a, b) || !exact_at(b, c) || !exact_at(c, e)) violation(4, idx({n, p, t, u}));
                    }
    }

    int lo_ = 0, hi_ = -1, l_ = 0;
    std::map<Key, FPAbelianGroup> groups_;
    std::map<PsiKey, GroupHom> psi_;
    std::map<DeltaKey, GroupHom> delta_;
};

// h^n(p,t) = H^n(F^p / F^t), with F^{length+1} = 0 standing for t = infinity.
inline AxiomaticSystem axiomatic_system(const FilteredComplex& F)
{
    const int L = F.length() + 1;
    const ChainComplex& C = F.complex();
    std::map<AxiomaticSystem::Key, Subquotient> sq;
    std::map<AxiomaticSystem::Key, IntMatrix> den;
    for (int n = F.lo(); n <= F.hi(); ++n)
        for (int p = 0; p <= L; ++p)
            for (int t = p + 1; t <= L; ++t) {
                IntMatrix num = F.Z(n, p, t - p);
                IntMatrix b = hcat(F.F(n, t), F.dZ(n, p, 0));
                sq.emplace(AxiomaticSystem::Key{n, p, t}, Subquotient(num, b));
                den.emplace(AxiomaticSystem::Key{n, p, t}, b);
            }
    std::map<AxiomaticSystem::Key, FPAbelianGroup> groups;
    for (auto& [k, s] : sq) groups.emplace(k, s.group());
    std::map<AxiomaticSystem::PsiKey, GroupHom> psi;
    std::map<AxiomaticSystem::DeltaKey, GroupHom> delta;
    for (auto& [k, s] : sq) {
        auto [n, p, t] = k;
        const IntMatrix id = IntMatrix::identity(F.rank(n));
        for (int p2 = p; p2 <= L; ++p2)
            for (int t2 = std::max(t, p2 + 1); t2 <= L; ++t2) {
                const AxiomaticSystem::Key src{n, p2, t2};
                psi.emplace(AxiomaticSystem::PsiKey{n, p, t, p2, t2}, hom_between(id, sq.at(src), s, den.at(src)));
            }
        for (int u = t + 1; u <= L; ++u) {
            auto dst = sq.find({n + 1, t, u});
            if (dst == sq.end()) continue;
            delta.emplace(AxiomaticSystem::DeltaKey{n, p, t, u}, hom_between(C.outgoing(n), s, dst->second, den.at(k)));
        }
    }
    return AxiomaticSystem(F.lo(), F.hi(), F.length(), groups, psi, delta);
}

// E_r^{p,q} = Im(h^{p+q}(p, p+r) -> h^{p+q}(p-r+1, p+1)), d_r = Delta(p-r+1, p+1, p+r+1).
inline Page axiomatic_pages(const AxiomaticSystem& S, int r)
{
    if (r < 1) throw OutOfRange("the axiomatic pages start at r = 1");
    Page P;
    P.r = r;
    for (int n = S.lo(); n <= S.hi(); ++n)
        for (int p = 0; p <= S.length(); ++p) {
            GroupHom f = S.psi(n, p - r + 1, p + 1, p, p + r);
            IntMatrix R = f.codomain().relations();
            P.entries.emplace(Bidegree{p, n - p}, PageEntry(hcat(f.matrix(), R), R));
        }
    for (auto& [k, e] : P.entries) {
        const auto [p, q] = k;
        auto it = P.entries.find({p + r, q - r + 1});
        if (it == P.entries.end()) continue;
        GroupHom dl = S.delta(p + q, p - r + 1, p + 1, p + r + 1);
        try {
            P.differentials.emplace(k, hom_between(dl.matrix(), e.sq, it->second.sq, e.B));
        } catch (const NotWellDefined& ex) {
            throw AxiomViolation(std::string("Delta does not respect the page images: ") + ex.what());
        }
    }
    return P;
}

// ---------------------------------------------------------------------------
// Atiyah-Hirzebruch spectral sequence
// ---------------------------------------------------------------------------

struct CoefficientTheory {
    enum class Kind { ordinary, tabular };
    Kind kind = Kind::ordinary;
    FPAbelianGroup group;                  // ordinary: h^0(pt), all other degrees vanish
    std::array<FPAbelianGroup, 2> table{}; // tabular: h^{even}(pt), h^{odd}(pt)
    std::string name = "H";

    static CoefficientTheory ordinary(FPAbelianGroup g)
    {
        CoefficientTheory t;
        t.group = std::move(g);
        return t;
    }
    static CoefficientTheory tabular(FPAbelianGroup even, FPAbelianGroup odd, std::string name)
    {
        CoefficientTheory t;
        t.kind = Kind::tabular;
        t.table = {std::move(even), std::move(odd)};
        t.name = std::move(name);
        return t;
    }
    static CoefficientTheory k_theory() { return tabular(FPAbelianGroup(1, {}), FPAbelianGroup(), "K"); }
};

// Cochain complex of F with coefficients in G (free part copied, each Z_m
// through the cone of multiplication by m); filtration indices are kept.
inline FilteredComplex with_coefficients(const FilteredComplex& F, const FPAbelianGroup& G)
{
    if (G.is_trivial()) return FilteredComplex(ChainComplex(true, F.lo(), {0}, {IntMatrix(0, 0)}), {{}}, F.length());
    const bool cone = !G.torsion.empty();
    const int lo = cone ? F.lo() - 1 : F.lo();
    const int hi = F.hi();
    const ChainComplex& C = F.complex();
    struct Block {
        int shift;   // 1 for the a-part of a cone (C^{n+1}), 0 otherwise
        Integer m;   // multiplication into the b-part, 0 when none
        std::size_t partner;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < G.free_rank; ++i) blocks.push_back({0, 0, 0});
    for (auto& m : G.torsion) {
        blocks.push_back({1, m, blocks.size() + 1});
        blocks.push_back({0, 0, 0});
    }
    auto rank_of_block = [&](const Block& b, int n) { return C.rank(n + b.shift); };
    std::vector<std::size_t> ranks;
    std::vector<std::vector<int>> filt;
    std::vector<std::vector<std::size_t>> offsets;
    for (int n = lo; n <= hi; ++n) {
        std::size_t r = 0;
        std::vector<int> f;
        std::vector<std::size_t> off;
        for (auto& b : blocks) {
            off.push_back(r);
            for (std::size_t k = 0; k < rank_of_block(b, n); ++k) f.push_back(F.filt(n + b.shift, k));
            r += rank_of_block(b, n);
        }
        ranks.push_back(r);
        filt.push_back(f);
        offsets.push_back(off);
    }
    std::vector<IntMatrix> d;
    for (int n = lo; n <= hi; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - lo);
        const std::size_t rows = n < hi ? ranks[i + 1] : 0;
        IntMatrix M(rows, ranks[i]);
        if (n < hi)
            for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
                const Block& b = blocks[bi];
                // d on the block itself: -d for the a-part, d otherwise
                IntMatrix dd = C.outgoing(n + b.shift);
                const Integer sign = b.shift ? -1 : 1;
                for (std::size_t r = 0; r < dd.rows(); ++r)
                    for (std::size_t c = 0; c < dd.cols(); ++c)
                        M(offsets[i + 1][bi] + r, offsets[i][bi] + c) = sign * dd(r, c);
                if (b.shift)
                    for (std::size_t k = 0; k < rank_of_block(b, n); ++k)
                        M(offsets[i + 1][b.partner] + k, offsets[i][bi] + k) = b.m;
            }
        d.push_back(M);
    }
    return FilteredComplex(ChainComplex(true, lo, ranks, d), filt, F.length());
}

// Simplicial cochains of X filtered by simplex dimension, so that
// H^n(F^p/F^t) = H^n(X^{t-1}, X^{p-1}).
inline FilteredComplex skeleton_filtration(const SimplicialComplex& X, const FPAbelianGroup& G = FPAbelianGroup(1, {}))
{
    ChainComplex C = cochain_dual(chain_complex_of(X));
    std::vector<std::vector<int>> f;
    for (int n = C.lo; n <= C.hi(); ++n) f.push_back(std::vector<int>(C.rank(n), n));
    FilteredComplex base(C, f, std::max(X.dimension(), 0));
    if (G == FPAbelianGroup(1, {})) return base;
    return with_coefficients(base, G);
}

class AhssSequence {
public:
    AhssSequence(const SimplicialComplex& X, CoefficientTheory theory) : theory_(std::move(theory)), dim_(X.dimension())
    {
        if (theory_.kind == CoefficientTheory::Kind::ordinary) {
            filtered_ = skeleton_filtration(X, theory_.group);
            system_ = axiomatic_system(*filtered_);
            return;
        }
        for (std::size_t s = 0; s < 2; ++s) rows_[s] = skeleton_filtration(X, theory_.table[s]);
        Page e2 = tabular_page(2);
        for (int r = 2; r <= dim_ && !room_; ++r)
            for (auto& [k, e] : e2.entries) {
                if (e.group().is_trivial()) continue;
                const int q = ((k.second - r + 1) % 2 + 2) % 2;
                if (!e2.group(k.first + r, q).is_trivial()) room_ = true;
            }
    }

    const CoefficientTheory& theory() const { return theory_; }
    bool ordinary() const { return theory_.kind == CoefficientTheory::Kind::ordinary; }
    // Tabular rows are 2-periodic; q = 0 stands for even and q = 1 for odd.
    bool periodic() const { return !ordinary(); }
    const AxiomaticSystem& system() const
    {
        if (!system_) throw InsufficientData("a tabular theory has no h(p,t) groups beyond E_1");
        return *system_;
    }
    const FilteredComplex& filtered() const { return *filtered_; }
    bool room_for_higher_differentials() const { return room_; }
    // E_infinity is only known up to extensions (and only from E_2 on) for tabular data.
    bool up_to_extensions() const { return !ordinary(); }

    Page page(int r) const
    {
        if (ordinary()) return r == 0 ? cohomolab::page(*filtered_, 0) : axiomatic_pages(*system_, r);
        if (r < 1) throw OutOfRange("tabular pages start at r = 1");
        if (r >= 3 && room_)
            throw InsufficientData("differentials d_r with r >= 2 are not determined by the coefficient table");
        Page P = tabular_page(std::min(r, 2));
        if (r >= 2) {
            P.r = r;
            P.differentials.clear();
            P.differentials_known = !room_;
        }
        return P;
    }

private:
    Page tabular_page(int r) const
    {
        Page P;
        P.r = r;
        for (int s = 0; s < 2; ++s) {
            Page row = cohomolab::page(*rows_[static_cast<std::size_t>(s)], r);
            for (auto& [k, e] : row.entries)
                if (k.second == 0) P.entries.emplace(Bidegree{k.first, s}, e);
            if (r == 1)
                for (auto& [k, d] : row.differentials)
                    if (k.second == 0) P.differentials.emplace(Bidegree{k.first, s}, d);
        }
        return P;
    }

    CoefficientTheory theory_;
    int dim_ = 0;
    std::optional<FilteredComplex> filtered_;
    std::optional<AxiomaticSystem> system_;
    std::array<std::optional<FilteredComplex>, 2> rows_;
    bool room_ = false;
};

inline AhssSequence ahss(const SimplicialComplex& X, const CoefficientTheory& theory) { return AhssSequence(X, theory); }

} // namespace cohomolab
