#pragma once

// Exact integer linear algebra: Smith normal form, lattices, subquotients and
// homomorphisms of finitely generated abelian groups.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace cohomolab {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using IntVector = std::vector<Integer>;

inline Integer mod_nonneg(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0) r += (m < 0 ? Integer(-m) : m);
    return r;
}

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries))
    {
        if (a_.size() != rows_ * cols_)
            throw DimensionMismatch("entry count does not match rows*cols");
    }
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
            for (long long v : r) a_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static IntMatrix diagonal(const std::vector<Integer>& d)
    {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
    static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols)
    {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw DimensionMismatch("column length");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<Integer>& entries() const { return a_; }

    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntVector column(std::size_t j) const
    {
        IntVector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    IntVector row(std::size_t i) const
    {
        return IntVector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }

    bool is_zero() const
    {
        return std::all_of(a_.begin(), a_.end(), [](const Integer& x) { return x.is_zero(); });
    }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix select_columns(const std::vector<std::size_t>& idx) const
    {
        IntMatrix m(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
        return m;
    }
    IntMatrix select_rows(const std::vector<std::size_t>& idx) const
    {
        IntMatrix m(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
        return m;
    }
    IntMatrix column_range(std::size_t from, std::size_t to) const
    {
        std::vector<std::size_t> idx;
        for (std::size_t j = from; j < to; ++j) idx.push_back(j);
        return select_columns(idx);
    }
    IntMatrix row_range(std::size_t from, std::size_t to) const
    {
        std::vector<std::size_t> idx;
        for (std::size_t i = from; i < to; ++i) idx.push_back(i);
        return select_rows(idx);
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& x = a(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Integer& y = b(k, j);
                    if (!y.is_zero()) c(i, j) += x * y;
                }
            }
        return c;
    }
    friend IntVector operator*(const IntMatrix& a, const IntVector& v)
    {
        if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector product");
        IntVector r(a.rows_);
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (v[k].is_zero()) continue;
            for (std::size_t i = 0; i < a.rows_; ++i) {
                const Integer& x = a(i, k);
                if (!x.is_zero()) r[i] += x * v[k];
            }
        }
        return r;
    }
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum");
        IntMatrix c = a;
        for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
        return c;
    }
    friend IntMatrix operator-(const IntMatrix& a)
    {
        IntMatrix c = a;
        for (auto& x : c.a_) x = -x;
        return c;
    }
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }
    friend bool operator==(const IntMatrix& a, const IntMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> a_;
};

// Horizontal concatenation; row counts must agree (an empty operand with zero
// columns is accepted with any row count).
inline IntMatrix hcat(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() == 0) return IntMatrix(b.rows(), b.cols(), b.entries());
    if (b.cols() == 0) return IntMatrix(a.rows(), a.cols(), a.entries());
    if (a.rows() != b.rows()) throw DimensionMismatch("hcat row count");
    IntMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

inline IntMatrix vcat(const IntMatrix& a, const IntMatrix& b)
{
    return hcat(a.transpose(), b.transpose()).transpose();
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

struct SmithForm {
    IntMatrix U, S, V;   // U*A*V = S
    IntMatrix Uinv;      // inverse of U (filled when requested)
    std::vector<Integer> diag; // nonzero invariant factors d_1 | d_2 | ...
    std::size_t rank = 0;
};

struct SmithOptions {
    bool want_U = true;
    bool want_Uinv = true;
    bool want_V = true;
};

namespace detail {

struct Overflow {};

inline bool is_zero(std::int64_t x) { return x == 0; }
inline bool is_zero(const Integer& x) { return x.is_zero(); }
inline std::int64_t abs_val(std::int64_t x) { return x < 0 ? -x : x; }
inline Integer abs_val(const Integer& x) { return x < 0 ? Integer(-x) : x; }
inline bool is_unit(std::int64_t x) { return x == 1 || x == -1; }
inline bool is_unit(const Integer& x) { return x == 1 || x == -1; }

constexpr std::int64_t kSmallLimit = std::int64_t(1) << 62;

inline std::int64_t checked(__int128 r)
{
    if (r >= kSmallLimit || r <= -kSmallLimit) throw Overflow{};
    return static_cast<std::int64_t>(r);
}
// a - q*b
inline std::int64_t sub_mul(std::int64_t a, std::int64_t q, std::int64_t b)
{
    return checked(static_cast<__int128>(a) - static_cast<__int128>(q) * b);
}
inline Integer sub_mul(const Integer& a, const Integer& q, const Integer& b) { return a - q * b; }

inline Integer to_integer(std::int64_t x) { return Integer(x); }
inline Integer to_integer(const Integer& x) { return x; }

template <class T>
class SnfWork {
public:
    SnfWork(const IntMatrix& A, SmithOptions opt) : m_(A.rows()), n_(A.cols()), opt_(opt)
    {
        a_.resize(m_ * n_);
        for (std::size_t i = 0; i < m_ * n_; ++i) a_[i] = convert(A.entries()[i]);
        if (track_rows()) {
            if (opt_.want_U) init_identity(u_, m_);
            if (opt_.want_Uinv) init_identity(ui_, m_);
        }
        if (opt_.want_V) init_identity(v_, n_);
    }

    SmithForm run()
    {
        const std::size_t lim = std::min(m_, n_);
        std::size_t k = 0;
        for (; k < lim; ++k) {
            std::size_t pi, pj;
            if (!find_pivot(k, pi, pj)) break;
            swap_rows(k, pi);
            swap_cols(k, pj);
            for (;;) {
                bool clean = true;
                for (std::size_t i = k + 1; i < m_; ++i) {
                    if (is_zero(A(i, k))) continue;
                    T q = A(i, k) / A(k, k);
                    if (!is_zero(q)) row_sub(i, k, q);
                    if (!is_zero(A(i, k))) clean = false;
                }
                for (std::size_t j = k + 1; j < n_; ++j) {
                    if (is_zero(A(k, j))) continue;
                    T q = A(k, j) / A(k, k);
                    if (!is_zero(q)) col_sub(j, k, q);
                    if (!is_zero(A(k, j))) clean = false;
                }
                if (!clean) {
                    // a remainder smaller than the pivot survived; move it to the pivot slot
                    std::size_t bi = k, bj = k;
                    T best = abs_val(A(k, k));
                    for (std::size_t i = k + 1; i < m_; ++i)
                        if (!is_zero(A(i, k)) && abs_val(A(i, k)) < best) {
                            best = abs_val(A(i, k));
                            bi = i;
                            bj = k;
                        }
                    for (std::size_t j = k + 1; j < n_; ++j)
                        if (!is_zero(A(k, j)) && abs_val(A(k, j)) < best) {
                            best = abs_val(A(k, j));
                            bi = k;
                            bj = j;
                        }
                    swap_rows(k, bi);
                    swap_cols(k, bj);
                    continue;
                }
                if (!is_unit(A(k, k))) {
                    std::size_t bad = m_;
                    for (std::size_t i = k + 1; i < m_ && bad == m_; ++i)
                        for (std::size_t j = k + 1; j < n_; ++j)
                            if (!is_zero(A(i, j)) && !is_zero(A(i, j) % A(k, k))) {
                                bad = i;
                                break;
                            }
                    if (bad != m_) {
                        row_sub(k, bad, T(-1));
                        continue;
                    }
                }
                break;
            }
            if (A(k, k) < 0) negate_row(k);
        }
        SmithForm out;
        out.rank = k;
        out.S = IntMatrix(m_, n_);
        for (std::size_t i = 0; i < k; ++i) {
            out.S(i, i) = to_integer(A(i, i));
            out.diag.push_back(out.S(i, i));
        }
        if (opt_.want_U) out.U = export_square(u_, m_);
        if (opt_.want_Uinv) out.Uinv = export_square(ui_, m_);
        if (opt_.want_V) out.V = export_square(v_, n_);
        return out;
    }

private:
    static T convert(const Integer& x)
    {
        if constexpr (std::is_same_v<T, std::int64_t>) {
            if (x >= kSmallLimit || x <= -kSmallLimit) throw Overflow{};
            return static_cast<std::int64_t>(x);
        } else {
            return x;
        }
    }
    bool track_rows() const { return opt_.want_U || opt_.want_Uinv; }
    static void init_identity(std::vector<T>& M, std::size_t n)
    {
        M.assign(n * n, T(0));
        for (std::size_t i = 0; i < n; ++i) M[i * n + i] = T(1);
    }
    static IntMatrix export_square(const std::vector<T>& M, std::size_t n)
    {
        IntMatrix r(n, n);
        for (std::size_t i = 0; i < n * n; ++i)
            if (!is_zero(M[i])) r(i / n, i % n) = to_integer(M[i]);
        return r;
    }

    T& A(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

    bool find_pivot(std::size_t k, std::size_t& pi, std::size_t& pj)
    {
        bool found = false;
        T best{};
        for (std::size_t i = k; i < m_; ++i)
            for (std::size_t j = k; j < n_; ++j) {
                const T& x = A(i, j);
                if (is_zero(x)) continue;
                T ax = abs_val(x);
                if (!found || ax < best) {
                    found = true;
                    best = ax;
                    pi = i;
                    pj = j;
                    if (best == 1) return true;
                }
            }
        return found;
    }

    // row_i -= q * row_k
    void row_sub(std::size_t i, std::size_t k, const T& q)
    {
        for (std::size_t j = 0; j < n_; ++j)
            if (!is_zero(A(k, j))) A(i, j) = sub_mul(A(i, j), q, A(k, j));
        if (opt_.want_U)
            for (std::size_t j = 0; j < m_; ++j)
                if (!is_zero(u_[k * m_ + j])) u_[i * m_ + j] = sub_mul(u_[i * m_ + j], q, u_[k * m_ + j]);
        if (opt_.want_Uinv) // column k += q * column i
            for (std::size_t r = 0; r < m_; ++r)
                if (!is_zero(ui_[r * m_ + i]))
                    ui_[r * m_ + k] = sub_mul(ui_[r * m_ + k], -q, ui_[r * m_ + i]);
    }
    // col_j -= q * col_k
    void col_sub(std::size_t j, std::size_t k, const T& q)
    {
        for (std::size_t i = 0; i < m_; ++i)
            if (!is_zero(A(i, k))) A(i, j) = sub_mul(A(i, j), q, A(i, k));
        if (opt_.want_V)
            for (std::size_t r = 0; r < n_; ++r)
                if (!is_zero(v_[r * n_ + k])) v_[r * n_ + j] = sub_mul(v_[r * n_ + j], q, v_[r * n_ + k]);
    }
    void swap_rows(std::size_t i, std::size_t k)
    {
        if (i == k) return;
        for (std::size_t j = 0; j < n_; ++j) std::swap(A(i, j), A(k, j));
        if (opt_.want_U)
            for (std::size_t j = 0; j < m_; ++j) std::swap(u_[i * m_ + j], u_[k * m_ + j]);
        if (opt_.want_Uinv)
            for (std::size_t r = 0; r < m_; ++r) std::swap(ui_[r * m_ + i], ui_[r * m_ + k]);
    }
    void swap_cols(std::size_t j, std::size_t k)
    {
        if (j == k) return;
        for (std::size_t i = 0; i < m_; ++i) std::swap(A(i, j), A(i, k));
        if (opt_.want_V)
            for (std::size_t r = 0; r < n_; ++r) std::swap(v_[r * n_ + j], v_[r * n_ + k]);
    }
    void negate_row(std::size_t k)
    {
        for (std::size_t j = 0; j < n_; ++j) A(k, j) = -A(k, j);
        if (opt_.want_U)
            for (std::size_t j = 0; j < m_; ++j) u_[k * m_ + j] = -u_[k * m_ + j];
        if (opt_.want_Uinv)
            for (std::size_t r = 0; r < m_; ++r) ui_[r * m_ + k] = -ui_[r * m_ + k];
    }

    std::size_t m_, n_;
    SmithOptions opt_;
    std::vector<T> a_, u_, ui_, v_;
};

} // namespace detail

// Deterministic Smith normal form. Pivot: smallest nonzero absolute value,
// ties broken by (row, col). Runs on 64-bit integers while they suffice and
// restarts with arbitrary precision on overflow.
inline SmithForm smith_normal_form(const IntMatrix& A, SmithOptions opt = {})
{
    try {
        return detail::SnfWork<std::int64_t>(A, opt).run();
    } catch (const detail::Overflow&) {
        return detail::SnfWork<Integer>(A, opt).run();
    }
}

// Invariant factors only (no transforms).
inline std::vector<Integer> invariant_factors(const IntMatrix& A)
{
    return smith_normal_form(A, {false, false, false}).diag;
}

inline std::size_t rank_of(const IntMatrix& A) { return invariant_factors(A).size(); }

// rank over F_2: invariant factors that are odd
inline std::size_t rank_mod2(const IntMatrix& A)
{
    std::size_t r = 0;
    for (auto& d : invariant_factors(A))
        if ((d & 1) != 0) ++r;
    return r;
}

// ---------------------------------------------------------------------------
// Lattices in Z^N (given by generating columns)
// ---------------------------------------------------------------------------

// Basis of the column lattice of M.
inline IntMatrix lattice_basis(const IntMatrix& M)
{
    if (M.cols() == 0) return IntMatrix(M.rows(), 0);
    SmithForm s = smith_normal_form(M, {false, true, false});
    IntMatrix B(M.rows(), s.rank);
    for (std::size_t j = 0; j < s.rank; ++j)
        for (std::size_t i = 0; i < M.rows(); ++i) B(i, j) = s.Uinv(i, j) * s.diag[j];
    return B;
}

// Basis of the integer kernel {x : A x = 0}.
inline IntMatrix kernel_basis(const IntMatrix& A)
{
    if (A.rows() == 0) return IntMatrix::identity(A.cols());
    SmithForm s = smith_normal_form(A, {false, false, true});
    return s.V.column_range(s.rank, A.cols());
}

// Solves A x = b over the integers using a precomputed SNF (U and V needed).
inline bool solve_with(const SmithForm& s, const IntVector& b, IntVector& x)
{
    const std::size_t m = s.U.rows(), n = s.V.rows();
    if (b.size() != m) throw DimensionMismatch("right-hand side length");
    IntVector c = s.U * b;
    for (std::size_t i = s.rank; i < m; ++i)
        if (!c[i].is_zero()) return false;
    IntVector y(n);
    for (std::size_t i = 0; i < s.rank; ++i) {
        if (!(c[i] % s.diag[i]).is_zero()) return false;
        y[i] = c[i] / s.diag[i];
    }
    x = s.V * y;
    return true;
}

inline bool solve(const IntMatrix& A, const IntVector& b, IntVector& x)
{
    if (A.cols() == 0) {
        x.clear();
        return std::all_of(b.begin(), b.end(), [](const Integer& v) { return v.is_zero(); });
    }
    return solve_with(smith_normal_form(A, {true, false, true}), b, x);
}

// True when every column of B lies in the column lattice of Z.
inline bool lattice_contains(const IntMatrix& Z, const IntMatrix& B)
{
    if (B.cols() == 0) return true;
    if (Z.cols() == 0) return B.is_zero();
    SmithForm s = smith_normal_form(Z, {true, false, true});
    IntVector x;
    for (std::size_t j = 0; j < B.cols(); ++j)
        if (!solve_with(s, B.column(j), x)) return false;
    return true;
}

inline bool lattice_equal(const IntMatrix& A, const IntMatrix& B)
{
    return lattice_contains(A, B) && lattice_contains(B, A);
}

// ---------------------------------------------------------------------------
// Finitely presented abelian groups
// ---------------------------------------------------------------------------

struct FPAbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Integer> torsion; // each >= 2, each divides the next
    // Generator system in some ambient lattice (torsion generators first);
    // never part of equality.
    IntMatrix generators;

    FPAbelianGroup() = default;
    FPAbelianGroup(std::size_t rank, std::vector<Integer> tors) : free_rank(rank), torsion(std::move(tors)) {}

    // Canonical form of Z^rank (+) Z_{c_1} (+) ... for arbitrary cyclic orders c_i
    // (orders 0 count as free, orders 1 vanish).
    static FPAbelianGroup from_cyclic(std::size_t rank, const std::vector<Integer>& orders)
    {
        std::vector<Integer> d;
        for (auto& c : orders) {
            Integer a = c < 0 ? Integer(-c) : c;
            if (a.is_zero())
                ++rank;
            else if (a != 1)
                d.push_back(a);
        }
        std::vector<Integer> tors;
        for (auto& x : invariant_factors(IntMatrix::diagonal(d)))
            if (x != 1) tors.push_back(x);
        return FPAbelianGroup(rank, tors);
    }

    std::size_t num_generators() const { return torsion.size() + free_rank; }
    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

    // Relation matrix in generator coordinates: diag(torsion) padded with zero rows.
    IntMatrix relations() const
    {
        IntMatrix R(num_generators(), torsion.size());
        for (std::size_t i = 0; i < torsion.size(); ++i) R(i, i) = torsion[i];
        return R;
    }

    // Reduces a coordinate vector to canonical representatives.
    IntVector reduce(IntVector c) const
    {
        for (std::size_t i = 0; i < torsion.size(); ++i) c[i] = mod_nonneg(c[i], torsion[i]);
        return c;
    }

    std::string to_string() const
    {
        if (is_trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        if (free_rank > 0) {
            os << "Z";
            if (free_rank > 1) os << '^' << free_rank;
            first = false;
        }
        for (auto& t : torsion) {
            os << (first ? "" : " (+) ") << "Z_" << t;
            first = false;
        }
        return os.str();
    }

    friend bool operator==(const FPAbelianGroup& a, const FPAbelianGroup& b)
    {
        return a.free_rank == b.free_rank && a.torsion == b.torsion;
    }
    friend bool operator!=(const FPAbelianGroup& a, const FPAbelianGroup& b) { return !(a == b); }
};

// Number of 2-primary cyclic summands (used for universal-coefficient checks).
inline std::size_t count_even_torsion(const FPAbelianGroup& g)
{
    std::size_t c = 0;
    for (auto& t : g.torsion)
        if ((t & 1) == 0) ++c;
    return c;
}

// (lattice spanned by columns of Z) / (lattice spanned by columns of B), with
// explicit generators and coordinates.
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(const IntMatrix& Z, const IntMatrix& B)
    {
        N_ = Z.rows();
        if (B.cols() > 0 && B.rows() != N_) throw DimensionMismatch("subquotient ambient dimension");
        if (Z.cols() == 0) {
            if (!B.is_zero()) throw ContainmentViolation("denominator not contained in zero lattice");
            basis_ = IntMatrix(N_, 0);
            group_.generators = IntMatrix(N_, 0);
            return;
        }
        SmithForm sz = smith_normal_form(Z, {true, true, false});
        k_ = sz.rank;
        zdiag_ = sz.diag;
        zU_ = sz.U;
        basis_ = IntMatrix(N_, k_);
        for (std::size_t j = 0; j < k_; ++j)
            for (std::size_t i = 0; i < N_; ++i) basis_(i, j) = sz.Uinv(i, j) * zdiag_[j];

        // express B in the basis
        IntMatrix C(k_, B.cols());
        for (std::size_t j = 0; j < B.cols(); ++j) {
            IntVector y;
            if (!basis_coords(B.column(j), y))
                throw ContainmentViolation("denominator column " + std::to_string(j) +
                                           " is not in the numerator lattice");
            for (std::size_t i = 0; i < k_; ++i) C(i, j) = y[i];
        }
        SmithForm sc = smith_normal_form(C, {true, true, false});
        cU_ = sc.U;
        inv_.assign(k_, Integer(0));
        for (std::size_t i = 0; i < sc.rank; ++i) inv_[i] = sc.diag[i];

        std::size_t free = 0;
        std::vector<Integer> tors;
        for (std::size_t i = 0; i < k_; ++i) {
            if (inv_[i] == 1) continue;
            kept_.push_back(i);
            if (inv_[i].is_zero())
                ++free;
            else
                tors.push_back(inv_[i]);
        }
        group_ = FPAbelianGroup(free, tors);
        gen_coeffs_ = sc.Uinv.select_columns(kept_);
        group_.generators = basis_ * gen_coeffs_;
    }

    const FPAbelianGroup& group() const { return group_; }
    std::size_t ambient_dim() const { return N_; }
    const IntMatrix& numerator_basis() const { return basis_; }
    // Coefficients of the generators with respect to numerator_basis().
    const IntMatrix& generator_coefficients() const { return gen_coeffs_; }
    const IntMatrix& generators() const { return group_.generators; }

    bool contains(const IntVector& x) const
    {
        IntVector y;
        return basis_coords(x, y);
    }

    // Coordinates of a numerator element in the generator system (torsion
    // entries reduced to [0, order)).
    IntVector coordinates(const IntVector& x) const
    {
        IntVector y;
        if (!basis_coords(x, y)) throw ContainmentViolation("vector is not in the numerator lattice");
        IntVector z = k_ ? cU_ * y : IntVector{};
        IntVector out(kept_.size());
        for (std::size_t t = 0; t < kept_.size(); ++t) {
            const std::size_t i = kept_[t];
            out[t] = inv_[i].is_zero() ? z[i] : mod_nonneg(z[i], inv_[i]);
        }
        return out;
    }

    // Coordinates of a combination sum_j c_j * basis_j given by its basis coefficients.
    IntVector coordinates_from_basis(const IntVector& y) const
    {
        IntVector z = k_ ? cU_ * y : IntVector{};
        IntVector out(kept_.size());
        for (std::size_t t = 0; t < kept_.size(); ++t) {
            const std::size_t i = kept_[t];
            out[t] = inv_[i].is_zero() ? z[i] : mod_nonneg(z[i], inv_[i]);
        }
        return out;
    }

    bool basis_coords(const IntVector& x, IntVector& y) const
    {
        if (x.size() != N_) throw DimensionMismatch("vector length does not match ambient dimension");
        y.assign(k_, Integer(0));
        if (k_ == 0) return std::all_of(x.begin(), x.end(), [](const Integer& v) { return v.is_zero(); });
        IntVector c = zU_ * x;
        for (std::size_t i = k_; i < N_; ++i)
            if (!c[i].is_zero()) return false;
        // basis_ = Uinv[:, :k] * diag(zdiag), so U x = (diag(zdiag) y, 0)
        for (std::size_t i = 0; i < k_; ++i) {
            if (!(c[i] % zdiag_[i]).is_zero()) return false;
            y[i] = c[i] / zdiag_[i];
        }
        return true;
    }

private:
    std::size_t N_ = 0, k_ = 0;
    IntMatrix basis_, zU_, cU_, gen_coeffs_;
    std::vector<Integer> zdiag_, inv_;
    std::vector<std::size_t> kept_;
    FPAbelianGroup group_;
};

inline FPAbelianGroup subquotient(const IntMatrix& Z, const IntMatrix& B)
{
    return Subquotient(Z, B).group();
}

// ---------------------------------------------------------------------------
// Homomorphisms between groups in generator coordinates
// ---------------------------------------------------------------------------

class GroupHom {
public:
    GroupHom() = default;
    GroupHom(FPAbelianGroup domain, FPAbelianGroup codomain, IntMatrix matrix)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), m_(std::move(matrix))
    {
        if (m_.rows() != codomain_.num_generators() || m_.cols() != domain_.num_generators())
            throw DimensionMismatch("hom matrix shape " + std::to_string(m_.rows()) + "x" +
                                    std::to_string(m_.cols()) + " does not match groups");
        normalize();
        // torsion generators must land on elements of compatible order
        for (std::size_t j = 0; j < domain_.torsion.size(); ++j) {
            for (std::size_t i = 0; i < m_.rows(); ++i) {
                Integer v = m_(i, j) * domain_.torsion[j];
                if (i < codomain_.torsion.size()) {
                    if (!(v % codomain_.torsion[i]).is_zero())
                        throw NotWellDefined("torsion generator " + std::to_string(j) + " maps to an element of incompatible order");
                } else if (!v.is_zero()) {
                    throw NotWellDefined("torsion generator " + std::to_string(j) + " maps to a free element");
                }
            }
        }
    }

    static GroupHom identity(const FPAbelianGroup& g)
    {
        return GroupHom(g, g, IntMatrix::identity(g.num_generators()));
    }
    static GroupHom zero(const FPAbelianGroup& a, const FPAbelianGroup& b)
    {
        return GroupHom(a, b, IntMatrix(b.num_generators(), a.num_generators()));
    }

    const FPAbelianGroup& domain() const { return domain_; }
    const FPAbelianGroup& codomain() const { return codomain_; }
    const IntMatrix& matrix() const { return m_; }

    IntVector apply(const IntVector& x) const { return codomain_.reduce(m_ * x); }

    bool is_zero() const { return m_.is_zero(); }

    friend GroupHom compose(const GroupHom& g, const GroupHom& f) // g after f
    {
        if (!(f.codomain_ == g.domain_)) throw DimensionMismatch("composition of incompatible homs");
        return GroupHom(f.domain_, g.codomain_, g.m_ * f.m_);
    }

    // Image, kernel and cokernel, each as a subquotient of a coordinate space.
    Subquotient image() const
    {
        IntMatrix R = codomain_.relations();
        return Subquotient(hcat(m_, R), R);
    }
    // Kernel inside the domain coordinate space.
    Subquotient kernel() const { return Subquotient(kernel_lattice(), domain_.relations()); }
    Subquotient cokernel() const
    {
        const std::size_t n = codomain_.num_generators();
        return Subquotient(IntMatrix::identity(n), hcat(hcat(IntMatrix(n, 0), m_), codomain_.relations()));
    }

    // Generators of {x in Z^dom : f(x) = 0 in the codomain} (contains the domain relations).
    IntMatrix kernel_lattice() const
    {
        const std::size_t n = domain_.num_generators();
        IntMatrix big = hcat(hcat(IntMatrix(m_.rows(), 0), m_), codomain_.relations());
        IntMatrix K = kernel_basis(big.rows() ? big : IntMatrix(0, big.cols()));
        if (big.rows() == 0) K = IntMatrix::identity(big.cols());
        IntMatrix proj = K.row_range(0, n);
        return hcat(hcat(IntMatrix(n, 0), proj), domain_.relations());
    }

    bool is_injective() const { return kernel().group().is_trivial(); }
    bool is_surjective() const { return cokernel().group().is_trivial(); }
    bool is_isomorphism() const { return is_injective() && is_surjective(); }

    friend bool operator==(const GroupHom& a, const GroupHom& b)
    {
        return a.domain_ == b.domain_ && a.codomain_ == b.codomain_ && a.m_ == b.m_;
    }

private:
    void normalize()
    {
        for (std::size_t i = 0; i < codomain_.torsion.size(); ++i)
            for (std::size_t j = 0; j < m_.cols(); ++j) m_(i, j) = mod_nonneg(m_(i, j), codomain_.torsion[i]);
    }

    FPAbelianGroup domain_, codomain_;
    IntMatrix m_;
};

// Map induced by the integer matrix f between two subquotients.
inline GroupHom hom_between(const IntMatrix& f, const Subquotient& src, const Subquotient& dst,
                            const IntMatrix& src_denominator)
{
    if (f.cols() != src.ambient_dim() || f.rows() != dst.ambient_dim())
        throw DimensionMismatch("map does not fit the ambient spaces");
    const IntMatrix& G = src.generators();
    IntMatrix M(dst.group().num_generators(), G.cols());
    for (std::size_t j = 0; j < G.cols(); ++j) {
        IntVector img = f * G.column(j);
        if (!dst.contains(img)) throw NotWellDefined("generator " + std::to_string(j) + " maps outside the target numerator");
        IntVector c = dst.coordinates(img);
        for (std::size_t i = 0; i < c.size(); ++i) M(i, j) = c[i];
    }
    for (std::size_t j = 0; j < src_denominator.cols(); ++j) {
        IntVector img = f * src_denominator.column(j);
        if (!dst.contains(img)) throw NotWellDefined("denominator element maps outside the target numerator");
        IntVector c = dst.coordinates(img);
        if (!std::all_of(c.begin(), c.end(), [](const Integer& v) { return v.is_zero(); }))
            throw NotWellDefined("denominator element " + std::to_string(j) + " maps outside the target denominator");
    }
    return GroupHom(src.group(), dst.group(), M);
}

struct SubquotientPresentation {
    IntMatrix Z, B;
};

inline GroupHom hom_on_subquotients(const IntMatrix& f, const SubquotientPresentation& source,
                                    const SubquotientPresentation& target)
{
    Subquotient s(source.Z, source.B), t(target.Z, target.B);
    return hom_between(f, s, t, source.B);
}

} // namespace cohomolab
