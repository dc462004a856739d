#pragma once

// Clifford algebras over diagonal signatures, Pin elements and the twisted
// adjoint covering, explicit small representations, 2D spinor tables and the
// lift squares of pin structures on surfaces.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace cohomolab {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

// Gaussian rational a + b i.
struct QComplex {
    Rational re, im;
    QComplex(Rational r = 0, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    QComplex(int r) : re(r), im(0) {}
    static QComplex i() { return {0, 1}; }
    QComplex conj() const { return {re, -im}; }
    friend QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
    friend QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
    friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
    friend QComplex operator*(const QComplex& a, const QComplex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend QComplex operator/(const QComplex& a, const QComplex& b)
    {
        Rational n = b.re * b.re + b.im * b.im;
        QComplex p = a * b.conj();
        return {p.re / n, p.im / n};
    }
    QComplex& operator+=(const QComplex& b) { return *this = *this + b; }
    friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
};

// Gaussian integer; every matrix in the representation tables has such entries.
struct GaussInt {
    std::int64_t re = 0, im = 0;
    GaussInt(std::int64_t r = 0, std::int64_t i = 0) : re(r), im(i) {}
    static GaussInt i() { return {0, 1}; }
    friend GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
    friend GaussInt operator*(GaussInt a, GaussInt b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussInt& operator+=(GaussInt b) { return *this = *this + b; }
    friend bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
};

class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<int> diag) : diag_(std::move(diag))
    {
        for (int d : diag_)
            if (d != 1 && d != -1) throw InvalidComplex("signature entries must be +1 or -1");
        if (diag_.size() > 30) throw OutOfRange("at most 30 generators");
    }
    Signature(std::initializer_list<int> diag) : Signature(std::vector<int>(diag)) {}
    static Signature uniform(std::size_t n, int s) { return Signature(std::vector<int>(n, s)); }

    std::size_t n() const { return diag_.size(); }
    // 1-based, as e_1 ... e_n
    int operator[](std::size_t i) const { return diag_.at(i - 1); }
    const std::vector<int>& diag() const { return diag_; }
    std::size_t positives() const
    {
        std::size_t p = 0;
        for (int d : diag_) p += d > 0;
        return p;
    }
    Signature append(std::initializer_list<int> more) const
    {
        std::vector<int> d = diag_;
        d.insert(d.end(), more);
        return Signature(d);
    }
    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<int> diag_;
};

using Blade = std::uint32_t;

inline int grade_of(Blade b) { return __builtin_popcount(b); }

// e_A e_B = blade_sign(A, B) e_{A xor B}
inline int blade_sign(const Signature& sig, Blade a, Blade b)
{
    int swaps = 0;
    for (Blade rest = b; rest; rest &= rest - 1) {
        int i = __builtin_ctz(rest);
        swaps += grade_of(a >> (i + 1));
    }
    int s = swaps % 2 ? -1 : 1;
    for (Blade both = a & b; both; both &= both - 1) s *= sig.diag()[__builtin_ctz(both)];
    return s;
}

inline std::string blade_to_string(Blade b)
{
    if (!b) return "1";
    std::string s;
    for (int i = 0; i < 32; ++i)
        if (b >> i & 1u) s += "e" + std::to_string(i + 1);
    return s;
}

template <class S>
class Multivector {
public:
    Multivector() = default;
    explicit Multivector(Signature sig) : sig_(std::move(sig)) {}

    static Multivector scalar(const Signature& sig, const S& x)
    {
        Multivector m(sig);
        m.add(0, x);
        return m;
    }
    static Multivector blade(const Signature& sig, Blade b, const S& x = S(1))
    {
        if (b >> sig.n()) throw OutOfRange("blade outside signature");
        Multivector m(sig);
        m.add(b, x);
        return m;
    }
    static Multivector generator(const Signature& sig, std::size_t i)
    {
        if (i < 1 || i > sig.n()) throw OutOfRange("generator index");
        return blade(sig, Blade(1) << (i - 1));
    }
    static Multivector vector(const Signature& sig, const std::vector<S>& coeffs)
    {
        if (coeffs.size() != sig.n()) throw DimensionMismatch("vector length");
        Multivector m(sig);
        for (std::size_t i = 0; i < coeffs.size(); ++i) m.add(Blade(1) << i, coeffs[i]);
        return m;
    }

    const Signature& signature() const { return sig_; }
    const std::map<Blade, S>& terms() const { return c_; }
    S coeff(Blade b) const
    {
        auto it = c_.find(b);
        return it == c_.end() ? S(0) : it->second;
    }
    S scalar_part() const { return coeff(0); }
    bool is_zero() const { return c_.empty(); }

    void add(Blade b, const S& x)
    {
        if (x == S(0)) return;
        auto [it, fresh] = c_.emplace(b, x);
        if (fresh) return;
        it->second = it->second + x;
        if (it->second == S(0)) c_.erase(it);
    }

    Multivector grade(int k) const
    {
        Multivector m(sig_);
        for (auto& [b, x] : c_)
            if (grade_of(b) == k) m.c_.emplace(b, x);
        return m;
    }
    Multivector even() const { return filter(0); }
    Multivector odd() const { return filter(1); }
    bool is_even() const { return odd().is_zero(); }
    bool is_odd() const { return even().is_zero(); }

    Multivector scaled(const S& x) const
    {
        Multivector m(sig_);
        for (auto& [b, y] : c_) m.add(b, y * x);
        return m;
    }

    friend Multivector operator+(const Multivector& a, const Multivector& b)
    {
        if (!(a.sig_ == b.sig_)) throw SignatureMismatch("sum of elements of different algebras");
        Multivector m = a;
        for (auto& [k, x] : b.c_) m.add(k, x);
        return m;
    }
    friend Multivector operator-(const Multivector& a) { return a.scaled(S(-1)); }
    friend Multivector operator-(const Multivector& a, const Multivector& b) { return a + (-b); }
    friend bool operator==(const Multivector& a, const Multivector& b) { return a.sig_ == b.sig_ && a.c_ == b.c_; }

private:
    Multivector filter(int parity) const
    {
        Multivector m(sig_);
        for (auto& [b, x] : c_)
            if (grade_of(b) % 2 == parity) m.c_.emplace(b, x);
        return m;
    }

    Signature sig_;
    std::map<Blade, S> c_;
};

template <class S>
Multivector<S> product(const Multivector<S>& a, const Multivector<S>& b)
{
    if (!(a.signature() == b.signature())) throw SignatureMismatch("product of elements of different algebras");
    Multivector<S> m(a.signature());
    for (auto& [ka, xa] : a.terms())
        for (auto& [kb, xb] : b.terms()) {
            S x = xa * xb;
            m.add(ka ^ kb, blade_sign(a.signature(), ka, kb) < 0 ? S(-1) * x : x);
        }
    return m;
}

template <class S>
Multivector<S> operator*(const Multivector<S>& a, const Multivector<S>& b)
{
    return product(a, b);
}

using CliffordElement = Multivector<Rational>;
using ComplexCliffordElement = Multivector<QComplex>;
using NumericElement = Multivector<double>;

template <class S>
Multivector<S> commutator(const Multivector<S>& a, const Multivector<S>& b)
{
    return a * b - b * a;
}

template <class S>
Multivector<S> anticommutator(const Multivector<S>& a, const Multivector<S>& b)
{
    return a * b + b * a;
}

enum class Involution { reversal, parity };

template <class S>
Multivector<S> involution(const Multivector<S>& a, Involution kind)
{
    Multivector<S> m(a.signature());
    for (auto& [b, x] : a.terms()) {
        int k = grade_of(b);
        bool flip = kind == Involution::parity ? k % 2 == 1 : (k * (k - 1) / 2) % 2 == 1;
        m.add(b, flip ? S(-1) * x : x);
    }
    return m;
}

template <class S>
Multivector<S> reversal(const Multivector<S>& a)
{
    return involution(a, Involution::reversal);
}

template <class S>
Multivector<S> parity(const Multivector<S>& a)
{
    return involution(a, Involution::parity);
}

inline ComplexCliffordElement complexify(const CliffordElement& a)
{
    ComplexCliffordElement m(a.signature());
    for (auto& [b, x] : a.terms()) m.add(b, QComplex(x));
    return m;
}

// e_c = i^{k+p} e_1 ... e_{2k}, normalised so that e_c^2 = 1
inline ComplexCliffordElement chirality(const Signature& sig)
{
    if (sig.n() % 2) throw OddDimension("chirality needs an even number of generators");
    std::size_t e = (sig.n() / 2 + sig.positives()) % 4;
    static const std::array<QComplex, 4> powers{QComplex(1), QComplex(0, 1), QComplex(-1), QComplex(0, -1)};
    Blade top = sig.n() ? (Blade(1) << sig.n()) - 1 : 0;
    return ComplexCliffordElement::blade(sig, top, powers[e]);
}

// (1/2) e_i e_j, the image of the so(p,q) generator M^{ij}
inline CliffordElement so_generator(const Signature& sig, std::size_t i, std::size_t j)
{
    if (i >= j) throw IndexOrder("so_generator needs i < j");
    return CliffordElement::generator(sig, i) * CliffordElement::generator(sig, j) *
           CliffordElement::scalar(sig, Rational(1, 2));
}

template <class S>
S eta(const Signature& sig, const std::vector<S>& v, const std::vector<S>& w)
{
    if (v.size() != sig.n() || w.size() != sig.n()) throw DimensionMismatch("vector length");
    S s(0);
    for (std::size_t i = 0; i < v.size(); ++i) s = s + S(sig.diag()[i]) * v[i] * w[i];
    return s;
}

inline bool is_unit_norm(const Rational& x) { return x == 1 || x == -1; }
inline bool is_unit_norm(double x) { return std::abs(std::abs(x) - 1.0) < 1e-9; }

// Product sign * v_1 ... v_k of unit vectors.
template <class S>
class PinElement {
public:
    PinElement(Signature sig, std::vector<std::vector<S>> factors, int sign = 1)
        : sig_(std::move(sig)), factors_(std::move(factors)), sign_(sign), element_(sig_)
    {
        if (sign != 1 && sign != -1) throw NotInPin("global sign must be +1 or -1");
        element_ = Multivector<S>::scalar(sig_, S(sign));
        for (auto& v : factors_) {
            S n = eta(sig_, v, v);
            if (!is_unit_norm(n)) throw NotInPin("factor is not a unit vector");
            norms_.push_back(n);
            element_ = element_ * Multivector<S>::vector(sig_, v);
        }
    }

    const Signature& signature() const { return sig_; }
    const std::vector<std::vector<S>>& factors() const { return factors_; }
    const std::vector<S>& norms() const { return norms_; }
    int sign() const { return sign_; }
    const Multivector<S>& element() const { return element_; }
    std::size_t length() const { return factors_.size(); }
    bool in_spin() const { return length() % 2 == 0; }

    PinElement negated() const { return PinElement(sig_, factors_, -sign_); }

    // v^{-1} = v / eta(v, v)
    Multivector<S> inverse() const
    {
        Multivector<S> m = Multivector<S>::scalar(sig_, S(sign_));
        for (std::size_t i = factors_.size(); i-- > 0;)
            m = m * Multivector<S>::vector(sig_, factors_[i]).scaled(S(1) / norms_[i]);
        return m;
    }

    friend PinElement operator*(const PinElement& a, const PinElement& b)
    {
        if (!(a.sig_ == b.sig_)) throw SignatureMismatch("Pin product across signatures");
        auto f = a.factors_;
        f.insert(f.end(), b.factors_.begin(), b.factors_.end());
        return PinElement(a.sig_, f, a.sign_ * b.sign_);
    }

private:
    Signature sig_;
    std::vector<std::vector<S>> factors_;
    int sign_;
    std::vector<S> norms_;
    Multivector<S> element_;
};

template <class S>
using SquareMatrix = std::vector<std::vector<S>>;

// Column j is (-1)^k x e_j x^{-1}.
template <class S>
SquareMatrix<S> covering_matrix(const PinElement<S>& x)
{
    const Signature& sig = x.signature();
    std::size_t n = sig.n();
    Multivector<S> inv = x.inverse();
    S twist = x.length() % 2 ? S(-1) : S(1);
    SquareMatrix<S> m(n, std::vector<S>(n, S(0)));
    for (std::size_t j = 0; j < n; ++j) {
        Multivector<S> w = x.element() * Multivector<S>::generator(sig, j + 1) * inv;
        for (std::size_t i = 0; i < n; ++i) m[i][j] = twist * w.coeff(Blade(1) << i);
    }
    return m;
}

template <class S>
SquareMatrix<S> matmul(const SquareMatrix<S>& a, const SquareMatrix<S>& b)
{
    std::size_t n = a.size();
    SquareMatrix<S> c(n, std::vector<S>(n, S(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] = c[i][j] + a[i][k] * b[k][j];
    return c;
}

template <class S>
S determinant(SquareMatrix<S> a)
{
    std::size_t n = a.size();
    S det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == S(0)) ++p;
        if (p == n) return S(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            det = S(-1) * det;
        }
        det = det * a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            S f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] = a[r][k] - f * a[c][k];
        }
    }
    return det;
}

// M^T diag M = diag
template <class S>
bool preserves_eta(const Signature& sig, const SquareMatrix<S>& m, double tol = 0)
{
    std::size_t n = sig.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            S s(0);
            for (std::size_t k = 0; k < n; ++k) s = s + S(sig.diag()[k]) * m[k][i] * m[k][j];
            S want = i == j ? S(sig.diag()[i]) : S(0);
            if constexpr (std::is_floating_point_v<S>) {
                if (std::abs(s - want) > tol) return false;
            } else if (!(s == want)) {
                return false;
            }
        }
    return true;
}

// ---------------------------------------------------------------------------
// Dense matrices for the representation tables.

template <class S>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, S(0)) {}
    Mat(std::initializer_list<std::initializer_list<S>> rows) : r_(rows.size()), c_(rows.begin()->size())
    {
        for (auto& row : rows) {
            if (row.size() != c_) throw DimensionMismatch("ragged matrix");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }
    static Mat identity(std::size_t n)
    {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    S& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    const std::vector<S>& data() const { return a_; }

    friend Mat operator+(const Mat& a, const Mat& b)
    {
        Mat m = a;
        for (std::size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] + b.a_[i];
        return m;
    }
    friend Mat operator-(const Mat& a, const Mat& b) { return a + b * S(-1); }
    friend Mat operator*(const Mat& a, const S& x)
    {
        Mat m = a;
        for (auto& y : m.a_) y = y * x;
        return m;
    }
    friend Mat operator*(const Mat& a, const Mat& b)
    {
        if (a.c_ != b.r_) throw DimensionMismatch("matrix product");
        Mat m(a.r_, b.c_);
        for (std::size_t i = 0; i < a.r_; ++i)
            for (std::size_t k = 0; k < a.c_; ++k) {
                const S& x = a(i, k);
                if (x == S(0)) continue;
                for (std::size_t j = 0; j < b.c_; ++j) m(i, j) = m(i, j) + x * b(k, j);
            }
        return m;
    }
    friend bool operator==(const Mat& a, const Mat& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<S> a_;
};

template <class S>
Mat<S> kron(const Mat<S>& a, const Mat<S>& b)
{
    Mat<S> m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return m;
}

using GMatrix = Mat<GaussInt>;
using CMatrix = Mat<std::complex<double>>;

template <class F>
std::size_t row_rank(std::vector<std::vector<F>> rows)
{
    std::size_t rank = 0;
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == F(0)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == F(0)) continue;
            F f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] = rows[r][k] - f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

enum class Field { real, complex };

struct MatrixRep {
    std::string name;
    Signature signature;
    Field field = Field::real;
    std::vector<GMatrix> generators;

    std::size_t dimension() const { return generators.empty() ? 1 : generators[0].rows(); }

    GMatrix blade_image(Blade b) const
    {
        GMatrix m = GMatrix::identity(dimension());
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (b >> i & 1u) m = m * generators[i];
        return m;
    }
    GMatrix image(const Multivector<GaussInt>& x) const
    {
        GMatrix m(dimension(), dimension());
        for (auto& [b, c] : x.terms()) m = m + blade_image(b) * c;
        return m;
    }
};

// Span of the blade images, over R or C according to the rep's field.
inline std::size_t image_rank(const MatrixRep& rep)
{
    std::size_t blades = std::size_t(1) << rep.signature.n();
    if (rep.field == Field::complex) {
        std::vector<std::vector<QComplex>> rows;
        for (Blade b = 0; b < blades; ++b) {
            std::vector<QComplex> r;
            GMatrix img = rep.blade_image(b);
            for (auto& x : img.data()) r.emplace_back(Rational(x.re), Rational(x.im));
            rows.push_back(std::move(r));
        }
        return row_rank(std::move(rows));
    }
    std::vector<std::vector<Rational>> rows;
    for (Blade b = 0; b < blades; ++b) {
        std::vector<Rational> r;
        GMatrix img = rep.blade_image(b);
        for (auto& x : img.data()) {
            r.emplace_back(x.re);
            r.emplace_back(x.im);
        }
        rows.push_back(std::move(r));
    }
    return row_rank(std::move(rows));
}

struct RepReport {
    std::vector<std::pair<std::string, bool>> checks;

    void add(std::string name, bool ok) { checks.emplace_back(std::move(name), ok); }
    bool ok() const
    {
        for (auto& c : checks)
            if (!c.second) return false;
        return true;
    }
    bool passed(const std::string& name) const
    {
        for (auto& c : checks)
            if (c.first == name) return c.second;
        return false;
    }
};

inline bool generator_relations(const MatrixRep& rep)
{
    std::size_t n = rep.signature.n();
    if (rep.generators.size() != n) return false;
    GMatrix id = GMatrix::identity(rep.dimension());
    GMatrix zero(rep.dimension(), rep.dimension());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            GMatrix ac = rep.generators[i] * rep.generators[j] + rep.generators[j] * rep.generators[i];
            GMatrix want = i == j ? id * GaussInt(2 * rep.signature.diag()[i]) : zero;
            if (!(ac == want)) return false;
        }
    return true;
}

// img(e_A) img(e_B) = sign(A,B) img(e_{A xor B}) on every pair of basis blades
inline bool multiplicative(const MatrixRep& rep)
{
    std::size_t blades = std::size_t(1) << rep.signature.n();
    std::vector<GMatrix> img;
    for (Blade b = 0; b < blades; ++b) img.push_back(rep.blade_image(b));
    for (Blade a = 0; a < blades; ++a)
        for (Blade b = 0; b < blades; ++b)
            if (!(img[a] * img[b] == img[a ^ b] * GaussInt(blade_sign(rep.signature, a, b)))) return false;
    return true;
}

inline RepReport verify(const MatrixRep& rep)
{
    RepReport r;
    r.add("relations", generator_relations(rep));
    r.add("multiplicative", multiplicative(rep));
    r.add("injective", image_rank(rep) == (std::size_t(1) << rep.signature.n()));
    return r;
}

namespace rep_detail {
inline const GaussInt I = GaussInt::i();
inline GMatrix diag2(GaussInt a, GaussInt b) { return GMatrix{{a, 0}, {0, b}}; }
inline GMatrix j2() { return GMatrix{{0, 1}, {-1, 0}}; }
}  // namespace rep_detail

// Images of the two generators of CCl(2) (both square to -1).
inline std::array<GMatrix, 2> ccl2_generators()
{
    using namespace rep_detail;
    return {diag2(I, -I), j2()};
}

// CCl(n) -> CCl(n+2): f_j = e_j (x) i e'_1 e'_2, f_{n+1} = 1 (x) e'_1, f_{n+2} = 1 (x) e'_2.
// The image of X (x) Y is kron(Y, X).
inline MatrixRep periodicity_cc(const MatrixRep& base)
{
    auto [p1, p2] = ccl2_generators();
    GMatrix w = p1 * p2 * GaussInt::i();
    GMatrix id = GMatrix::identity(base.dimension());
    MatrixRep r;
    r.name = "CCl(" + std::to_string(base.signature.n() + 2) + ")";
    r.signature = base.signature.append({-1, -1});
    r.field = Field::complex;
    for (auto& g : base.generators) r.generators.push_back(kron(w, g));
    r.generators.push_back(kron(p1, id));
    r.generators.push_back(kron(p2, id));
    return r;
}

inline MatrixRep cc_rep(std::size_t k)
{
    MatrixRep r;
    r.name = "CCl(0)";
    r.field = Field::complex;
    for (std::size_t i = 0; i < k; ++i) {
        r = periodicity_cc(r);
    }
    return r;
}

// Cl(p,q) -> Cl(p+1,q+1): base generators go to g (x) eps'_0 e'_0, then 1 (x) eps'_0 and 1 (x) e'_0.
inline MatrixRep periodicity_11(const MatrixRep& base)
{
    using namespace rep_detail;
    GMatrix eps = diag2(1, -1), e = j2();
    GMatrix w = eps * e;
    GMatrix id = GMatrix::identity(base.dimension());
    MatrixRep r;
    r.name = "periodicity of " + base.name;
    r.signature = base.signature.append({1, -1});
    r.field = base.field;
    for (auto& g : base.generators) r.generators.push_back(kron(w, g));
    r.generators.push_back(kron(eps, id));
    r.generators.push_back(kron(e, id));
    return r;
}

enum class RepCase { Cl1_C, Cl10_RR, Cl2_H, Cl11_M2R, CCl1, CCl2, periodicity_CC, periodicity_11, Cl13_M2H };

inline const std::vector<std::pair<std::string, RepCase>>& rep_case_names()
{
    static const std::vector<std::pair<std::string, RepCase>> names{
        {"Cl1_C", RepCase::Cl1_C},         {"Cl10_RR", RepCase::Cl10_RR},
        {"Cl2_H", RepCase::Cl2_H},         {"Cl11_M2R", RepCase::Cl11_M2R},
        {"CCl1", RepCase::CCl1},           {"CCl2", RepCase::CCl2},
        {"periodicity_CC", RepCase::periodicity_CC}, {"periodicity_11", RepCase::periodicity_11},
        {"Cl13_M2H", RepCase::Cl13_M2H}};
    return names;
}

inline RepCase rep_case_from_name(const std::string& s)
{
    for (auto& [n, c] : rep_case_names())
        if (n == s) return c;
    throw ParseError("unknown representation case '" + s + "'");
}

inline std::string rep_case_name(RepCase c)
{
    for (auto& [n, k] : rep_case_names())
        if (k == c) return n;
    return "?";
}

inline MatrixRep quaternion_rep()
{
    using namespace rep_detail;
    return {"Cl(0,2) = H", Signature{-1, -1}, Field::real, {diag2(I, -I), GMatrix{{0, I}, {I, 0}}}};
}

inline MatrixRep gamma_rep()
{
    using namespace rep_detail;
    GaussInt o = 0;
    GaussInt mi = -I;
    MatrixRep r{"Cl(1,3) = M(2,H)", Signature{1, -1, -1, -1}, Field::real, {}};
    r.generators.push_back(GMatrix{{1, o, o, o}, {o, 1, o, o}, {o, o, -1, o}, {o, o, o, -1}});
    r.generators.push_back(GMatrix{{o, o, 1, o}, {o, o, o, 1}, {-1, o, o, o}, {o, -1, o, o}});
    r.generators.push_back(GMatrix{{o, o, I, o}, {o, o, o, mi}, {I, o, o, o}, {o, mi, o, o}});
    r.generators.push_back(GMatrix{{o, o, o, I}, {o, o, I, o}, {o, I, o, o}, {I, o, o, o}});
    return r;
}

inline GMatrix gamma_chirality_matrix()
{
    return GMatrix{{0, 0, 0, -1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}};
}

struct SmallRep {
    MatrixRep rep;
    RepReport report;
};

inline SmallRep small_rep(RepCase c)
{
    using namespace rep_detail;
    SmallRep out;
    MatrixRep& rep = out.rep;
    RepReport extra;
    GMatrix id2 = GMatrix::identity(2);
    switch (c) {
    case RepCase::Cl1_C:
        rep = {"Cl(1) = C", Signature{-1}, Field::real, {GMatrix{{I}}}};
        break;
    case RepCase::Cl10_RR: {
        rep = {"Cl(1,0) = R + R", Signature{1}, Field::real, {diag2(-1, 1)}};
        // e_pm = (1 +- e_1)/2; doubled: (2e_pm)^2 = 2 (2e_pm)
        GMatrix p = id2 + rep.generators[0], m = id2 - rep.generators[0];
        extra.add("idempotents", p * p == p * GaussInt(2) && m * m == m * GaussInt(2) && m * p == GMatrix(2, 2));
        break;
    }
    case RepCase::Cl2_H: {
        rep = {"Cl(2) = H", Signature{-1, -1}, Field::real, {diag2(I, -I), j2()}};
        extra.add("e1e2 image", rep.blade_image(3) == (GMatrix{{0, I}, {I, 0}}));
        break;
    }
    case RepCase::Cl11_M2R: {
        rep = {"Cl(1,1) = M(2,R)", Signature{1, -1}, Field::real, {diag2(-1, 1), j2()}};
        GMatrix w = rep.blade_image(3);
        extra.add("e1e2 image", w == (GMatrix{{0, -1}, {-1, 0}}) && w * w == id2);
        break;
    }
    case RepCase::CCl1: {
        rep = {"CCl(1) = C + C", Signature{-1}, Field::complex, {diag2(I, -I)}};
        // (1 -+ i e_0)/2, doubled
        GMatrix ie = rep.generators[0] * I;
        GMatrix p = id2 - ie, m = id2 + ie;
        extra.add("idempotents", p * p == p * GaussInt(2) && m * m == m * GaussInt(2) && m * p == GMatrix(2, 2) &&
                                     p + m == id2 * GaussInt(2));
        break;
    }
    case RepCase::CCl2: {
        auto g = ccl2_generators();
        rep = {"CCl(2) = M(2,C)", Signature{-1, -1}, Field::complex, {g[0], g[1]}};
        extra.add("full matrix algebra", image_rank(rep) == 4);
        break;
    }
    case RepCase::periodicity_CC: {
        rep = periodicity_cc(cc_rep(1));
        extra.add("dimension audit", image_rank(rep) == 16 && rep.dimension() * rep.dimension() == 16);
        break;
    }
    case RepCase::periodicity_11: {
        rep = periodicity_11(small_rep(RepCase::Cl11_M2R).rep);
        extra.add("full matrix algebra", image_rank(rep) == 16 && rep.dimension() == 4);
        break;
    }
    case RepCase::Cl13_M2H: {
        rep = gamma_rep();
        GMatrix g = rep.blade_image(15);
        // e_c = i^{2+1} Gamma = -i Gamma
        GMatrix ec = g * (-I);
        extra.add("chirality", g == gamma_chirality_matrix() && ec * ec == GMatrix::identity(4));
        MatrixRep t = periodicity_11(quaternion_rep());
        extra.add("tensor decomposition", t.generators[2] == rep.generators[0] && t.generators[3] == rep.generators[1] &&
                                              t.generators[0] == rep.generators[2] &&
                                              t.generators[1] == rep.generators[3]);
        break;
    }
    }
    out.report = verify(rep);
    for (auto& ch : extra.checks) out.report.add(ch.first, ch.second);
    return out;
}

// ---------------------------------------------------------------------------
// 2D spinor tables.

enum class SpinKind { euclidean, minkowskian };

struct TableRow {
    std::string name;
    double max_error = 0;
};

struct SpinSample {
    std::string name;
    double parameter;
    CMatrix element;
    CMatrix action;
};

struct SpinTables {
    SpinKind kind;
    std::vector<TableRow> rows;
    std::vector<SpinSample> samples;

    bool ok(double tol = 1e-9) const
    {
        for (auto& r : rows)
            if (!(r.max_error <= tol)) return false;
        return true;
    }
};

namespace spin_detail {
using C = std::complex<double>;

inline double distance(const CMatrix& a, const CMatrix& b)
{
    double d = 0;
    for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

inline CMatrix inverse2(const CMatrix& m)
{
    C det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return CMatrix{{m(1, 1) / det, -m(0, 1) / det}, {-m(1, 0) / det, m(0, 0) / det}};
}

// Column j holds the coordinates of (+-) x e_j x^{-1}; coordinates via tr(E_k X) / (2 diag_k).
inline CMatrix action(const std::array<CMatrix, 2>& gens, const std::array<int, 2>& diag, const CMatrix& x,
                      bool odd)
{
    CMatrix inv = inverse2(x);
    CMatrix a(2, 2);
    for (int j = 0; j < 2; ++j) {
        CMatrix w = x * gens[j] * inv;
        if (odd) w = w * C(-1);
        for (int k = 0; k < 2; ++k) {
            CMatrix t = gens[k] * w;
            a(k, j) = (t(0, 0) + t(1, 1)) / (2.0 * diag[k]);
        }
    }
    return a;
}

inline CMatrix real2(double a, double b, double c, double d) { return CMatrix{{a, b}, {c, d}}; }

inline std::vector<double> parameters()
{
    std::vector<double> t;
    for (int k = 0; k < 20; ++k) t.push_back(-1.9 + 0.2 * k + 0.013 * k * k);
    return t;
}
}  // namespace spin_detail

inline std::string spin_kind_name(SpinKind k) { return k == SpinKind::euclidean ? "euclidean" : "minkowskian"; }

inline SpinKind spin_kind_from_name(const std::string& s)
{
    if (s == "euclidean") return SpinKind::euclidean;
    if (s == "minkowskian") return SpinKind::minkowskian;
    throw ParseError("unknown table kind '" + s + "'");
}

inline SpinTables euclidean_tables()
{
    using namespace spin_detail;
    const C i(0, 1);
    SpinTables t{SpinKind::euclidean, {}, {}};
    std::array<CMatrix, 2> g{CMatrix{{i, 0}, {0, -i}}, CMatrix{{0, i}, {i, 0}}};
    std::array<int, 2> diag{-1, -1};
    Signature sig{-1, -1};
    CMatrix id = CMatrix::identity(2), e12 = g[0] * g[1];
    auto u = [&](double th) { return g[0] * C(std::cos(th)) + g[1] * C(std::sin(th)); };
    auto s = [&](double r) { return id * C(std::cos(r)) + e12 * C(std::sin(r)); };
    auto num_u = [&](double th) { return NumericElement::vector(sig, {std::cos(th), std::sin(th)}); };

    TableRow e12row{"e1e2 image", distance(e12, real2(0, -1, 1, 0))};
    TableRow urow{"u_theta matrix"}, srow{"s_rho = u_psi u_theta"}, prod{"u_psi u_theta in Cl(2)"};
    TableRow uact{"u_theta action"}, sact{"s_rho action"}, w1{"Weyl (1,i)"}, w2{"Weyl (1,-i)"}, zero{"rho = 0"};
    auto params = parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
        double th = params[k], psi = params[(k * 7 + 3) % params.size()] * 1.3 + 0.4;
        double rho = std::numbers::pi + psi - th;
        urow.max_error = std::max(urow.max_error, distance(u(th), CMatrix{{i * std::cos(th), i * std::sin(th)},
                                                                           {i * std::sin(th), -i * std::cos(th)}}));
        srow.max_error = std::max(srow.max_error, distance(u(psi) * u(th), s(rho)));
        srow.max_error = std::max(srow.max_error, distance(s(rho), real2(std::cos(rho), -std::sin(rho),
                                                                          std::sin(rho), std::cos(rho))));
        NumericElement pp = num_u(psi) * num_u(th);
        double err = std::max(std::abs(pp.coeff(0) - std::cos(rho)), std::abs(pp.coeff(3) - std::sin(rho)));
        err = std::max({err, std::abs(pp.coeff(1)), std::abs(pp.coeff(2))});
        prod.max_error = std::max(prod.max_error, err);
        CMatrix ua = action(g, diag, u(th), true);
        uact.max_error = std::max(uact.max_error, distance(ua, real2(-std::cos(2 * th), -std::sin(2 * th),
                                                                     -std::sin(2 * th), std::cos(2 * th))));
        CMatrix sa = action(g, diag, s(rho), false);
        sact.max_error = std::max(sact.max_error, distance(sa, real2(std::cos(2 * rho), -std::sin(2 * rho),
                                                                     std::sin(2 * rho), std::cos(2 * rho))));
        CMatrix v1{{1}, {i}}, v2{{1}, {-i}};
        w1.max_error = std::max(w1.max_error, distance(s(rho) * v1, v1 * std::exp(-i * rho)));
        w2.max_error = std::max(w2.max_error, distance(s(rho) * v2, v2 * std::exp(i * rho)));
        if (k % 5 == 0) {
            t.samples.push_back({"u_theta", th, u(th), ua});
            t.samples.push_back({"s_rho", rho, s(rho), sa});
        }
    }
    zero.max_error = std::max(distance(s(0), id), distance(action(g, diag, s(0), false), id));
    t.rows = {e12row, urow, srow, prod, uact, sact, w1, w2, zero};
    return t;
}

inline SpinTables minkowskian_tables()
{
    using namespace spin_detail;
    SpinTables t{SpinKind::minkowskian, {}, {}};
    std::array<CMatrix, 2> g{real2(1, 0, 0, -1), real2(0, 1, -1, 0)};
    std::array<int, 2> diag{1, -1};
    CMatrix id = CMatrix::identity(2), e12 = g[0] * g[1];
    using std::cosh, std::sinh;

    struct Entry {
        std::string name;
        bool odd;
        CMatrix (*element)(double);
        CMatrix (*expected)(double);
    };
    // Elements and actions as tabulated; the Pin actions are read with row i the image of e_i.
    static const std::vector<Entry> entries{
        {"s+", false, [](double r) { return real2(cosh(r), sinh(r), sinh(r), cosh(r)); },
         [](double r) { return real2(cosh(-2 * r), sinh(-2 * r), sinh(-2 * r), cosh(-2 * r)); }},
        {"s-", false, [](double r) { return real2(-cosh(r), sinh(r), sinh(r), -cosh(r)); },
         [](double r) { return real2(cosh(2 * r), sinh(2 * r), sinh(2 * r), cosh(2 * r)); }},
        {"t+", false, [](double r) { return real2(sinh(r), cosh(r), cosh(r), sinh(r)); },
         [](double r) { return real2(-cosh(2 * r), sinh(2 * r), sinh(2 * r), -cosh(2 * r)); }},
        {"t-", false, [](double r) { return real2(sinh(r), -cosh(r), -cosh(r), sinh(r)); },
         [](double r) { return real2(-cosh(-2 * r), sinh(-2 * r), sinh(-2 * r), -cosh(-2 * r)); }},
        {"u+", true, [](double r) { return real2(cosh(r), sinh(r), -sinh(r), -cosh(r)); },
         [](double r) { return real2(-cosh(-2 * r), sinh(-2 * r), -sinh(-2 * r), cosh(-2 * r)); }},
        {"u-", true, [](double r) { return real2(-cosh(r), sinh(r), -sinh(r), cosh(r)); },
         [](double r) { return real2(-cosh(2 * r), sinh(2 * r), -sinh(2 * r), cosh(2 * r)); }},
        {"v+", true, [](double r) { return real2(sinh(r), cosh(r), -cosh(r), -sinh(r)); },
         [](double r) { return real2(cosh(-2 * r), -sinh(-2 * r), sinh(-2 * r), -cosh(-2 * r)); }},
        {"v-", true, [](double r) { return real2(sinh(r), -cosh(r), cosh(r), -sinh(r)); },
         [](double r) { return real2(cosh(2 * r), -sinh(2 * r), sinh(2 * r), -cosh(2 * r)); }},
    };
    auto transpose = [](const CMatrix& m) { return CMatrix{{m(0, 0), m(1, 0)}, {m(0, 1), m(1, 1)}}; };

    TableRow e12row{"e1e2 image", distance(e12, real2(0, 1, 1, 0))};
    TableRow uplus{"u+_theta matrix"}, sminus{"s-_rho = u+_psi u+_theta"};
    std::vector<TableRow> rows;
    for (auto& e : entries) rows.push_back({e.name + " action"});
    TableRow weyl{"Weyl eigenvalues"}, zero{"rho = 0"};
    auto params = parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
        double r = params[k] * 0.7;
        double psi = params[(k * 7 + 3) % params.size()] * 0.6 + 0.1, th = r * 0.5 - 0.2;
        auto up = [&](double a) { return g[0] * sinh(a) + g[1] * cosh(a); };
        uplus.max_error = std::max(uplus.max_error, distance(up(th), real2(sinh(th), cosh(th), -cosh(th), -sinh(th))));
        double rho = psi - th;
        sminus.max_error = std::max(sminus.max_error, distance(up(psi) * up(th), entries[1].element(rho)));
        for (std::size_t j = 0; j < entries.size(); ++j) {
            const Entry& e = entries[j];
            CMatrix a = action(g, diag, e.element(r), e.odd);
            CMatrix want = e.odd ? transpose(e.expected(r)) : e.expected(r);
            rows[j].max_error = std::max(rows[j].max_error, distance(a, want));
            if (k % 5 == 0) t.samples.push_back({e.name, r, e.element(r), a});
        }
        CMatrix p{{1}, {1}}, m{{1}, {-1}};
        double er = std::exp(r), emr = std::exp(-r);
        std::array<std::pair<double, double>, 4> eig{{{er, emr}, {-emr, -er}, {er, -emr}, {-emr, er}}};
        for (int j = 0; j < 4; ++j) {
            CMatrix x = entries[j].element(r);
            weyl.max_error = std::max({weyl.max_error, distance(x * p, p * C(eig[j].first)),
                                       distance(x * m, m * C(eig[j].second))});
        }
    }
    zero.max_error = std::max({distance(entries[0].element(0), id), distance(entries[0].expected(0), id),
                               distance(action(g, diag, entries[1].element(0), false), id)});
    t.rows = {e12row, uplus, sminus};
    t.rows.insert(t.rows.end(), rows.begin(), rows.end());
    t.rows.push_back(weyl);
    t.rows.push_back(zero);
    return t;
}

inline SpinTables spin2_tables(SpinKind k)
{
    return k == SpinKind::euclidean ? euclidean_tables() : minkowskian_tables();
}

// ---------------------------------------------------------------------------
// Lift squares of the differential of a free involution, for pin structures.

enum class LiftCase {
    sphere_antipodal,
    torus_klein_xi0,
    torus_klein_xi1,
    torus_klein_xi2,
    torus_klein_xi3,
    moebius_tau4_xi0,
    moebius_tau4_xi1,
    moebius_tau4_xi2
};
enum class PinSign { plus, minus };

inline const std::vector<std::pair<std::string, LiftCase>>& lift_case_names()
{
    static const std::vector<std::pair<std::string, LiftCase>> names{
        {"sphere_antipodal", LiftCase::sphere_antipodal}, {"torus_klein_xi0", LiftCase::torus_klein_xi0},
        {"torus_klein_xi1", LiftCase::torus_klein_xi1},   {"torus_klein_xi2", LiftCase::torus_klein_xi2},
        {"torus_klein_xi3", LiftCase::torus_klein_xi3},   {"moebius_tau4_xi0", LiftCase::moebius_tau4_xi0},
        {"moebius_tau4_xi1", LiftCase::moebius_tau4_xi1}, {"moebius_tau4_xi2", LiftCase::moebius_tau4_xi2}};
    return names;
}

inline LiftCase lift_case_from_name(const std::string& s)
{
    for (auto& [n, c] : lift_case_names())
        if (n == s) return c;
    throw ParseError("unknown lift case '" + s + "'");
}

inline PinSign pin_sign_from_name(const std::string& s)
{
    if (s == "plus") return PinSign::plus;
    if (s == "minus") return PinSign::minus;
    throw ParseError("pin sign must be plus or minus");
}

struct LiftSquare {
    int value = 0;
    double deviation = 0;   // spread of the scalar part across samples
    double non_scalar = 0;  // largest non-scalar coefficient seen
};

// Spin lift of the rotation by x: Ad(R~_x) rotates vectors by x, and R~_{2 pi} = -1.
inline NumericElement rotation_lift(const Signature& sig, double x)
{
    NumericElement r = NumericElement::scalar(sig, std::cos(x / 2));
    r.add(3, -sig[1] * std::sin(x / 2));
    return r;
}

// Square of the lift L(tau p) L(p), with L(p) = R~(tau p)^{-1} g R~(p) for torus and strip,
// and the tangent frame vector -sin e1 + cos e2 on the sphere.
inline LiftSquare lift_square_report(LiftCase c, PinSign pin)
{
    Signature sig = Signature::uniform(2, pin == PinSign::plus ? 1 : -1);
    const double pi = std::numbers::pi;
    auto e = [&](std::size_t i) { return NumericElement::generator(sig, i); };

    struct Torus {
        std::size_t g;
        double a, b;  // frame rotation angle a*theta + b*phi
        bool klein;   // tau(theta, phi) = (theta + pi, -phi), otherwise (pi - theta, phi + pi)
    };
    Torus t{2, 0, 0, true};
    switch (c) {
    case LiftCase::sphere_antipodal: break;
    case LiftCase::torus_klein_xi0: t = {2, 0, 0, true}; break;
    case LiftCase::torus_klein_xi1: t = {2, 1, 0, true}; break;
    case LiftCase::torus_klein_xi2: t = {2, 0, 1, true}; break;
    case LiftCase::torus_klein_xi3: t = {2, 1, 1, true}; break;
    case LiftCase::moebius_tau4_xi0: t = {1, 0, 0, false}; break;
    case LiftCase::moebius_tau4_xi1: t = {1, 1, 0, false}; break;
    case LiftCase::moebius_tau4_xi2: t = {1, 0, 1, false}; break;
    }
    auto tau = [&](std::array<double, 2> p) -> std::array<double, 2> {
        if (t.klein) return {p[0] + pi, -p[1]};
        return {pi - p[0], p[1] + pi};
    };
    auto frame = [&](std::array<double, 2> p) { return t.a * p[0] + t.b * p[1]; };
    auto lift = [&](std::array<double, 2> p) {
        if (c == LiftCase::sphere_antipodal) return NumericElement::vector(sig, {-std::sin(p[0]), std::cos(p[0])});
        return rotation_lift(sig, -frame(tau(p))) * e(t.g) * rotation_lift(sig, frame(p));
    };

    LiftSquare out;
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < 32; ++k) {
        std::array<double, 2> p{-3.0 + 0.21 * k, 2.5 - 0.37 * k + 0.01 * k * k};
        NumericElement sq = lift(tau(p)) * lift(p);
        for (auto& [b, x] : sq.terms())
            if (b) out.non_scalar = std::max(out.non_scalar, std::abs(x));
        lo = std::min(lo, sq.scalar_part());
        hi = std::max(hi, sq.scalar_part());
    }
    out.deviation = hi - lo;
    double mid = (hi + lo) / 2;
    out.value = mid > 0 ? 1 : -1;
    out.deviation = std::max(out.deviation, std::abs(mid - out.value));
    return out;
}

inline int dtau_square(LiftCase c, PinSign pin)
{
    LiftSquare r = lift_square_report(c, pin);
    if (r.deviation >= 1e-12 || r.non_scalar >= 1e-12)
        throw NotWellDefined("lift square depends on the sampled angle");
    return r.value;
}

}  // namespace cohomolab
