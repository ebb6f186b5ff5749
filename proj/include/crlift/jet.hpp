// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace crlift {

using Complex = std::complex<double>;

/// Thrown when a jet operation hits a point where the operation is not
/// defined (division by a jet with vanishing constant term, log/sqrt/pow at
/// the branch point, evaluation outside a potential's admissible region).
class SingularPointError : public std::runtime_error {
  public:
    explicit SingularPointError(const std::string& what) : std::runtime_error(what) {}
};

/// Maximum total order carried by Jet1/Jet2. The metric needs two derivatives
/// of the potential data and the finite-difference curvature engine supplies
/// the remaining two, so order 4 is enough for every formula in the library.
inline constexpr int kJetOrder = 4;

namespace detail {

/// Linear index of the (i,j) coefficient in the triangular total-degree layout
/// (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...
constexpr int jet2_index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }

constexpr int jet2_size(int order) { return (order + 1) * (order + 2) / 2; }

inline void check_same_base(double ax, double ay, double bx, double by) {
    if (ax != bx || ay != by)
        throw std::invalid_argument("jet arithmetic on mismatched base points");
}

} // namespace detail

/// Truncated bivariate Taylor expansion around a base point (x0, y0).
///
/// coeffs[idx(i,j)] is the Taylor coefficient of (x-x0)^i (y-y0)^j, i.e. the
/// partial derivative divided by i!·j!. Coefficients are complex throughout:
/// Wirtinger derivatives of real fields produce complex jets, and reality is
/// asserted by callers rather than assumed by the type. Values are immutable
/// in spirit; all operations return new jets and are safe to run in parallel.
class Jet2 {
  public:
    static constexpr int kSize = detail::jet2_size(kJetOrder);

    Jet2() = default;

    /// Jet of the constant function v.
    static Jet2 constant(Complex v, double x0, double y0, int order = kJetOrder) {
        Jet2 j(x0, y0, order);
        j.c_[0] = v;
        return j;
    }

    /// Jet of the coordinate function x at (x0, y0).
    static Jet2 variable_x(double x0, double y0, int order = kJetOrder) {
        Jet2 j(x0, y0, order);
        j.c_[0] = x0;
        if (order >= 1) j.c_[detail::jet2_index(1, 0)] = 1.0;
        return j;
    }

    /// Jet of the coordinate function y at (x0, y0).
    static Jet2 variable_y(double x0, double y0, int order = kJetOrder) {
        Jet2 j(x0, y0, order);
        j.c_[0] = y0;
        if (order >= 1) j.c_[detail::jet2_index(0, 1)] = 1.0;
        return j;
    }

    /// Jet of the complex coordinate z = x + iy.
    static Jet2 variable_z(double x0, double y0, int order = kJetOrder) {
        Jet2 j(x0, y0, order);
        j.c_[0] = Complex(x0, y0);
        if (order >= 1) {
            j.c_[detail::jet2_index(1, 0)] = 1.0;
            j.c_[detail::jet2_index(0, 1)] = Complex(0.0, 1.0);
        }
        return j;
    }

    int order() const { return order_; }
    double base_x() const { return x0_; }
    double base_y() const { return y0_; }

    /// Taylor coefficient of (x-x0)^i (y-y0)^j (derivative / i!j!).
    Complex coeff(int i, int j) const {
        if (i < 0 || j < 0 || i + j > order_) return 0.0;
        return c_[detail::jet2_index(i, j)];
    }

    void set_coeff(int i, int j, Complex v) { c_[detail::jet2_index(i, j)] = v; }

    /// Value of the underlying function at the base point.
    Complex value() const { return c_[0]; }

    /// Partial derivative d^{i+j} f / dx^i dy^j at the base point.
    Complex deriv(int i, int j) const {
        double fact = 1.0;
        for (int k = 2; k <= i; ++k) fact *= k;
        for (int k = 2; k <= j; ++k) fact *= k;
        return coeff(i, j) * fact;
    }

    Jet2 operator-() const {
        Jet2 r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        detail::check_same_base(a.x0_, a.y0_, b.x0_, b.y0_);
        Jet2 r(a.x0_, a.y0_, std::min(a.order_, b.order_));
        for (int n = 0; n < detail::jet2_size(r.order_); ++n) r.c_[n] = a.c_[n] + b.c_[n];
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        detail::check_same_base(a.x0_, a.y0_, b.x0_, b.y0_);
        Jet2 r(a.x0_, a.y0_, std::min(a.order_, b.order_));
        for (int n = 0; n < detail::jet2_size(r.order_); ++n) r.c_[n] = a.c_[n] - b.c_[n];
        return r;
    }

    /// Truncated Cauchy product: exact on polynomials of total degree <= order.
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        detail::check_same_base(a.x0_, a.y0_, b.x0_, b.y0_);
        Jet2 r(a.x0_, a.y0_, std::min(a.order_, b.order_));
        for (int ia = 0; ia <= r.order_; ++ia)
            for (int ja = 0; ja + ia <= r.order_; ++ja) {
                const Complex ca = a.c_[detail::jet2_index(ia, ja)];
                if (ca == 0.0) continue;
                for (int ib = 0; ia + ib <= r.order_; ++ib)
                    for (int jb = 0; ia + ja + ib + jb <= r.order_; ++jb) {
                        const Complex cb = b.c_[detail::jet2_index(ib, jb)];
                        if (cb == 0.0) continue;
                        r.c_[detail::jet2_index(ia + ib, ja + jb)] += ca * cb;
                    }
            }
        return r;
    }

    /// Triangular solve of r*b = a degree by degree.
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        detail::check_same_base(a.x0_, a.y0_, b.x0_, b.y0_);
        const Complex b0 = b.c_[0];
        if (std::abs(b0) == 0.0)
            throw SingularPointError("jet division by zero constant term");
        const int order = std::min(a.order_, b.order_);
        Jet2 r(a.x0_, a.y0_, order);
        for (int d = 0; d <= order; ++d)
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                Complex acc = a.c_[detail::jet2_index(i, j)];
                // subtract contributions r_{kl} * b_{(i-k)(j-l)} with (k,l) < (i,j)
                for (int k = 0; k <= i; ++k)
                    for (int l = 0; l <= j; ++l) {
                        if (k == i && l == j) continue;
                        acc -= r.c_[detail::jet2_index(k, l)] *
                               b.c_[detail::jet2_index(i - k, j - l)];
                    }
                r.c_[detail::jet2_index(i, j)] = acc / b0;
            }
        return r;
    }

    friend Jet2 operator+(const Jet2& a, Complex s) { return a + constant(s, a.x0_, a.y0_, a.order_); }
    friend Jet2 operator+(Complex s, const Jet2& a) { return a + s; }
    friend Jet2 operator-(const Jet2& a, Complex s) { return a + (-s); }
    friend Jet2 operator-(Complex s, const Jet2& a) { return (-a) + s; }
    friend Jet2 operator*(const Jet2& a, Complex s) {
        Jet2 r = a;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    friend Jet2 operator*(Complex s, const Jet2& a) { return a * s; }
    friend Jet2 operator/(const Jet2& a, Complex s) { return a * (1.0 / s); }
    friend Jet2 operator/(Complex s, const Jet2& a) {
        return constant(s, a.x0_, a.y0_, a.order_) / a;
    }

    friend Jet2 operator+(const Jet2& a, double s) { return a + Complex(s); }
    friend Jet2 operator+(double s, const Jet2& a) { return a + Complex(s); }
    friend Jet2 operator-(const Jet2& a, double s) { return a - Complex(s); }
    friend Jet2 operator-(double s, const Jet2& a) { return Complex(s) - a; }
    friend Jet2 operator*(const Jet2& a, double s) { return a * Complex(s); }
    friend Jet2 operator*(double s, const Jet2& a) { return a * Complex(s); }
    friend Jet2 operator/(const Jet2& a, double s) { return a / Complex(s); }
    friend Jet2 operator/(double s, const Jet2& a) { return Complex(s) / a; }

  private:
    Jet2(double x0, double y0, int order) : x0_(x0), y0_(y0), order_(order) { c_.fill(0.0); }

    std::array<Complex, kSize> c_{};
    double x0_ = 0.0;
    double y0_ = 0.0;
    int order_ = kJetOrder;

    friend Jet2 jet_compose(const Jet2&, const std::array<Complex, kJetOrder + 1>&);
    friend Jet2 d_x(const Jet2&);
    friend Jet2 d_y(const Jet2&);
    friend Jet2 conj(const Jet2&);
};

/// Composes an analytic function (given by its Taylor coefficients at the
/// jet's constant term) with the jet: Horner evaluation in the nilpotent part.
inline Jet2 jet_compose(const Jet2& a, const std::array<Complex, kJetOrder + 1>& series) {
    Jet2 n = a;
    n.c_[0] = 0.0; // nilpotent part
    Jet2 r = Jet2::constant(series[a.order()], a.base_x(), a.base_y(), a.order());
    for (int k = a.order() - 1; k >= 0; --k)
        r = r * n + series[static_cast<size_t>(k)];
    return r;
}

inline Jet2 conj(const Jet2& a) {
    Jet2 r = a;
    for (auto& v : r.c_) v = std::conj(v);
    return r;
}

namespace detail {

/// Branch-point guard shared by log/sqrt/pow: the principal branch is smooth
/// away from the closed ray (-inf, 0].
inline void check_off_branch_cut(Complex a0, const char* op) {
    if (std::abs(a0) == 0.0)
        throw SingularPointError(std::string(op) + " of jet with zero constant term");
    if (a0.real() <= 0.0 && std::abs(a0.imag()) < 1e-14 * std::abs(a0.real()))
        throw SingularPointError(std::string(op) + " of jet on the negative real axis");
}

} // namespace detail

inline Jet2 exp(const Jet2& a) {
    std::array<Complex, kJetOrder + 1> s{};
    const Complex e0 = std::exp(a.value());
    double fact = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
        if (k > 1) fact *= k;
        s[static_cast<size_t>(k)] = e0 / fact;
    }
    return jet_compose(a, s);
}

inline Jet2 log(const Jet2& a) {
    const Complex a0 = a.value();
    detail::check_off_branch_cut(a0, "log");
    std::array<Complex, kJetOrder + 1> s{};
    s[0] = std::log(a0);
    Complex p = 1.0;
    for (int k = 1; k <= kJetOrder; ++k) {
        p /= a0; // p = a0^{-k}
        s[static_cast<size_t>(k)] = (k % 2 ? 1.0 : -1.0) * p / static_cast<double>(k);
    }
    return jet_compose(a, s);
}

/// Principal branch of a^alpha for real alpha.
inline Jet2 pow(const Jet2& a, double alpha) {
    const Complex a0 = a.value();
    detail::check_off_branch_cut(a0, "pow");
    std::array<Complex, kJetOrder + 1> s{};
    Complex coef = std::pow(a0, alpha);
    s[0] = coef;
    for (int k = 1; k <= kJetOrder; ++k) {
        coef *= (alpha - (k - 1)) / (static_cast<double>(k) * a0);
        s[static_cast<size_t>(k)] = coef;
    }
    return jet_compose(a, s);
}

inline Jet2 sqrt(const Jet2& a) { return pow(a, 0.5); }

inline Jet2 sin(const Jet2& a) {
    const Complex s0 = std::sin(a.value()), c0 = std::cos(a.value());
    const std::array<Complex, 4> cycle{s0, c0, -s0, -c0};
    std::array<Complex, kJetOrder + 1> s{};
    double fact = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
        if (k > 1) fact *= k;
        s[static_cast<size_t>(k)] = cycle[static_cast<size_t>(k % 4)] / fact;
    }
    return jet_compose(a, s);
}

inline Jet2 cos(const Jet2& a) {
    const Complex s0 = std::sin(a.value()), c0 = std::cos(a.value());
    const std::array<Complex, 4> cycle{c0, -s0, -c0, s0};
    std::array<Complex, kJetOrder + 1> s{};
    double fact = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
        if (k > 1) fact *= k;
        s[static_cast<size_t>(k)] = cycle[static_cast<size_t>(k % 4)] / fact;
    }
    return jet_compose(a, s);
}

/// d/dx, lowering the order by one.
inline Jet2 d_x(const Jet2& a) {
    if (a.order() < 1) throw SingularPointError("jet order exhausted in d_x");
    Jet2 r(a.base_x(), a.base_y(), a.order() - 1);
    for (int i = 0; i <= r.order(); ++i)
        for (int j = 0; i + j <= r.order(); ++j)
            r.c_[detail::jet2_index(i, j)] = static_cast<double>(i + 1) * a.coeff(i + 1, j);
    return r;
}

/// d/dy, lowering the order by one.
inline Jet2 d_y(const Jet2& a) {
    if (a.order() < 1) throw SingularPointError("jet order exhausted in d_y");
    Jet2 r(a.base_x(), a.base_y(), a.order() - 1);
    for (int i = 0; i <= r.order(); ++i)
        for (int j = 0; i + j <= r.order(); ++j)
            r.c_[detail::jet2_index(i, j)] = static_cast<double>(j + 1) * a.coeff(i, j + 1);
    return r;
}

/// Wirtinger derivative d_z = (d_x - i d_y)/2.
inline Jet2 d_z(const Jet2& a) { return (d_x(a) - Complex(0.0, 1.0) * d_y(a)) * 0.5; }

/// Wirtinger derivative d_zbar = (d_x + i d_y)/2.
inline Jet2 d_zbar(const Jet2& a) { return (d_x(a) + Complex(0.0, 1.0) * d_y(a)) * 0.5; }

/// Truncated univariate Taylor expansion around y0; same conventions as Jet2.
class Jet1 {
  public:
    Jet1() = default;

    static Jet1 constant(Complex v, double y0, int order = kJetOrder) {
        Jet1 j(y0, order);
        j.c_[0] = v;
        return j;
    }

    static Jet1 variable(double y0, int order = kJetOrder) {
        Jet1 j(y0, order);
        j.c_[0] = y0;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return order_; }
    double base() const { return y0_; }

    Complex coeff(int k) const { return (k < 0 || k > order_) ? Complex(0.0) : c_[static_cast<size_t>(k)]; }
    void set_coeff(int k, Complex v) { c_[static_cast<size_t>(k)] = v; }
    Complex value() const { return c_[0]; }

    /// k-th derivative at the base point.
    Complex deriv(int k) const {
        double fact = 1.0;
        for (int n = 2; n <= k; ++n) fact *= n;
        return coeff(k) * fact;
    }

    Jet1 operator-() const {
        Jet1 r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend Jet1 operator+(const Jet1& a, const Jet1& b) {
        Jet1 r(a.y0_, std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) r.c_[static_cast<size_t>(k)] = a.coeff(k) + b.coeff(k);
        return r;
    }
    friend Jet1 operator-(const Jet1& a, const Jet1& b) {
        Jet1 r(a.y0_, std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) r.c_[static_cast<size_t>(k)] = a.coeff(k) - b.coeff(k);
        return r;
    }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        Jet1 r(a.y0_, std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k)
            for (int l = 0; k + l <= r.order_; ++l)
                r.c_[static_cast<size_t>(k + l)] += a.coeff(k) * b.coeff(l);
        return r;
    }
    friend Jet1 operator/(const Jet1& a, const Jet1& b) {
        if (std::abs(b.coeff(0)) == 0.0)
            throw SingularPointError("jet division by zero constant term");
        Jet1 r(a.y0_, std::min(a.order_, b.order_));
        for (int k = 0; k <= r.order_; ++k) {
            Complex acc = a.coeff(k);
            for (int l = 0; l < k; ++l) acc -= r.c_[static_cast<size_t>(l)] * b.coeff(k - l);
            r.c_[static_cast<size_t>(k)] = acc / b.coeff(0);
        }
        return r;
    }

    friend Jet1 operator*(const Jet1& a, Complex s) {
        Jet1 r = a;
        for (auto& v : r.c_) v *= s;
        return r;
    }
    friend Jet1 operator*(Complex s, const Jet1& a) { return a * s; }
    friend Jet1 operator*(const Jet1& a, double s) { return a * Complex(s); }
    friend Jet1 operator*(double s, const Jet1& a) { return a * Complex(s); }
    friend Jet1 operator/(const Jet1& a, Complex s) { return a * (1.0 / s); }
    friend Jet1 operator/(const Jet1& a, double s) { return a * (1.0 / s); }
    friend Jet1 operator/(Complex s, const Jet1& a) { return constant(s, a.y0_, a.order_) / a; }
    friend Jet1 operator/(double s, const Jet1& a) { return Complex(s) / a; }
    friend Jet1 operator+(const Jet1& a, Complex s) { return a + Jet1::constant(s, a.y0_, a.order_); }
    friend Jet1 operator+(Complex s, const Jet1& a) { return a + s; }
    friend Jet1 operator+(const Jet1& a, double s) { return a + Complex(s); }
    friend Jet1 operator+(double s, const Jet1& a) { return a + Complex(s); }
    friend Jet1 operator-(const Jet1& a, Complex s) { return a + (-s); }
    friend Jet1 operator-(Complex s, const Jet1& a) { return (-a) + s; }
    friend Jet1 operator-(const Jet1& a, double s) { return a + Complex(-s); }
    friend Jet1 operator-(double s, const Jet1& a) { return (-a) + Complex(s); }

    friend Jet1 jet_compose(const Jet1& a, const std::array<Complex, kJetOrder + 1>& series) {
        Jet1 n = a;
        n.c_[0] = 0.0;
        Jet1 r = Jet1::constant(series[static_cast<size_t>(a.order())], a.y0_, a.order_);
        for (int k = a.order() - 1; k >= 0; --k)
            r = r * n + series[static_cast<size_t>(k)];
        return r;
    }

    friend Jet1 d_dy(const Jet1& a) {
        if (a.order() < 1) throw SingularPointError("jet order exhausted in d_dy");
        Jet1 r(a.y0_, a.order_ - 1);
        for (int k = 0; k <= r.order_; ++k)
            r.c_[static_cast<size_t>(k)] = static_cast<double>(k + 1) * a.coeff(k + 1);
        return r;
    }

  private:
    Jet1(double y0, int order) : y0_(y0), order_(order) { c_.fill(0.0); }

    std::array<Complex, kJetOrder + 1> c_{};
    double y0_ = 0.0;
    int order_ = kJetOrder;
};

inline Jet1 exp(const Jet1& a) {
    std::array<Complex, kJetOrder + 1> s{};
    const Complex e0 = std::exp(a.value());
    double fact = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
        if (k > 1) fact *= k;
        s[static_cast<size_t>(k)] = e0 / fact;
    }
    return jet_compose(a, s);
}

inline Jet1 log(const Jet1& a) {
    detail::check_off_branch_cut(a.value(), "log");
    std::array<Complex, kJetOrder + 1> s{};
    s[0] = std::log(a.value());
    Complex p = 1.0;
    for (int k = 1; k <= kJetOrder; ++k) {
        p /= a.value();
        s[static_cast<size_t>(k)] = (k % 2 ? 1.0 : -1.0) * p / static_cast<double>(k);
    }
    return jet_compose(a, s);
}

inline Jet1 pow(const Jet1& a, double alpha) {
    detail::check_off_branch_cut(a.value(), "pow");
    std::array<Complex, kJetOrder + 1> s{};
    Complex coef = std::pow(a.value(), alpha);
    s[0] = coef;
    for (int k = 1; k <= kJetOrder; ++k) {
        coef *= (alpha - (k - 1)) / (static_cast<double>(k) * a.value());
        s[static_cast<size_t>(k)] = coef;
    }
    return jet_compose(a, s);
}

inline Jet1 sqrt(const Jet1& a) { return pow(a, 0.5); }

inline Jet1 sin(const Jet1& a) {
    const Complex s0 = std::sin(a.value()), c0 = std::cos(a.value());
    const std::array<Complex, 4> cycle{s0, c0, -s0, -c0};
    std::array<Complex, kJetOrder + 1> s{};
    double fact = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
        if (k > 1) fact *= k;
        s[static_cast<size_t>(k)] = cycle[static_cast<size_t>(k % 4)] / fact;
    }
    return jet_compose(a, s);
}

inline Jet1 cos(const Jet1& a) {
    const Complex s0 = std::sin(a.value()), c0 = std::cos(a.value());
    const std::array<Complex, 4> cycle{c0, -s0, -c0, s0};
    std::array<Complex, kJetOrder + 1> s{};
    double fact = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
        if (k > 1) fact *= k;
        s[static_cast<size_t>(k)] = cycle[static_cast<size_t>(k % 4)] / fact;
    }
    return jet_compose(a, s);
}

} // namespace crlift
