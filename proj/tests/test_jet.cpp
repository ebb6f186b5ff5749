// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crlift/jet.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

using crlift::Complex;
using crlift::Jet1;
using crlift::Jet2;

namespace {

// ---------------------------------------------------------------------------
// Independent oracles. Dense-grid polynomial arithmetic with plain loops and
// binomial base-point shifts; no jet code involved.
// ---------------------------------------------------------------------------

constexpr int kPmax = 9;
using Poly = std::array<std::array<Complex, kPmax>, kPmax>; // coeff[i][j] of x^i y^j

Poly pzero() {
    Poly p{};
    for (auto& row : p) row.fill(0.0);
    return p;
}

Poly pmul(const Poly& a, const Poly& b) {
    Poly r = pzero();
    for (int i = 0; i < kPmax; ++i)
        for (int j = 0; j < kPmax; ++j)
            for (int k = 0; i + k < kPmax; ++k)
                for (int l = 0; j + l < kPmax; ++l)
                    r[i + k][j + l] += a[i][j] * b[k][l];
    return r;
}

Poly padd(const Poly& a, const Poly& b) {
    Poly r = pzero();
    for (int i = 0; i < kPmax; ++i)
        for (int j = 0; j < kPmax; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

// Taylor coefficient of (x-x0)^k (y-y0)^l for the polynomial p.
Complex pshift_coeff(const Poly& p, double x0, double y0, int k, int l) {
    Complex acc = 0.0;
    for (int i = k; i < kPmax; ++i)
        for (int j = l; j < kPmax; ++j) {
            if (p[i][j] == 0.0) continue;
            acc += p[i][j] * binom(i, k) * binom(j, l) * std::pow(x0, i - k) * std::pow(y0, j - l);
        }
    return acc;
}

Jet2 pjet(const Poly& p, double x0, double y0) {
    Jet2 j = Jet2::constant(0.0, x0, y0);
    for (int k = 0; k <= crlift::kJetOrder; ++k)
        for (int l = 0; k + l <= crlift::kJetOrder; ++l)
            j.set_coeff(k, l, pshift_coeff(p, x0, y0, k, l));
    return j;
}

// Central differences with one Richardson pass, O(h^4).
template <typename F>
Complex fd_x(F f, double x, double y, double h = 1e-2) {
    auto e = [&](double s) { return (f(x + s, y) - f(x - s, y)) / (2.0 * s); };
    return (4.0 * e(h) - e(2.0 * h)) / 3.0;
}

template <typename F>
Complex fd_y(F f, double x, double y, double h = 1e-2) {
    auto e = [&](double s) { return (f(x, y + s) - f(x, y - s)) / (2.0 * s); };
    return (4.0 * e(h) - e(2.0 * h)) / 3.0;
}

template <typename F>
Complex fd_xx(F f, double x, double y, double h = 1e-2) {
    return (-f(x + 2 * h, y) + 16.0 * f(x + h, y) - 30.0 * f(x, y) + 16.0 * f(x - h, y) -
            f(x - 2 * h, y)) /
           (12.0 * h * h);
}

template <typename F>
Complex fd_yy(F f, double x, double y, double h = 1e-2) {
    return (-f(x, y + 2 * h) + 16.0 * f(x, y + h) - 30.0 * f(x, y) + 16.0 * f(x, y - h) -
            f(x, y - 2 * h)) /
           (12.0 * h * h);
}

template <typename F>
Complex fd_xy(F f, double x, double y, double h = 1e-2) {
    auto e = [&](double s) {
        return (f(x + s, y + s) - f(x + s, y - s) - f(x - s, y + s) + f(x - s, y - s)) /
               (4.0 * s * s);
    };
    return (4.0 * e(h) - e(2.0 * h)) / 3.0;
}

double jdist(const Jet2& a, const Jet2& b) {
    double m = 0.0;
    for (int i = 0; i <= crlift::kJetOrder; ++i)
        for (int j = 0; i + j <= crlift::kJetOrder; ++j)
            m = std::max(m, std::abs(a.coeff(i, j) - b.coeff(i, j)));
    return m;
}

} // namespace

TEST_CASE("variable jets carry the expected coefficients") {
    const Jet2 x = Jet2::variable_x(1.5, -2.0);
    CHECK(x.value() == Complex(1.5));
    CHECK(x.coeff(1, 0) == Complex(1.0));
    CHECK(x.coeff(0, 1) == Complex(0.0));
    CHECK(x.coeff(2, 0) == Complex(0.0));

    const Jet2 y = Jet2::variable_y(1.5, -2.0);
    CHECK(y.value() == Complex(-2.0));
    CHECK(y.coeff(0, 1) == Complex(1.0));

    const Jet2 z = Jet2::variable_z(1.5, -2.0);
    CHECK(z.value() == Complex(1.5, -2.0));
    CHECK(z.coeff(1, 0) == Complex(1.0));
    CHECK(z.coeff(0, 1) == Complex(0.0, 1.0));

    // coefficients beyond the carried order read as zero
    CHECK(x.coeff(5, 0) == Complex(0.0));
    CHECK(x.coeff(-1, 0) == Complex(0.0));
}

TEST_CASE("product of affine factors lays down the cross coefficient") {
    const Jet2 x = Jet2::variable_x(0.0, 0.0);
    const Jet2 y = Jet2::variable_y(0.0, 0.0);
    const Jet2 p = (1.0 + x) * (1.0 + y);
    CHECK(p.coeff(0, 0) == Complex(1.0));
    CHECK(p.coeff(1, 0) == Complex(1.0));
    CHECK(p.coeff(0, 1) == Complex(1.0));
    CHECK(p.coeff(1, 1) == Complex(1.0));
    CHECK(p.coeff(2, 0) == Complex(0.0));
}

TEST_CASE("arithmetic matches dense polynomial oracle at shifted base points") {
    std::mt19937 rng(20260822);
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_real_distribution<double> pt(-1.5, 1.5);

    for (int trial = 0; trial < 20; ++trial) {
        Poly P = pzero(), Q = pzero();
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; i + j <= 2; ++j) {
                P[i][j] = Complex(coef(rng), coef(rng));
                Q[i][j] = Complex(coef(rng), coef(rng));
            }
        const double x0 = pt(rng), y0 = pt(rng);

        const Jet2 jp = pjet(P, x0, y0);
        const Jet2 jq = pjet(Q, x0, y0);

        CHECK(jdist(jp + jq, pjet(padd(P, Q), x0, y0)) < 1e-12);
        CHECK(jdist(jp * jq, pjet(pmul(P, Q), x0, y0)) < 1e-11);

        if (std::abs(jq.value()) > 0.5) {
            // (P*Q)/Q recovers P
            CHECK(jdist((jp * jq) / jq, jp) < 1e-10);
        }
    }
}

TEST_CASE("building a polynomial from variable jets matches the shift oracle") {
    const double x0 = 0.7, y0 = -0.4;
    const Jet2 x = Jet2::variable_x(x0, y0);
    const Jet2 y = Jet2::variable_y(x0, y0);
    const Jet2 built = 3.0 + x * x * y - 2.0 * y * y + x * y * y * y;

    Poly P = pzero();
    P[0][0] = 3.0;
    P[2][1] = 1.0;
    P[0][2] = -2.0;
    P[1][3] = 1.0;
    CHECK(jdist(built, pjet(P, x0, y0)) < 1e-13);
}

TEST_CASE("division identities") {
    const Jet2 x = Jet2::variable_x(0.3, 0.9);
    const Jet2 y = Jet2::variable_y(0.3, 0.9);
    const Jet2 a = 2.0 + x + y * y - 0.5 * x * y;

    const Jet2 one = a / a;
    CHECK(std::abs(one.value() - 1.0) < 1e-15);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j)
            if (i + j > 0) CHECK(std::abs(one.coeff(i, j)) < 1e-14);

    CHECK_THROWS_AS((void)(a / (x - 0.3)), crlift::SingularPointError);
}

TEST_CASE("mismatched base points are rejected") {
    const Jet2 a = Jet2::variable_x(0.0, 0.0);
    const Jet2 b = Jet2::variable_x(1.0, 0.0);
    CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
    CHECK_THROWS_AS((void)(a * b), std::invalid_argument);
}

TEST_CASE("analytic functions match central-difference derivatives") {
    const double x0 = 0.4, y0 = -0.3;
    auto g = [](double x, double y) {
        return 2.0 + 0.3 * x + 0.7 * y + 0.1 * x * x - 0.2 * x * y + 0.05 * y * y;
    };
    const Jet2 x = Jet2::variable_x(x0, y0);
    const Jet2 y = Jet2::variable_y(x0, y0);
    const Jet2 gj = 2.0 + 0.3 * x + 0.7 * y + 0.1 * x * x - 0.2 * x * y + 0.05 * y * y;

    struct Case {
        Jet2 jet;
        std::function<Complex(double, double)> fn;
    };
    const std::array<Case, 6> cases{{
        {crlift::exp(gj), [&](double a, double b) { return std::exp(g(a, b)); }},
        {crlift::log(gj), [&](double a, double b) { return std::log(g(a, b)); }},
        {crlift::sqrt(gj), [&](double a, double b) { return std::sqrt(g(a, b)); }},
        {crlift::sin(gj), [&](double a, double b) { return std::sin(g(a, b)); }},
        {crlift::cos(gj), [&](double a, double b) { return std::cos(g(a, b)); }},
        {crlift::pow(gj, 1.7), [&](double a, double b) { return std::pow(g(a, b), 1.7); }},
    }};

    for (const auto& c : cases) {
        CHECK(std::abs(c.jet.value() - c.fn(x0, y0)) < 1e-14);
        CHECK(std::abs(c.jet.deriv(1, 0) - fd_x(c.fn, x0, y0)) < 1e-7);
        CHECK(std::abs(c.jet.deriv(0, 1) - fd_y(c.fn, x0, y0)) < 1e-7);
        CHECK(std::abs(c.jet.deriv(2, 0) - fd_xx(c.fn, x0, y0)) < 1e-6);
        CHECK(std::abs(c.jet.deriv(0, 2) - fd_yy(c.fn, x0, y0)) < 1e-6);
        CHECK(std::abs(c.jet.deriv(1, 1) - fd_xy(c.fn, x0, y0)) < 1e-6);
    }
}

TEST_CASE("series identities pin the high-order coefficients") {
    const Jet2 x = Jet2::variable_x(0.2, -0.1);
    const Jet2 y = Jet2::variable_y(0.2, -0.1);
    const Jet2 a = 1.5 + 0.4 * x - 0.3 * y + 0.2 * x * y;

    CHECK(jdist(crlift::exp(crlift::log(a)), a) < 1e-14);
    CHECK(jdist(crlift::sqrt(a) * crlift::sqrt(a), a) < 1e-14);
    CHECK(jdist(crlift::pow(a, 3.0), a * a * a) < 1e-13);
    CHECK(jdist(crlift::pow(a, -1.0), (0.0 * a + 1.0) / a) < 1e-14);

    const Jet2 s = crlift::sin(a), c = crlift::cos(a);
    CHECK(jdist(s * s + c * c, 0.0 * a + 1.0) < 1e-14);
    CHECK(jdist(s * c, crlift::sin(2.0 * a) * 0.5) < 1e-14);

    // log(1+x) = x - x^2/2 + x^3/3 - x^4/4
    const Jet2 x0 = Jet2::variable_x(0.0, 0.0);
    const Jet2 l = crlift::log(1.0 + x0);
    CHECK(std::abs(l.coeff(0, 0)) < 1e-16);
    CHECK(std::abs(l.coeff(1, 0) - 1.0) < 1e-16);
    CHECK(std::abs(l.coeff(2, 0) + 0.5) < 1e-15);
    CHECK(std::abs(l.coeff(3, 0) - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(l.coeff(4, 0) + 0.25) < 1e-15);

    // exp(x+y) coefficients are 1/(i! j!)
    const Jet2 y0j = Jet2::variable_y(0.0, 0.0);
    const Jet2 e = crlift::exp(x0 + y0j);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) {
            double fact = 1.0;
            for (int k = 2; k <= i; ++k) fact *= k;
            for (int k = 2; k <= j; ++k) fact *= k;
            CHECK(std::abs(e.coeff(i, j) - 1.0 / fact) < 1e-14);
        }
}

TEST_CASE("branch point guards throw") {
    const Jet2 zero = Jet2::constant(0.0, 0.0, 0.0);
    const Jet2 neg = Jet2::constant(-1.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)crlift::log(zero), crlift::SingularPointError);
    CHECK_THROWS_AS((void)crlift::log(neg), crlift::SingularPointError);
    CHECK_THROWS_AS((void)crlift::sqrt(neg), crlift::SingularPointError);
    CHECK_THROWS_AS((void)crlift::pow(neg, 0.3), crlift::SingularPointError);
    CHECK_NOTHROW((void)crlift::log(Jet2::constant(Complex(-1.0, 0.5), 0.0, 0.0)));
}

TEST_CASE("Wirtinger derivatives") {
    const double px = 1.0, py = 1.0; // z = 1 + i
    const Jet2 x = Jet2::variable_x(px, py);
    const Jet2 y = Jet2::variable_y(px, py);
    const Jet2 z = Jet2::variable_z(px, py);

    // F = x^2 + y^2 = z zbar: F_z = zbar, F_zbar = z, F_{z zbar} = 1
    const Jet2 F = x * x + y * y;
    const Jet2 Fz = crlift::d_z(F);
    CHECK(std::abs(Fz.value() - Complex(px, -py)) < 1e-15);
    auto Ffn = [](double a, double b) { return Complex(a * a + b * b); };
    const Complex fz_fd = 0.5 * (fd_x(Ffn, px, py) - Complex(0, 1) * fd_y(Ffn, px, py));
    CHECK(std::abs(Fz.value() - fz_fd) < 1e-8);
    CHECK(std::abs(crlift::d_zbar(F).value() - Complex(px, py)) < 1e-15);
    CHECK(std::abs(crlift::d_z(crlift::d_zbar(F)).value() - 1.0) < 1e-15);

    // holomorphic functions are killed by d_zbar
    const Jet2 z2 = z * z;
    const Jet2 hz = crlift::d_zbar(z2);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j) CHECK(std::abs(hz.coeff(i, j)) < 1e-15);
    CHECK(std::abs(crlift::d_z(z2).value() - 2.0 * Complex(px, py)) < 1e-15);

    // d_z and d_zbar commute
    const Jet2 G = x * x * y + 2.0 * y * y - x * y * y;
    CHECK(jdist(crlift::d_z(crlift::d_zbar(G)), crlift::d_zbar(crlift::d_z(G))) < 1e-15);

    // d_z conj(f) = conj(d_zbar f)
    const Jet2 H = (1.0 + z) * (2.0 + z * z) + crlift::conj(z);
    CHECK(jdist(crlift::d_z(crlift::conj(H)), crlift::conj(crlift::d_zbar(H))) < 1e-15);

    // derivatives of constants vanish
    const Jet2 k = Jet2::constant(3.25, px, py);
    CHECK(std::abs(crlift::d_z(k).value()) == 0.0);

    // order bookkeeping
    CHECK(crlift::d_x(F).order() == 3);
    Jet2 f4 = F;
    for (int i = 0; i < 4; ++i) f4 = crlift::d_x(f4);
    CHECK(f4.order() == 0);
    CHECK_THROWS_AS((void)crlift::d_x(f4), crlift::SingularPointError);
}

TEST_CASE("deriv applies the factorial") {
    const Jet2 x = Jet2::variable_x(0.0, 0.0);
    const Jet2 e = crlift::exp(x);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(e.deriv(k, 0) - 1.0) < 1e-14);
}

TEST_CASE("univariate jets mirror the bivariate behaviour") {
    const double y0 = 0.8;
    const Jet1 y = Jet1::variable(y0);

    const Jet1 a = 2.0 + y * y - 0.5 * y;
    const Jet1 one = a / a;
    CHECK(std::abs(one.value() - 1.0) < 1e-15);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(one.coeff(k)) < 1e-15);

    // against the bivariate implementation on a y-only function
    const Jet2 Y = Jet2::variable_y(0.0, y0);
    const Jet2 b2 = crlift::exp(2.0 + Y * Y - 0.5 * Y);
    const Jet1 b1 = crlift::exp(a);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(b1.coeff(k) - b2.coeff(0, k)) < 1e-14);

    const Jet1 s = crlift::sin(y), c = crlift::cos(y);
    CHECK(std::abs((s * s + c * c).coeff(4)) < 1e-15);
    CHECK(std::abs((s * s + c * c).value() - 1.0) < 1e-15);

    const Jet1 l = crlift::log(crlift::exp(a));
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(l.coeff(k) - a.coeff(k)) < 1e-13);

    const Jet1 p = crlift::pow(a, -2.0);
    const Jet1 q = (a * a * p);
    CHECK(std::abs(q.value() - 1.0) < 1e-14);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(q.coeff(k)) < 1e-13);

    // d/dy lowers the order and multiplies up the index
    const Jet1 d = d_dy(a);
    CHECK(d.order() == 3);
    CHECK(std::abs(d.value() - (2.0 * y0 - 0.5)) < 1e-15);
    CHECK(std::abs(d.coeff(1) - 2.0) < 1e-15);

    // deriv factorials
    const Jet1 e = crlift::exp(Jet1::variable(0.0));
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(e.deriv(k) - 1.0) < 1e-14);

    CHECK_THROWS_AS((void)(a / (y - y0)), crlift::SingularPointError);
}
