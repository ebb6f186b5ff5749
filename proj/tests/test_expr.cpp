// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crlift/expr.hpp"
#include "crlift/jet.hpp"

#include <cmath>
#include <complex>
#include <random>

using crlift::Complex;
using crlift::evaluate;
using crlift::Jet1;
using crlift::Jet2;
using crlift::parse_expression;
using crlift::VarBindings;

namespace {

double eval_xy(const std::string& text, double x, double y) {
    VarBindings<double> v;
    v.x = x;
    v.y = y;
    return evaluate(parse_expression(text), v);
}

// central differences with Richardson, the usual independent oracle
template <typename F>
double fdx(F f, double x, double y, double h = 1e-3) {
    auto e = [&](double s) { return (f(x + s, y) - f(x - s, y)) / (2 * s); };
    return (4 * e(h) - e(2 * h)) / 3;
}

template <typename F>
double fdy(F f, double x, double y, double h = 1e-3) {
    auto e = [&](double s) { return (f(x, y + s) - f(x, y - s)) / (2 * s); };
    return (4 * e(h) - e(2 * h)) / 3;
}

} // namespace

TEST_CASE("values and precedence") {
    CHECK(eval_xy("x^2 + y^2", 1.0, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(eval_xy("log(1 + x^2 + y^2)", 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(eval_xy("2+3*4", 0, 0) == 14.0);
    CHECK(eval_xy("(2+3)*4", 0, 0) == 20.0);
    CHECK(eval_xy("2*3^2", 0, 0) == 18.0);
    CHECK(eval_xy("2^3^2", 0, 0) == 512.0); // right-associative
    CHECK(eval_xy("-3^2", 0, 0) == -9.0);
    CHECK(eval_xy("6/3/2", 0, 0) == 1.0);
    CHECK(eval_xy("2-3-4", 0, 0) == -5.0);
    CHECK(eval_xy("x^-1", 4.0, 0.0) == 0.25);
    CHECK(eval_xy("x^(3/2)", 4.0, 0.0) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(eval_xy("+x", 3.0, 0.0) == 3.0);
    CHECK(eval_xy("--x", 3.0, 0.0) == 3.0);
    CHECK(eval_xy("sin(pi/2)", 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_xy("1.5e2 + .5", 0, 0) == 150.5);
}

TEST_CASE("function identities at random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.2, 1.2);
    for (int i = 0; i < 10; ++i) {
        const double x = d(rng), y = d(rng);
        CHECK(eval_xy("sin(x)^2 + cos(x)^2", x, y) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(eval_xy("log(exp(x))", x, y) == doctest::Approx(x).epsilon(1e-14));
        CHECK(eval_xy("sqrt(x^2 + 1)", x, y) ==
              doctest::Approx(std::sqrt(x * x + 1)).epsilon(1e-14));
        CHECK(eval_xy("exp(x + y)", x, y) == doctest::Approx(std::exp(x + y)).epsilon(1e-14));
    }
}

TEST_CASE("syntax errors carry positions") {
    auto pos_of = [](const std::string& text) -> long {
        try {
            (void)parse_expression(text);
        } catch (const crlift::ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(pos_of("x +") == 3);
    CHECK(pos_of("x ) y") == 2);
    CHECK(pos_of("foo(x)") == 0);
    CHECK(pos_of("bar") == 0);
    CHECK(pos_of("x y") == 2);
    CHECK(pos_of("(x") == 2);
    CHECK(pos_of("x ^ y") == 2); // non-constant exponent rejected where ^ sits
    CHECK(pos_of("") == 0);
    CHECK(pos_of("x + @") == 4);
    CHECK(pos_of("x * ()") == 5);
    CHECK(pos_of("sin x") == 0); // bare ident 'sin' is not a variable
    CHECK(pos_of("x^2") == -1);  // no error
}

TEST_CASE("symbolic derivatives match finite differences") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(0.2, 1.4);
    const std::array<std::string, 5> exprs{
        "x^2*y + 3*x - y^3",
        "sin(x*y) + cos(x)",
        "exp(2*y) / (1 + x^2)",
        "log(1 + x^2 + y^2)",
        "sqrt(1 + x^2) * y",
    };
    for (const auto& text : exprs) {
        const auto ast = parse_expression(text);
        const auto dx = differentiate(ast, 'x');
        const auto dy = differentiate(ast, 'y');
        auto f = [&](double x, double y) { return eval_xy(text, x, y); };
        for (int i = 0; i < 5; ++i) {
            const double x = d(rng), y = d(rng);
            VarBindings<double> v;
            v.x = x;
            v.y = y;
            CHECK(evaluate(dx, v) == doctest::Approx(fdx(f, x, y)).epsilon(1e-8));
            CHECK(evaluate(dy, v) == doctest::Approx(fdy(f, x, y)).epsilon(1e-8));
        }
    }

    // second symbolic derivative
    const auto ast = parse_expression("exp(2*y)");
    const auto dyy = differentiate(differentiate(ast, 'y'), 'y');
    VarBindings<double> v;
    v.x = 0.0;
    v.y = 0.7;
    CHECK(evaluate(dyy, v) == doctest::Approx(4.0 * std::exp(1.4)).epsilon(1e-14));
}

TEST_CASE("jet evaluation agrees with symbolic differentiation") {
    const auto ast = parse_expression("sin(x*y) + x^3 - sqrt(1 + y^2)");
    const double x0 = 0.6, y0 = -0.4;

    VarBindings<Jet2> jv;
    jv.x = Jet2::variable_x(x0, y0);
    jv.y = Jet2::variable_y(x0, y0);
    const Jet2 j = evaluate(ast, jv);

    VarBindings<double> dv;
    dv.x = x0;
    dv.y = y0;
    CHECK(std::abs(j.value() - evaluate(ast, dv)) < 1e-15);

    auto dxa = differentiate(ast, 'x');
    auto dya = differentiate(ast, 'y');
    auto dxya = differentiate(dxa, 'y');
    CHECK(std::abs(j.deriv(1, 0) - evaluate(dxa, dv)) < 1e-13);
    CHECK(std::abs(j.deriv(0, 1) - evaluate(dya, dv)) < 1e-13);
    CHECK(std::abs(j.deriv(1, 1) - evaluate(dxya, dv)) < 1e-13);
    CHECK(std::abs(j.deriv(2, 0) - evaluate(differentiate(dxa, 'x'), dv)) < 1e-13);
}

TEST_CASE("exp(y) univariate jet has the Taylor coefficients of exp") {
    const auto ast = parse_expression("exp(y)");
    VarBindings<Jet1> v;
    v.y = Jet1::variable(0.0);
    const Jet1 j = evaluate(ast, v);
    const std::array<double, 5> expect{1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    for (int k = 0; k <= 4; ++k)
        CHECK(std::abs(j.coeff(k) - expect[static_cast<size_t>(k)]) < 1e-15);
}

TEST_CASE("holomorphic z-expressions") {
    const auto ast = parse_expression("z^2");

    VarBindings<Complex> cv;
    cv.z = Complex(1.0, 2.0);
    CHECK(std::abs(evaluate(ast, cv) - Complex(-3.0, 4.0)) < 1e-15);

    // z bound as a jet: d_zbar kills it, d_z gives the complex derivative
    VarBindings<Jet2> jv;
    jv.z = Jet2::variable_z(1.0, 2.0);
    const Jet2 j = evaluate(ast, jv);
    CHECK(std::abs(crlift::d_z(j).value() - Complex(2.0, 4.0)) < 1e-15);
    CHECK(std::abs(crlift::d_zbar(j).value()) < 1e-15);

    // symbolic derivative in z matches
    const auto dz = differentiate(ast, 'z');
    CHECK(std::abs(evaluate(dz, cv) - Complex(2.0, 4.0)) < 1e-15);

    // unbound variable is reported
    VarBindings<double> dv;
    dv.x = 1.0;
    dv.y = 2.0;
    CHECK_THROWS_AS((void)evaluate(ast, dv), std::invalid_argument);

    CHECK(crlift::references_variable(ast, 'z'));
    CHECK_FALSE(crlift::references_variable(ast, 'x'));
}

TEST_CASE("integer powers stay exact on negative bases") {
    CHECK(eval_xy("x^3", -2.0, 0.0) == -8.0);
    CHECK(eval_xy("x^2", -3.0, 0.0) == 9.0);
    // fractional powers of negative jets trip the branch guard instead
    VarBindings<Jet2> jv;
    jv.x = Jet2::variable_x(-2.0, 0.0);
    jv.y = Jet2::variable_y(-2.0, 0.0);
    CHECK_THROWS_AS((void)evaluate(parse_expression("x^0.5"), jv), crlift::SingularPointError);
    CHECK_NOTHROW((void)evaluate(parse_expression("x^3"), jv));
}
