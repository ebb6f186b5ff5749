// SPDX-License-Identifier: MIT
#pragma once

#include "crlift/expr.hpp"
#include "crlift/jet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crlift {

/// Evaluation outside a potential's admissible region, including loss of
/// strict pseudoconvexity (F_{zz̄} <= 0).
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

enum class PotentialKind { kFlat, kFubiniStudy, kPoincare, kHarmonic, kTubular, kFrt, kCustom };

/// Axis-aligned sampling box for a potential.
struct Domain {
    double x_min = -1.0, x_max = 1.0;
    double y_min = -1.0, y_max = 1.0;

    bool contains(double x, double y) const {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }
};

/// A Kähler potential F(x, y) on a plane domain together with an order-4 jet
/// evaluator for w = F_{zz̄}. Tubular potentials F = F(y) are folded into the
/// same interface through w = F_yy/4, which reproduces every tube-adapted
/// formula from the generic ones. w always carries full jet order: kinds with
/// an expression tree pre-differentiate it symbolically at construction.
class Potential {
  public:
    /// F = x² + y², the flat structure (w = 1, c = 0).
    static Potential flat() {
        Potential p(PotentialKind::kFlat, "flat", {-2.0, 2.0, -2.0, 2.0});
        p.description_ = "flat potential x^2+y^2; c = 0, curvature-free base";
        return p;
    }

    /// F = log(1 + x² + y²), round-sphere Kähler geometry.
    static Potential fubini_study() {
        Potential p(PotentialKind::kFubiniStudy, "fubini_study", {-2.0, 2.0, -2.0, 2.0});
        p.description_ = "Fubini-Study potential log(1+x^2+y^2); Einstein constant measured from R/w";
        return p;
    }

    /// F = −log(1 − x² − y²) on the unit disk.
    static Potential poincare() {
        Potential p(PotentialKind::kPoincare, "poincare", {-0.6, 0.6, -0.6, 0.6});
        p.description_ = "Poincare disk potential -log(1-x^2-y^2) on |z| < 1";
        return p;
    }

    /// F = z·conj(phi) + z̄·phi for a holomorphic phi(z); w = 2 Re phi'(z).
    static Potential harmonic(ExprPtr phi) {
        Potential p(PotentialKind::kHarmonic, "harmonic", {0.5, 2.0, -1.0, 1.0});
        if (references_variable(phi, 'x') || references_variable(phi, 'y'))
            throw std::invalid_argument("harmonic generating function must use the variable z only");
        p.f_ast_ = phi;
        p.w_ast_ = differentiate(phi, 'z');
        p.description_ = "harmonic-generated potential z*conj(phi)+conj(z)*phi, Ricci-flat lift source";
        return p;
    }

    static Potential harmonic_default() { return harmonic(parse_expression("z^2")); }

    /// Tube potential F = F(y); w = F_yy/4 with the second derivative taken
    /// symbolically so the jet keeps full order.
    static Potential tubular(ExprPtr f_of_y) {
        Potential p(PotentialKind::kTubular, "tubular", {-1.0, 1.0, -1.0, 1.0});
        if (references_variable(f_of_y, 'x') || references_variable(f_of_y, 'z'))
            throw std::invalid_argument("tubular potential must use the variable y only");
        p.f_ast_ = f_of_y;
        p.w_ast_ = exprdetail::make_binary(
            '*', exprdetail::make_const(0.25),
            differentiate(differentiate(f_of_y, 'y'), 'y'));
        p.description_ = "tube potential F(y); lift reduces to an ODE in y";
        return p;
    }

    static Potential tubular_default() { return tubular(parse_expression("exp(y)")); }

    /// F = (16/35) x^{7/2}, so w = x^{3/2} and w^{2/3} = x is harmonic in the
    /// w-weighted sense used by the Fefferman-Robinson-Trautman profile.
    static Potential frt() {
        Potential p(PotentialKind::kFrt, "frt", {0.5, 2.0, -1.0, 1.0});
        p.description_ = "Fefferman-Robinson-Trautman potential (16/35)x^(7/2), w = x^(3/2)";
        return p;
    }

    /// User-supplied F(x, y); w is the quarter-Laplacian, pre-differentiated
    /// symbolically.
    static Potential custom(ExprPtr f, Domain box) {
        Potential p(PotentialKind::kCustom, "custom", box);
        if (references_variable(f, 'z'))
            throw std::invalid_argument("custom potential must use the variables x, y only");
        p.f_ast_ = f;
        p.w_ast_ = exprdetail::make_binary(
            '*', exprdetail::make_const(0.25),
            exprdetail::make_binary('+', differentiate(differentiate(f, 'x'), 'x'),
                                    differentiate(differentiate(f, 'y'), 'y')));
        p.description_ = "user-supplied potential";
        return p;
    }

    PotentialKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::string& description() const { return description_; }
    const Domain& domain() const { return box_; }
    void set_domain(const Domain& box) { box_ = box; }
    bool is_tubular() const { return kind_ == PotentialKind::kTubular; }

    /// Order-4 jet of F at (x, y). Throws DomainError outside the admissible
    /// region.
    Jet2 F(double x, double y) const {
        require_in_domain(x, y);
        const Jet2 xj = Jet2::variable_x(x, y);
        const Jet2 yj = Jet2::variable_y(x, y);
        switch (kind_) {
            case PotentialKind::kFlat:
                return xj * xj + yj * yj;
            case PotentialKind::kFubiniStudy:
                return log(1.0 + xj * xj + yj * yj);
            case PotentialKind::kPoincare: {
                const Jet2 s = 1.0 - xj * xj - yj * yj;
                if (s.value().real() <= 0.0)
                    throw DomainError("poincare potential evaluated outside the unit disk");
                return -log(s);
            }
            case PotentialKind::kHarmonic: {
                const Jet2 zj = Jet2::variable_z(x, y);
                VarBindings<Jet2> v;
                v.z = zj;
                const Jet2 phi = evaluate(f_ast_, v);
                return conj(zj) * phi + zj * conj(phi);
            }
            case PotentialKind::kTubular: {
                VarBindings<Jet2> v;
                v.y = yj;
                v.x = xj; // bound but unused; keeps constants anchored
                return evaluate(f_ast_, v);
            }
            case PotentialKind::kFrt:
                return (16.0 / 35.0) * pow(xj, 3.5);
            case PotentialKind::kCustom: {
                VarBindings<Jet2> v;
                v.x = xj;
                v.y = yj;
                return evaluate(f_ast_, v);
            }
        }
        throw std::logic_error("unreachable potential kind");
    }

    /// Order-4 jet of w = F_{zz̄} at (x, y), with the strict-pseudoconvexity
    /// guard w > 0. The value is real for every kind; the imaginary part is
    /// asserted, not assumed.
    Jet2 w(double x, double y) const {
        require_in_domain(x, y);
        const Jet2 wj = w_unchecked(x, y);
        const Complex w0 = wj.value();
        if (std::abs(w0.imag()) > 1e-10 * std::max(1.0, std::abs(w0.real())))
            throw DomainError("potential produced a non-real Levi factor at (" +
                              std::to_string(x) + ", " + std::to_string(y) + ")");
        if (w0.real() <= 0.0)
            throw DomainError("potential is not strictly pseudoconvex at (" + std::to_string(x) +
                              ", " + std::to_string(y) + ")");
        return wj;
    }

    /// Univariate order-4 jet of w along y, for tube potentials only.
    Jet1 w_along_y(double y) const {
        if (kind_ != PotentialKind::kTubular)
            throw std::logic_error("w_along_y is defined for tube potentials only");
        VarBindings<Jet1> v;
        v.y = Jet1::variable(y);
        const Jet1 wj = evaluate(w_ast_, v);
        if (wj.value().real() <= 0.0)
            throw DomainError("potential is not strictly pseudoconvex at y = " + std::to_string(y));
        return wj;
    }

  private:
    Potential(PotentialKind kind, std::string name, Domain box)
        : kind_(kind), name_(std::move(name)), box_(box) {}

    void require_in_domain(double x, double y) const {
        if (!box_.contains(x, y))
            throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") lies outside the declared domain of potential '" + name_ + "'");
    }

    Jet2 w_unchecked(double x, double y) const {
        const Jet2 xj = Jet2::variable_x(x, y);
        const Jet2 yj = Jet2::variable_y(x, y);
        switch (kind_) {
            case PotentialKind::kFlat:
                return Jet2::constant(1.0, x, y);
            case PotentialKind::kFubiniStudy:
                return pow(1.0 + xj * xj + yj * yj, -2.0);
            case PotentialKind::kPoincare: {
                const Jet2 s = 1.0 - xj * xj - yj * yj;
                if (s.value().real() <= 0.0)
                    throw DomainError("poincare potential evaluated outside the unit disk");
                return pow(s, -2.0);
            }
            case PotentialKind::kHarmonic: {
                VarBindings<Jet2> v;
                v.z = Jet2::variable_z(x, y);
                const Jet2 dphi = evaluate(w_ast_, v); // phi'(z)
                return dphi + conj(dphi);
            }
            case PotentialKind::kTubular: {
                VarBindings<Jet2> v;
                v.y = yj;
                v.x = xj;
                return evaluate(w_ast_, v);
            }
            case PotentialKind::kFrt:
                return pow(xj, 1.5);
            case PotentialKind::kCustom: {
                VarBindings<Jet2> v;
                v.x = xj;
                v.y = yj;
                return evaluate(w_ast_, v);
            }
        }
        throw std::logic_error("unreachable potential kind");
    }

    PotentialKind kind_;
    std::string name_;
    std::string description_;
    Domain box_;
    ExprPtr f_ast_; // custom/tubular F, harmonic phi
    ExprPtr w_ast_; // pre-differentiated w (or phi' for harmonic)
};

/// The six built-in potentials, in catalog order.
inline std::vector<Potential> default_catalog() {
    return {Potential::flat(),             Potential::fubini_study(), Potential::poincare(),
            Potential::harmonic_default(), Potential::frt(),          Potential::tubular_default()};
}

} // namespace crlift
