// SPDX-License-Identifier: MIT
#pragma once

/// Classical RK4 integrator for the tube profile equation
///
///   q'' + R(y) q = (4/3) Λ F_yy(y) q³,
///
/// the one-variable reduction of the conformal-factor equation under the
/// tube normalizer p = √(F_yy) q. Dense output is a piecewise quintic
/// Hermite built from (q, q', q'') at the step ends, which keeps the
/// interpolant C² so the lift can take two y-derivatives through it.

#include "crlift/jet.hpp"
#include "crlift/lift.hpp"
#include "crlift/potential.hpp"
#include "crlift/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crlift {

struct TubularOptions {
    double h = 1e-3;       // nominal RK4 step; shrunk to divide the range evenly
    double q_ceiling = 1e6; // |q| above this counts as blow-up
};

class TubularSolution {
  public:
    TubularSolution(double y_lo, double h, double lambda, std::vector<double> q,
                    std::vector<double> qp, std::vector<double> qpp)
        : y_lo_(y_lo), h_(h), lambda_(lambda), q_(std::move(q)), qp_(std::move(qp)),
          qpp_(std::move(qpp)) {}

    double y_lo() const { return y_lo_; }
    double y_hi() const { return y_lo_ + h_ * static_cast<double>(q_.size() - 1); }
    double step() const { return h_; }
    int steps() const { return static_cast<int>(q_.size()) - 1; }
    double lambda() const { return lambda_; }
    const std::vector<double>& node_values() const { return q_; }
    const std::vector<double>& node_slopes() const { return qp_; }

    double q(double y) const { return hermite_(y, 0); }
    double q_prime(double y) const { return hermite_(y, 1); }
    double q_second(double y) const { return hermite_(y, 2); }

    /// Order-2 jet in (x, y) with the x slots dead, for the lift machinery.
    Jet2 q_jet(double x, double y) const {
        Jet2 out = Jet2::constant(q(y), x, y, 2);
        out.set_coeff(0, 1, q_prime(y));
        out.set_coeff(0, 2, 0.5 * q_second(y));
        return out;
    }

  private:
    double hermite_(double y, int deriv) const {
        const int n = steps();
        if (y < y_lo_ - 1e-12 || y > y_hi() + 1e-12)
            throw DomainError("evaluation point outside the integrated range");
        const int k = std::clamp(static_cast<int>(std::floor((y - y_lo_) / h_)), 0, n - 1);
        const double t = (y - (y_lo_ + k * h_)) / h_;
        const size_t ks = static_cast<size_t>(k);

        const double a0 = q_[ks];
        const double a1 = h_ * qp_[ks];
        const double a2 = 0.5 * h_ * h_ * qpp_[ks];
        const double A = q_[ks + 1] - a0 - a1 - a2;
        const double B = h_ * qp_[ks + 1] - a1 - 2.0 * a2;
        const double C = h_ * h_ * qpp_[ks + 1] - 2.0 * a2;
        const double a5 = 0.5 * (C - 6.0 * B + 12.0 * A);
        const double a4 = B - 3.0 * A - 2.0 * a5;
        const double a3 = A - a4 - a5;

        switch (deriv) {
        case 0:
            return a0 + t * (a1 + t * (a2 + t * (a3 + t * (a4 + t * a5))));
        case 1:
            return (a1 + t * (2 * a2 + t * (3 * a3 + t * (4 * a4 + t * 5 * a5)))) / h_;
        default:
            return (2 * a2 + t * (6 * a3 + t * (12 * a4 + t * 20 * a5))) / (h_ * h_);
        }
    }

    double y_lo_ = 0.0;
    double h_ = 0.0;
    double lambda_ = 0.0;
    std::vector<double> q_, qp_, qpp_;
};

namespace odedetail {

struct TubeRhs {
    const Potential* P;
    double lambda;

    // q'' = G(y, q) = -R(y) q + (4/3) Λ F_yy(y) q³, with F_yy = 4w and
    // R = -(log w)''/4 read off the potential's one-variable jet
    double operator()(double y, double q) const {
        const Jet1 wj = P->w_along_y(y);
        const double fyy = 4.0 * wj.value().real();
        const double R = -0.25 * log(wj).deriv(2).real();
        return -R * q + (4.0 / 3.0) * lambda * fyy * q * q * q;
    }
};

} // namespace odedetail

/// Integrates the tube equation from (q0, q0') at the lower edge of the
/// potential's y-range. Throws SolveError when the profile crosses zero or
/// exceeds the ceiling, reporting where.
inline TubularSolution solve_tubular(const Potential& P, double lambda, double q0, double qp0,
                                     double y_lo, double y_hi, TubularOptions opts = {}) {
    if (!P.is_tubular())
        throw std::invalid_argument("tube integration needs a tubular potential");
    if (!(y_hi > y_lo))
        throw std::invalid_argument("empty integration range");
    if (!(opts.h > 0.0))
        throw std::invalid_argument("step must be positive");
    if (!(q0 > 0.0))
        throw std::invalid_argument("initial profile value must be positive");

    const int n = std::max(1, static_cast<int>(std::ceil((y_hi - y_lo) / opts.h - 1e-12)));
    const double h = (y_hi - y_lo) / n;
    const odedetail::TubeRhs rhs{&P, lambda};

    std::vector<double> q(static_cast<size_t>(n) + 1), qp(q.size()), qpp(q.size());
    q[0] = q0;
    qp[0] = qp0;
    qpp[0] = rhs(y_lo, q0);

    double u = q0, v = qp0;
    for (int k = 0; k < n; ++k) {
        const double y = y_lo + k * h;
        const double k1u = v, k1v = rhs(y, u);
        const double k2u = v + 0.5 * h * k1v, k2v = rhs(y + 0.5 * h, u + 0.5 * h * k1u);
        const double k3u = v + 0.5 * h * k2v, k3v = rhs(y + 0.5 * h, u + 0.5 * h * k2u);
        const double k4u = v + h * k3v, k4v = rhs(y + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!(u > 0.0) || std::abs(u) > opts.q_ceiling || !std::isfinite(u) ||
            !std::isfinite(v)) {
            std::ostringstream oss;
            oss << "profile left (0, " << opts.q_ceiling << "] near y = " << y + h
                << " (q = " << u << ")";
            throw SolveError(oss.str());
        }
        const size_t ks = static_cast<size_t>(k) + 1;
        q[ks] = u;
        qp[ks] = v;
        qpp[ks] = rhs(y + h, u);
    }
    return TubularSolution(y_lo, h, lambda, std::move(q), std::move(qp), std::move(qpp));
}

/// Taylor derivatives (q, q', ..., q'''') of the exact solution through
/// (q0, q0') at y, read off the equation itself by coefficient recursion.
/// Independent of the integrator; used to check its dense output.
inline std::array<double, 5> tubular_derivative_oracle(const Potential& P, double lambda,
                                                       double y, double q0, double qp0) {
    if (!P.is_tubular())
        throw std::invalid_argument("tube oracle needs a tubular potential");
    const Jet1 wj = P.w_along_y(y);
    const Jet1 Rj = -0.25 * d_dy(d_dy(log(wj)));
    const Jet1 fyy = 4.0 * wj;

    Jet1 qj = Jet1::constant(q0, y, 4);
    qj.set_coeff(1, qp0);
    std::array<double, 5> out{q0, qp0, 0.0, 0.0, 0.0};
    for (int k = 0; k <= 2; ++k) {
        const Jet1 g = -(Rj * qj) + (4.0 / 3.0) * lambda * (fyy * qj * qj * qj);
        const Complex c = g.coeff(k) / static_cast<double>((k + 1) * (k + 2));
        qj.set_coeff(k + 2, c);
        out[static_cast<size_t>(k) + 2] = c.real() * std::tgamma(static_cast<double>(k) + 3.0);
    }
    return out;
}

/// Wraps an integrated tube profile as a lift profile through its jets.
inline LiftProfile lift_from_ode(const Potential& P, TubularSolution sol) {
    auto shared = std::make_shared<const TubularSolution>(std::move(sol));
    return LiftProfile::from_q(
        P, [shared](double x, double y) { return shared->q_jet(x, y); }, shared->lambda());
}

} // namespace crlift
