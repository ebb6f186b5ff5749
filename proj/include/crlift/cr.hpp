// SPDX-License-Identifier: MIT
#pragma once

#include "crlift/jet.hpp"
#include "crlift/potential.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace crlift {

/// Pointwise CR data derived from a potential: the contact scale φ, the
/// structure function c, the base Gauss curvature density R, and the contact
/// form coefficients. Everything is u-independent by construction.
///
/// Conventions (fixed across the library):
///   w     = F_{zz̄}                  φ = 1/(2w)        eta_o = 2w
///   c     = −∂_z log w               R = −∂_z∂_z̄ log w
///   λ     = φ·(du − F_y dx + F_x dy) = λ_du du + λ_dz dz + conj(λ_dz) dz̄
///   frame   ∂ = ∂_z + iF_z ∂_u,  ∂₀ = 2w ∂_u,  with λ(∂₀) = 1, λ(∂) = 0.
struct CRPoint {
    double x = 0.0, y = 0.0;
    Jet2 F;       // order 4
    Jet2 w;       // order 4
    Jet2 c_jet;   // order 3
    Jet2 phi_jet; // order 4
    Complex c;
    double phi = 0.0;
    double R = 0.0;
    double eta_o = 0.0;
    double lambda_du = 0.0;
    Complex lambda_dz;
    double duality_residual = 0.0; // max of |λ(∂₀)−1|, |λ(∂)|, |μ(∂)−1|

    Complex z() const { return {x, y}; }
};

inline CRPoint build_cr_point(const Potential& P, double x, double y) {
    CRPoint pt;
    pt.x = x;
    pt.y = y;
    pt.F = P.F(x, y);
    pt.w = P.w(x, y);

    const Jet2 logw = log(pt.w);
    pt.c_jet = -d_z(logw);
    pt.c = pt.c_jet.value();

    const Complex Rv = -d_zbar(d_z(logw)).value();
    if (std::abs(Rv.imag()) > 1e-9 * std::max(1.0, std::abs(Rv.real())))
        throw DomainError("curvature density came out non-real; potential data is inconsistent");
    pt.R = Rv.real();

    pt.phi_jet = 0.5 / pt.w;
    pt.phi = pt.phi_jet.value().real();
    pt.eta_o = 2.0 * pt.w.value().real();

    pt.lambda_du = pt.phi;
    const Complex Fz = d_z(pt.F).value();
    pt.lambda_dz = Complex(0.0, -1.0) * pt.phi * Fz;

    // duality of (λ, μ = dz) against (∂₀ = 2w ∂_u, ∂ = ∂_z + iF_z ∂_u)
    const double lam_d0 = std::abs(pt.lambda_du * pt.eta_o - 1.0);
    const double lam_d = std::abs(pt.lambda_dz + pt.lambda_du * Complex(0.0, 1.0) * Fz);
    pt.duality_residual = std::max(lam_d0, lam_d); // μ(∂) = dz(∂_z) = 1 identically
    return pt;
}

/// Max-norm deviation of dλ from i dz∧dz̄ + c dz∧λ + c̄ dz̄∧λ, assembled
/// componentwise on dx∧dy, dx∧du, dy∧du from jets of the λ coefficients.
inline double verify_structure_equation(const Potential& P, double x, double y) {
    const Jet2 F = P.F(x, y);
    const Jet2 w = P.w(x, y);
    const Jet2 phi = 0.5 / w;
    const Jet2 lam_x = -(phi * d_y(F));
    const Jet2 lam_y = phi * d_x(F);
    const Complex c = -d_z(log(w)).value();
    const double a = c.real(), b = c.imag();

    const Complex lx = lam_x.value(), ly = lam_y.value(), ph = phi.value();
    const Complex r_xy = d_x(lam_y).value() - d_y(lam_x).value() - (2.0 + 2.0 * a * ly + 2.0 * b * lx);
    const Complex r_xu = d_x(phi).value() - 2.0 * a * ph;
    const Complex r_yu = d_y(phi).value() + 2.0 * b * ph;
    return std::max({std::abs(r_xy), std::abs(r_xu), std::abs(r_yu)});
}

struct SasakianReport {
    bool is_sasakian = false;
    double max_residual = 0.0;
};

/// The transversal-symmetry test. ∂_u c vanishes identically for any
/// potential-derived structure (c carries no u), so the verdict is carried by
/// the integrability residual |b_x + a_y| for c = a + ib.
inline SasakianReport check_sasakian(const Potential& P,
                                     const std::vector<std::pair<double, double>>& samples) {
    SasakianReport rep;
    rep.is_sasakian = true;
    for (const auto& [x, y] : samples) {
        const Jet2 c = -d_z(log(P.w(x, y)));
        const double bx = d_x(c).value().imag();
        const double ay = d_y(c).value().real();
        rep.max_residual = std::max(rep.max_residual, std::abs(bx + ay));
    }
    return rep;
}

/// Integrates the closed 1-form (2a, −2b) along a polyline and exponentiates:
/// the relative scale A of the symmetry generator between the endpoints.
/// Composite Simpson quadrature, 256 subintervals per segment.
inline double reeb_scale(const Potential& P, const std::vector<Complex>& polyline) {
    if (polyline.size() < 2)
        throw std::invalid_argument("reeb_scale needs a polyline with at least two vertices");
    double integral = 0.0;
    constexpr int kSub = 256;
    for (size_t seg = 0; seg + 1 < polyline.size(); ++seg) {
        const Complex z0 = polyline[seg], z1 = polyline[seg + 1];
        const Complex dz = (z1 - z0) / static_cast<double>(kSub);
        auto integrand = [&](const Complex& z) {
            const Complex c = -d_z(log(P.w(z.real(), z.imag()))).value();
            // (2a, -2b) · (dx, dy) per unit parameter
            return 2.0 * c.real() * dz.real() - 2.0 * c.imag() * dz.imag();
        };
        double seg_sum = 0.0;
        for (int k = 0; k < kSub; ++k) {
            const Complex za = z0 + static_cast<double>(k) * dz;
            const Complex zm = za + 0.5 * dz;
            const Complex zb = za + dz;
            seg_sum += (integrand(za) + 4.0 * integrand(zm) + integrand(zb)) / 6.0;
        }
        integral += seg_sum;
    }
    return std::exp(integral);
}

/// A coframe rescaling μ → f(μ + hλ), λ → |f|²λ. `f` supplies an order-4 jet
/// at each point; `h` defaults to the compatible choice −i ∂̄(log f).
struct GaugePair {
    std::function<Jet2(double, double)> f;
    std::function<Jet2(double, double)> h;

    static GaugePair from_f(std::function<Jet2(double, double)> f_eval) {
        GaugePair g;
        g.f = f_eval;
        g.h = [f_eval](double x, double y) {
            return Complex(0.0, -1.0) * d_zbar(log(f_eval(x, y)));
        };
        return g;
    }

    /// |h − (−i ∂̄ log f)| at a point; the compatibility invariant.
    double consistency_residual(double x, double y) const {
        const Jet2 expected = Complex(0.0, -1.0) * d_zbar(log(f(x, y)));
        return std::abs(h(x, y).value() - expected.value());
    }
};

struct GaugeResult {
    Complex c_prime;
    Complex alpha_prime;
    Complex beta_prime;
};

/// Transforms the structure functions under the coframe rescaling. The input
/// coframe is the coordinate one (μ = dz), whose α and β vanish, so only the
/// inhomogeneous terms survive. All fields are u-independent, hence the
/// ∂₀ log f term drops.
inline GaugeResult gauge_transform(const CRPoint& pt, const GaugePair& g) {
    const Jet2 fj = g.f(pt.x, pt.y);
    if (std::abs(fj.value()) < 1e-14)
        throw DomainError("gauge factor vanishes at the evaluation point");
    const Jet2 hj = g.h(pt.x, pt.y);
    const Jet2 logf = log(fj);
    const Jet2 dlogf = d_z(logf);

    const Complex f = fj.value();
    const Complex h = hj.value();
    const Complex c = pt.c;

    GaugeResult out;
    out.c_prime = (c - 2.0 * Complex(0.0, 1.0) * std::conj(h) + dlogf.value()) / f;
    const double f2 = std::norm(f);
    out.alpha_prime = (h * dlogf.value() + d_z(hj).value() + h * c) / f2;
    out.beta_prime = (Complex(0.0, 1.0) * h * h + d_zbar(hj).value() + std::conj(c) * h) /
                     (std::conj(f) * std::conj(f));
    return out;
}

} // namespace crlift
