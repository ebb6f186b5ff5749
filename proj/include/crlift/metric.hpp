// SPDX-License-Identifier: MIT
#pragma once

#include "crlift/cr.hpp"
#include "crlift/lift.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>

namespace crlift {

struct Point4 {
    double x = 0.0, y = 0.0, u = 0.0, r = 0.0;
};

/// The lifted Lorentzian metric
///   g = 2P²(μμ̄ + λ(dr + Wμ + W̄μ̄ + Hλ)),  μ = dx + i dy,
/// in coordinates (x, y, u, r), together with the adapted null frame
///   e₁ = (1/P)(∂_z + iF_z ∂_u − W ∂_r),  e₂ = conj(e₁),
///   e₃ = (1/P)(2F_{zz̄} ∂_u − H ∂_r),     e₄ = (1/P) ∂_r
/// and its dual coframe θ¹ = Pμ, θ² = Pμ̄, θ³ = Pλ, θ⁴ = P(dr + Wμ + W̄μ̄ + Hλ).
/// The Gram matrix is antidiagonal: g(e₁,e₂) = g(e₃,e₄) = 1, all else 0.
/// Nothing depends on u (it is a symmetry direction of the construction).
class MetricField {
  public:
    explicit MetricField(LiftProfile profile) : profile_(std::move(profile)) {}

    const LiftProfile& profile() const { return profile_; }

    double P(const Point4& pt) const { return profile_.P_factor(pt.x, pt.y, pt.r); }

    /// Coordinate components g_{μν}, rows/cols ordered (x, y, u, r).
    Eigen::Matrix4d g(const Point4& pt) const {
        const CRPoint cr = build_cr_point(profile_.potential(), pt.x, pt.y);
        const double P2 = [&] {
            const double Pv = profile_.P_factor(pt.x, pt.y, pt.r);
            return Pv * Pv;
        }();
        const Complex Wv = profile_.W(pt.x, pt.y, pt.r);
        const double Hv = profile_.H(pt.x, pt.y, pt.r);

        // λ and V = dr + Wμ + W̄μ̄ + Hλ as real covectors
        const std::array<double, 4> lam = lambda_covector(cr);
        const std::array<double, 4> V{2.0 * Wv.real() + Hv * lam[0],
                                      -2.0 * Wv.imag() + Hv * lam[1], Hv * lam[2], 1.0};

        Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
        m(0, 0) = m(1, 1) = 2.0 * P2; // P²(μ⊗μ̄ + μ̄⊗μ)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) += P2 * (lam[static_cast<size_t>(i)] * V[static_cast<size_t>(j)] +
                                                         V[static_cast<size_t>(i)] * lam[static_cast<size_t>(j)]);
        return m;
    }

    /// Null frame e₁..e₄ (complex components over coordinates x, y, u, r).
    std::array<Eigen::Vector4cd, 4> frame(const Point4& pt) const {
        const CRPoint cr = build_cr_point(profile_.potential(), pt.x, pt.y);
        const double Pv = profile_.P_factor(pt.x, pt.y, pt.r);
        const Complex Wv = profile_.W(pt.x, pt.y, pt.r);
        const double Hv = profile_.H(pt.x, pt.y, pt.r);
        const Complex Fz = d_z(cr.F).value();
        const double tw = cr.eta_o; // 2 F_{zz̄}

        std::array<Eigen::Vector4cd, 4> e;
        e[0] << Complex(0.5, 0.0), Complex(0.0, -0.5), Complex(0.0, 1.0) * Fz, -Wv;
        e[1] = e[0].conjugate();
        e[2] << 0.0, 0.0, Complex(tw, 0.0), Complex(-Hv, 0.0);
        e[3] << 0.0, 0.0, 0.0, Complex(1.0, 0.0);
        for (auto& v : e) v /= Pv;
        return e;
    }

    /// Dual coframe θ¹..θ⁴ (complex covector components).
    std::array<Eigen::Vector4cd, 4> coframe(const Point4& pt) const {
        const CRPoint cr = build_cr_point(profile_.potential(), pt.x, pt.y);
        const double Pv = profile_.P_factor(pt.x, pt.y, pt.r);
        const Complex Wv = profile_.W(pt.x, pt.y, pt.r);
        const double Hv = profile_.H(pt.x, pt.y, pt.r);
        const std::array<double, 4> lam = lambda_covector(cr);

        std::array<Eigen::Vector4cd, 4> th;
        th[0] << Complex(1.0, 0.0), Complex(0.0, 1.0), 0.0, 0.0; // μ
        th[1] = th[0].conjugate();
        th[2] << lam[0], lam[1], lam[2], lam[3];
        th[3] << 2.0 * Wv.real() + Hv * lam[0], -2.0 * Wv.imag() + Hv * lam[1], Hv * lam[2],
            Complex(1.0, 0.0);
        for (auto& v : th) v *= Pv;
        return th;
    }

    /// Adapter for generic curvature code: a plain metric evaluator.
    std::function<Eigen::Matrix4d(const Point4&)> g_fn() const {
        return [*this](const Point4& pt) { return g(pt); };
    }

  private:
    static std::array<double, 4> lambda_covector(const CRPoint& cr) {
        // λ = φ(du − F_y dx + F_x dy); components from the stored λ_dz
        const double lam_x = 2.0 * cr.lambda_dz.real();
        const double lam_y = -2.0 * cr.lambda_dz.imag();
        return {lam_x, lam_y, cr.lambda_du, 0.0};
    }

    LiftProfile profile_;
};

} // namespace crlift
