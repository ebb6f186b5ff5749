// SPDX-License-Identifier: MIT
#pragma once

/// Finite-difference curvature of a 4-metric given as a black-box function
/// of the coordinates: Christoffel symbols, the lowered Riemann tensor,
/// Ricci, the curvature scalar, and the Weyl tensor, plus the structured
/// checks built on them (Einstein-with-source pattern, null expansion).
///
/// Index conventions, fixed by the reference-metric tests:
///   Γ_{ρμν}   = (∂_μ g_{ρν} + ∂_ν g_{ρμ} − ∂_ρ g_{μν}) / 2
///   R_{ρσμν}  = (∂_μ∂_σ g_{ρν} + ∂_ν∂_ρ g_{σμ}
///                − ∂_μ∂_ρ g_{νσ} − ∂_ν∂_σ g_{ρμ}) / 2
///                + g^{αβ} (Γ_{ανρ} Γ_{βμσ} − Γ_{αμρ} Γ_{βνσ})
///   Ric_{σν}  = g^{μρ} R_{ρσμν}
/// With the mostly-plus signature this gives the unit 2-sphere Ric_θθ = +1.

#include "crlift/jet.hpp"
#include "crlift/metric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace crlift {

/// Dense rank-4 tensor over coordinate indices 0..3.
struct Tensor4 {
    std::array<double, 256> v{};
    double& operator()(int a, int b, int c, int d) {
        return v[static_cast<size_t>(((a * 4 + b) * 4 + c) * 4 + d)];
    }
    double operator()(int a, int b, int c, int d) const {
        return v[static_cast<size_t>(((a * 4 + b) * 4 + c) * 4 + d)];
    }
};

using MetricFn = std::function<Eigen::Matrix4d(const Point4&)>;

struct CurvatureOptions {
    double h = 1e-3;        // base stencil step, scaled by coordinate size
    bool richardson = true; // fourth-order stencils and halved cross terms
};

struct PointCurvature {
    Eigen::Matrix4d g;
    Eigen::Matrix4d ginv;
    std::array<Eigen::Matrix4d, 4> dg;    // dg[μ](a,b) = ∂_μ g_{ab}
    std::array<Eigen::Matrix4d, 4> gamma; // gamma[ρ](μ,ν) = Γ_{ρμν}
    Tensor4 riemann;                      // fully lowered
    Eigen::Matrix4d ric;
    double scalar = 0.0;
    Tensor4 weyl;
};

inline Point4 shifted(Point4 p, int axis, double d) {
    switch (axis) {
    case 0: p.x += d; break;
    case 1: p.y += d; break;
    case 2: p.u += d; break;
    default: p.r += d; break;
    }
    return p;
}

/// Bilinear (unconjugated) pairing of a real matrix with complex vectors.
inline Complex bilinear(const Eigen::Matrix4d& M, const Eigen::Vector4cd& a,
                        const Eigen::Vector4cd& b) {
    return (a.transpose() * M.cast<Complex>() * b)(0, 0);
}

/// Full contraction of a rank-4 tensor with four complex vectors.
inline Complex project(const Tensor4& T, const Eigen::Vector4cd& a, const Eigen::Vector4cd& b,
                       const Eigen::Vector4cd& c, const Eigen::Vector4cd& d) {
    Complex out = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const double t = T(i, j, k, l);
                    if (t != 0.0)
                        out += t * a(i) * b(j) * c(k) * d(l);
                }
    return out;
}

class CurvatureEngine {
  public:
    explicit CurvatureEngine(MetricFn g, CurvatureOptions opts = {})
        : g_(std::move(g)), opts_(opts) {}

    const CurvatureOptions& options() const { return opts_; }

    PointCurvature at(const Point4& pt) const {
        PointCurvature out;
        out.g = g_(pt);
        out.ginv = out.g.inverse();

        const std::array<double, 4> c{pt.x, pt.y, pt.u, pt.r};
        std::array<double, 4> h;
        for (int m = 0; m < 4; ++m)
            h[static_cast<size_t>(m)] = opts_.h * std::max(1.0, std::abs(c[static_cast<size_t>(m)]));

        // axis stencils: shared by first and pure second derivatives
        std::array<Eigen::Matrix4d, 4> gp, gm, gp2, gm2;
        for (int m = 0; m < 4; ++m) {
            const double hm = h[static_cast<size_t>(m)];
            gp[static_cast<size_t>(m)] = g_(shifted(pt, m, hm));
            gm[static_cast<size_t>(m)] = g_(shifted(pt, m, -hm));
            if (opts_.richardson) {
                gp2[static_cast<size_t>(m)] = g_(shifted(pt, m, 2.0 * hm));
                gm2[static_cast<size_t>(m)] = g_(shifted(pt, m, -2.0 * hm));
            }
        }

        std::array<std::array<Eigen::Matrix4d, 4>, 4> dd;
        for (int m = 0; m < 4; ++m) {
            const size_t ms = static_cast<size_t>(m);
            const double hm = h[ms];
            if (opts_.richardson) {
                out.dg[ms] = (-gp2[ms] + 8.0 * gp[ms] - 8.0 * gm[ms] + gm2[ms]) / (12.0 * hm);
                dd[ms][ms] = (-gp2[ms] + 16.0 * gp[ms] - 30.0 * out.g + 16.0 * gm[ms] -
                              gm2[ms]) /
                             (12.0 * hm * hm);
            } else {
                out.dg[ms] = (gp[ms] - gm[ms]) / (2.0 * hm);
                dd[ms][ms] = (gp[ms] - 2.0 * out.g + gm[ms]) / (hm * hm);
            }
        }

        for (int m = 0; m < 4; ++m)
            for (int n = m + 1; n < 4; ++n) {
                const double hm = h[static_cast<size_t>(m)], hn = h[static_cast<size_t>(n)];
                const Eigen::Matrix4d e1 = cross_(pt, m, n, hm, hn);
                Eigen::Matrix4d mixed = e1;
                if (opts_.richardson) {
                    const Eigen::Matrix4d e2 = cross_(pt, m, n, 2.0 * hm, 2.0 * hn);
                    mixed = (4.0 * e1 - e2) / 3.0;
                }
                dd[static_cast<size_t>(m)][static_cast<size_t>(n)] = mixed;
                dd[static_cast<size_t>(n)][static_cast<size_t>(m)] = mixed;
            }

        for (int r = 0; r < 4; ++r) {
            Eigen::Matrix4d gam;
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n)
                    gam(m, n) = 0.5 * (out.dg[static_cast<size_t>(m)](r, n) +
                                       out.dg[static_cast<size_t>(n)](r, m) -
                                       out.dg[static_cast<size_t>(r)](m, n));
            out.gamma[static_cast<size_t>(r)] = gam;
        }

        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s)
                for (int m = 0; m < 4; ++m)
                    for (int n = 0; n < 4; ++n) {
                        double val =
                            0.5 * (dd[static_cast<size_t>(m)][static_cast<size_t>(s)](r, n) +
                                   dd[static_cast<size_t>(n)][static_cast<size_t>(r)](s, m) -
                                   dd[static_cast<size_t>(m)][static_cast<size_t>(r)](n, s) -
                                   dd[static_cast<size_t>(n)][static_cast<size_t>(s)](r, m));
                        for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b)
                                val += out.ginv(a, b) *
                                       (out.gamma[static_cast<size_t>(a)](n, r) *
                                            out.gamma[static_cast<size_t>(b)](m, s) -
                                        out.gamma[static_cast<size_t>(a)](m, r) *
                                            out.gamma[static_cast<size_t>(b)](n, s));
                        out.riemann(r, s, m, n) = val;
                    }

        for (int s = 0; s < 4; ++s)
            for (int n = 0; n < 4; ++n) {
                double val = 0.0;
                for (int m = 0; m < 4; ++m)
                    for (int r = 0; r < 4; ++r)
                        val += out.ginv(m, r) * out.riemann(r, s, m, n);
                out.ric(s, n) = val;
            }

        out.scalar = 0.0;
        for (int s = 0; s < 4; ++s)
            for (int n = 0; n < 4; ++n)
                out.scalar += out.ginv(s, n) * out.ric(s, n);

        const Eigen::Matrix4d& G = out.g;
        const Eigen::Matrix4d& Rc = out.ric;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int cc = 0; cc < 4; ++cc)
                    for (int d = 0; d < 4; ++d)
                        out.weyl(a, b, cc, d) =
                            out.riemann(a, b, cc, d) -
                            0.5 * (G(a, cc) * Rc(b, d) - G(a, d) * Rc(b, cc) -
                                   G(b, cc) * Rc(a, d) + G(b, d) * Rc(a, cc)) +
                            out.scalar / 6.0 * (G(a, cc) * G(b, d) - G(a, d) * G(b, cc));

        return out;
    }

  private:
    Eigen::Matrix4d cross_(const Point4& pt, int m, int n, double hm, double hn) const {
        const Eigen::Matrix4d pp = g_(shifted(shifted(pt, m, hm), n, hn));
        const Eigen::Matrix4d pm = g_(shifted(shifted(pt, m, hm), n, -hn));
        const Eigen::Matrix4d mp = g_(shifted(shifted(pt, m, -hm), n, hn));
        const Eigen::Matrix4d mm = g_(shifted(shifted(pt, m, -hm), n, -hn));
        return (pp - pm - mp + mm) / (4.0 * hm * hn);
    }

    MetricFn g_;
    CurvatureOptions opts_;
};

struct RicciSample {
    Point4 pt;
    Eigen::Matrix4cd ric_frame; // bilinear frame projection of Ricci
    double phi = 0.0;           // P² · Ric(e₃, e₃)
    Complex d0, d1, psi2;       // Weyl frame scalars C₄₁₄₁, C₄₃₄₁, C₄₁₃₂
};

struct QuasiEinsteinReport {
    std::vector<RicciSample> samples;
    double lambda_fit = 0.0;
    double max_pattern_residual = 0.0; // every slot except (3,3) against Λ·Gram
    double max_phi = 0.0;
    std::string verdict; // "einstein", "quasi_einstein", or "fail"
};

/// Measures how close the metric is to Ric = Λ g + Φ λ⊗λ with the source
/// aligned along the lifted contact form. Λ is fit from the (1,2) and
/// (3,4) frame slots; only the (3,3) slot may then deviate, and its size
/// (scaled back by P²) is reported as Φ.
inline QuasiEinsteinReport quasi_einstein_check(const MetricField& mf,
                                                const std::vector<Point4>& pts,
                                                CurvatureOptions copts = {},
                                                double tol_pattern = 1e-4,
                                                double tol_phi = 1e-4) {
    const CurvatureEngine engine(mf.g_fn(), copts);
    QuasiEinsteinReport rep;
    rep.samples.reserve(pts.size());

    for (const Point4& pt : pts) {
        const PointCurvature pc = engine.at(pt);
        const auto e = mf.frame(pt);
        RicciSample s;
        s.pt = pt;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                s.ric_frame(a, b) =
                    bilinear(pc.ric, e[static_cast<size_t>(a)], e[static_cast<size_t>(b)]);
        const double P = mf.P(pt);
        s.phi = P * P * s.ric_frame(2, 2).real();
        s.d0 = project(pc.weyl, e[3], e[0], e[3], e[0]);
        s.d1 = project(pc.weyl, e[3], e[2], e[3], e[0]);
        s.psi2 = project(pc.weyl, e[3], e[0], e[2], e[1]);
        rep.samples.push_back(std::move(s));
    }

    double lam = 0.0;
    for (const RicciSample& s : rep.samples)
        lam += 0.5 * (s.ric_frame(0, 1).real() + s.ric_frame(2, 3).real());
    if (!rep.samples.empty())
        lam /= static_cast<double>(rep.samples.size());
    rep.lambda_fit = lam;

    for (const RicciSample& s : rep.samples) {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                if (a == 2 && b == 2) {
                    // free slot; only its imaginary part is constrained
                    rep.max_pattern_residual =
                        std::max(rep.max_pattern_residual, std::abs(s.ric_frame(a, b).imag()));
                    continue;
                }
                const bool unit = (a == 0 && b == 1) || (a == 1 && b == 0) ||
                                  (a == 2 && b == 3) || (a == 3 && b == 2);
                const Complex expect = unit ? Complex(lam, 0.0) : Complex(0.0, 0.0);
                rep.max_pattern_residual =
                    std::max(rep.max_pattern_residual, std::abs(s.ric_frame(a, b) - expect));
            }
        rep.max_phi = std::max(rep.max_phi, std::abs(s.phi));
    }

    if (rep.max_pattern_residual < tol_pattern)
        rep.verdict = rep.max_phi < tol_phi ? "einstein" : "quasi_einstein";
    else
        rep.verdict = "fail";
    return rep;
}

struct ShearfreeReport {
    double s_fit = 0.0;                // phase in ρ = tan((r + s)/2)
    double max_pattern_residual = 0.0; // off-(1,2) slots of ∂_r g on span{e₁,e₂,e₄}
    double max_rho_mismatch = 0.0;     // |ρ − tan((r + s)/2)| across samples
    std::vector<double> rho;
};

/// The lifted null direction k = ∂_r must stretch its screen space
/// conformally: on span{e₁, e₂, e₄} the Lie derivative of g along k is
/// 2ρ·Gram with a single expansion function ρ(r) = tan((r + s)/2), and no
/// shear. Both facts are checked by finite differences.
inline ShearfreeReport shearfree_check(const MetricField& mf, const std::vector<Point4>& pts,
                                       CurvatureOptions copts = {}) {
    ShearfreeReport rep;
    const MetricFn g = mf.g_fn();
    bool have_phase = false;

    for (const Point4& pt : pts) {
        const double h = copts.h;
        Eigen::Matrix4d dgr;
        if (copts.richardson) {
            dgr = (-g(shifted(pt, 3, 2 * h)) + 8.0 * g(shifted(pt, 3, h)) -
                   8.0 * g(shifted(pt, 3, -h)) + g(shifted(pt, 3, -2 * h))) /
                  (12.0 * h);
        } else {
            dgr = (g(shifted(pt, 3, h)) - g(shifted(pt, 3, -h))) / (2.0 * h);
        }

        const auto e = mf.frame(pt);
        const std::array<int, 3> screen{0, 1, 3}; // e₁, e₂, e₄
        const Complex s12 = bilinear(dgr, e[0], e[1]);
        const double rho = s12.real();
        rep.rho.push_back(rho);
        rep.max_pattern_residual = std::max(rep.max_pattern_residual, std::abs(s12.imag()));

        for (int ia = 0; ia < 3; ++ia)
            for (int ib = 0; ib < 3; ++ib) {
                const int a = screen[static_cast<size_t>(ia)];
                const int b = screen[static_cast<size_t>(ib)];
                const bool unit = (a == 0 && b == 1) || (a == 1 && b == 0);
                const Complex expect = unit ? Complex(rho, 0.0) : Complex(0.0, 0.0);
                const Complex got = bilinear(dgr, e[static_cast<size_t>(a)],
                                             e[static_cast<size_t>(b)]);
                rep.max_pattern_residual =
                    std::max(rep.max_pattern_residual, std::abs(got - expect));
            }

        if (!have_phase) {
            rep.s_fit = 2.0 * std::atan(rho) - pt.r;
            have_phase = true;
        }
        rep.max_rho_mismatch =
            std::max(rep.max_rho_mismatch, std::abs(rho - std::tan(0.5 * (pt.r + rep.s_fit))));
    }
    return rep;
}

} // namespace crlift
