// SPDX-License-Identifier: MIT
#pragma once

#include "crlift/cr.hpp"
#include "crlift/jet.hpp"
#include "crlift/potential.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crlift {

/// Data defining one 4-dimensional lift: the cosmological constant, the
/// conformal factor p = f·q (f = √F_{zz̄}, tube branch f = √F_yy = 2√w),
/// and evaluators for every scalar the metric and its verification formulas
/// need. The free functions s and t of the general construction are pinned
/// to 0, which forces Y = iX; p carries no u-dependence. All evaluators are
/// pure and safe to call concurrently.
class LiftProfile {
  public:
    using FieldJet = std::function<Jet2(double, double)>;

    /// Profile with p = f·q for a caller-supplied q (solver output, constant,
    /// or expression). q must be positive wherever evaluated.
    static LiftProfile from_q(const Potential& P, FieldJet q_jet, double Lambda) {
        LiftProfile prof(P, Lambda);
        prof.q_jet_ = std::move(q_jet);
        return prof;
    }

    static LiftProfile from_constant_q(const Potential& P, double q0, double Lambda) {
        if (q0 <= 0.0) throw DomainError("constant conformal factor must be positive");
        return from_q(
            P, [q0](double x, double y) { return Jet2::constant(q0, x, y); }, Lambda);
    }

    /// Profile with p supplied directly (explicit closed-form profiles).
    static LiftProfile from_p(const Potential& P, FieldJet p_jet, double Lambda) {
        LiftProfile prof(P, Lambda);
        prof.p_direct_ = std::move(p_jet);
        return prof;
    }

    const Potential& potential() const { return *potential_; }
    double lambda() const { return lambda_; }

    /// Orientation of the null rotation in r: the metric family is invariant
    /// under r → −r combined with conjugation, and the engine verifies both.
    int r_direction() const { return r_direction_; }
    void set_r_direction(int dir) {
        if (dir != 1 && dir != -1) throw std::invalid_argument("r direction must be +1 or -1");
        r_direction_ = dir;
    }

    /// f = √F_{zz̄} (tube branch: √F_yy), as a jet.
    Jet2 f_jet(double x, double y) const {
        const Jet2 w = potential_->w(x, y);
        return potential_->is_tubular() ? 2.0 * sqrt(w) : sqrt(w);
    }

    /// p as a jet, at the order the q source provides (full order for
    /// analytic q, order 2 for interpolated grid solutions). p > 0 enforced.
    Jet2 p_jet(double x, double y) const {
        Jet2 p = p_direct_ ? p_direct_(x, y) : f_jet(x, y) * q_jet_(x, y);
        const Complex p0 = p.value();
        if (std::abs(p0.imag()) > 1e-10 * std::max(1.0, std::abs(p0.real())))
            throw DomainError("conformal factor came out non-real");
        if (p0.real() <= 0.0)
            throw DomainError("conformal factor is not positive at (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
        return p;
    }

    /// m = i(2F_{zz̄})³, purely imaginary everywhere.
    Jet2 m_jet(double x, double y) const {
        const Jet2 tw = 2.0 * potential_->w(x, y);
        return Complex(0.0, 1.0) * tw * tw * tw;
    }

    Complex m(double x, double y) const { return m_jet(x, y).value(); }

    /// X = c + 2 ∂ log p (the s = t = 0 specialization).
    Complex X(double x, double y) const {
        const CRPoint cr = build_cr_point(*potential_, x, y);
        const Jet2 p = p_jet(x, y);
        return cr.c + 2.0 * d_z(log(p)).value();
    }

    /// Y = iX under the s = t = 0 ansatz.
    Complex Y(double x, double y) const { return Complex(0.0, 1.0) * X(x, y); }

    /// W(r) = iX e^{ir} + Y = iX(1 + e^{ir}), with the r-direction applied.
    Complex W(double x, double y, double r) const {
        const Complex Xv = X(x, y);
        const Complex eir = std::exp(Complex(0.0, r_direction_ * r));
        return Complex(0.0, 1.0) * Xv * (1.0 + eir);
    }

    /// Q = (3m + m̄)/p⁴ + (2/3)Λp² − (log p)_{zz̄} − ∂_z̄ c.
    Complex Q(double x, double y) const {
        const CRPoint cr = build_cr_point(*potential_, x, y);
        const Jet2 p = p_jet(x, y);
        const Complex mv = m(x, y);
        const Complex p0 = p.value();
        const Complex logp_zzb = d_zbar(d_z(log(p))).value();
        return (3.0 * mv + std::conj(mv)) / (p0 * p0 * p0 * p0) +
               (2.0 / 3.0) * lambda_ * p0 * p0 - logp_zzb - cr.R;
    }

    /// T = 3(m + m̄)/p⁴ + 2Λp² − 2(log p)_{zz̄} − 2∂_z̄ c; real.
    double T(double x, double y) const {
        const CRPoint cr = build_cr_point(*potential_, x, y);
        const Jet2 p = p_jet(x, y);
        const Complex mv = m(x, y);
        const Complex p0 = p.value();
        const Complex logp_zzb = d_zbar(d_z(log(p))).value();
        const Complex t = 3.0 * (mv + std::conj(mv)) / (p0 * p0 * p0 * p0) +
                          2.0 * lambda_ * p0 * p0 - 2.0 * logp_zzb - 2.0 * cr.R;
        if (std::abs(t.imag()) > 1e-10 * std::max(1.0, std::abs(t.real())))
            throw std::logic_error("T came out non-real; profile data is inconsistent");
        return t.real();
    }

    /// 𝓗(r) = (m/p⁴)e^{2ir} + conj + Q e^{ir} + conj + T; real by construction.
    double H(double x, double y, double r) const {
        const Jet2 p = p_jet(x, y);
        const Complex p0 = p.value();
        const Complex mhat = m(x, y) / (p0 * p0 * p0 * p0);
        const Complex e1 = std::exp(Complex(0.0, r_direction_ * r));
        const Complex e2 = e1 * e1;
        const Complex h = mhat * e2 + std::conj(mhat * e2) + Q(x, y) * e1 +
                          std::conj(Q(x, y) * e1) + T(x, y);
        if (std::abs(h.imag()) > 1e-10 * std::max(1.0, std::abs(h.real())))
            throw std::logic_error("H came out non-real; profile data is inconsistent");
        return h.real();
    }

    /// P = p / cos((r+s)/2) with s = 0; refuses the coordinate singularity.
    double P_factor(double x, double y, double r) const {
        const double cs = std::cos(0.5 * r);
        if (std::abs(cs) < 1e-3)
            throw DomainError("evaluation too close to the r-singularity of P (|cos(r/2)| < 1e-3)");
        return p_jet(x, y).value().real() / cs;
    }

    struct BResult {
        Complex B;       // (∂̄∂+∂∂̄+c̄∂+c∂̄+½|c|²+(3/2)∂̄c)p − (m+m̄)/p³ − (2/3)Λp³
        Complex reduced; // p_{zz̄}+½c̄p_z+½cp_z̄+(¼|c|²+¾R)p−(Λ/3)p³
    };

    /// The scalar constraint tying p to Λ, in both its full and reduced
    /// forms. They agree up to the factor 2 because m is purely imaginary;
    /// the full form keeps the m-term so that property is actually exercised.
    BResult evaluate_B(double x, double y) const {
        const CRPoint cr = build_cr_point(*potential_, x, y);
        const Jet2 p = p_jet(x, y);
        const Complex c = cr.c;
        const Complex p0 = p.value();
        const Complex pz = d_z(p).value();
        const Complex pzb = d_zbar(p).value();
        const Complex pzzb = d_zbar(d_z(p)).value();
        const Complex mv = m(x, y);
        const double c2 = std::norm(c);

        BResult out;
        out.B = 2.0 * pzzb + std::conj(c) * pz + c * pzb +
                (0.5 * c2 + 1.5 * cr.R) * p0 - (mv + std::conj(mv)) / (p0 * p0 * p0) -
                (2.0 / 3.0) * lambda_ * p0 * p0 * p0;
        out.reduced = pzzb + 0.5 * std::conj(c) * pz + 0.5 * c * pzb +
                      (0.25 * c2 + 0.75 * cr.R) * p0 - (lambda_ / 3.0) * p0 * p0 * p0;
        return out;
    }

    /// 𝓘 = ∂(∂ log p + c) + (∂ log p + c)², as a jet (order 2 for full
    /// profiles).
    Jet2 I_jet(double x, double y) const {
        const CRPoint cr = build_cr_point(*potential_, x, y);
        const Jet2 p = p_jet(x, y);
        const Jet2 s = d_z(log(p)) + cr.c_jet;
        return d_z(s) + s * s;
    }

    Complex I_value(double x, double y) const { return I_jet(x, y).value(); }

    /// Right side of the one remaining curvature component:
    ///   {(8/p⁴)(∂+2c)[p²(∂𝓘̄ − 2Λ(2∂̄ log p + c̄)p²)] + (16Λ/p)B} cos⁴(r/2).
    /// The ∂₀(m/p⁴) term vanishes because nothing depends on u.
    double ric33_rhs(double x, double y, double r) const {
        const CRPoint cr = build_cr_point(*potential_, x, y);
        const Jet2 p = p_jet(x, y);
        const Jet2 Ibar = conj(I_jet(x, y));
        const Jet2 G =
            p * p * (d_z(Ibar) - 2.0 * lambda_ * (2.0 * d_zbar(log(p)) + conj(cr.c_jet)) * p * p);
        const Complex Gz_plus = d_z(G).value() + 2.0 * cr.c * G.value();
        const Complex p0 = p.value();
        const Complex Bv = evaluate_B(x, y).B;
        const double cs = std::cos(0.5 * r);
        const Complex rhs =
            (8.0 / (p0 * p0 * p0 * p0) * Gz_plus + 16.0 * lambda_ / p0 * Bv) * std::pow(cs, 4);
        if (std::abs(rhs.imag()) > 1e-8 * std::max(1.0, std::abs(rhs.real())))
            throw std::logic_error("curvature right side came out non-real");
        return rhs.real();
    }

    /// Ψ₂ = (1 + e^{ir})³ m / (2p⁶).
    Complex psi2_formula(double x, double y, double r) const {
        const Complex p0 = p_jet(x, y).value();
        const Complex eir = std::exp(Complex(0.0, r_direction_ * r));
        const Complex one_eir = 1.0 + eir;
        return one_eir * one_eir * one_eir * m(x, y) / (2.0 * std::pow(p0, 6));
    }

  private:
    LiftProfile(const Potential& P, double Lambda)
        : potential_(std::make_shared<Potential>(P)), lambda_(Lambda) {}

    std::shared_ptr<const Potential> potential_;
    double lambda_ = 0.0;
    int r_direction_ = 1;
    FieldJet q_jet_;   // used when p_direct_ is empty
    FieldJet p_direct_; // explicit-p profiles
};

struct ResidualSample {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

struct ResidualReport {
    double max_abs = 0.0;
    std::vector<ResidualSample> samples;
};

/// Samples |reduced constraint| at random interior points of the profile's
/// box. A profile whose conformal factor solves the field equation should
/// report max_abs at the solver tolerance; an off-shell profile will not.
inline ResidualReport pde_residual(const LiftProfile& prof, int n_samples, unsigned seed) {
    const Domain& d = prof.potential().domain();
    const double mx = 0.02 * (d.x_max - d.x_min);
    const double my = 0.02 * (d.y_max - d.y_min);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dx(d.x_min + mx, d.x_max - mx);
    std::uniform_real_distribution<double> dy(d.y_min + my, d.y_max - my);
    ResidualReport rep;
    int rejects = 0;
    while (rep.samples.size() < static_cast<size_t>(n_samples)) {
        const double x = dx(rng);
        const double y = dy(rng);
        double v = 0.0;
        try {
            v = std::abs(prof.evaluate_B(x, y).reduced);
        } catch (const DomainError&) {
            if (++rejects > 100 * n_samples)
                throw DomainError("could not draw residual samples inside the domain");
            continue;
        }
        rep.samples.push_back({x, y, v});
        rep.max_abs = std::max(rep.max_abs, v);
    }
    return rep;
}

} // namespace crlift
