// SPDX-License-Identifier: MIT
#pragma once

/// Damped-Newton solver for the conformal-factor equation
///
///   q_{z z̄} + a q = b q³,  a = R/4,  b = (Λ/3) w,
///
/// discretized with the five-point Laplacian (q_{z z̄} = Δq/4) on a uniform
/// grid over the potential's box. Dirichlet data defaults to the pointwise
/// balance value √(a/b); both the boundary and the initial guess can be
/// overridden for manufactured-solution studies.

#include "crlift/cr.hpp"
#include "crlift/jet.hpp"
#include "crlift/lift.hpp"
#include "crlift/potential.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crlift {

class SolveError : public std::runtime_error {
  public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverOptions {
    int nx = 65;
    int ny = 65;
    double tol = 1e-9;
    int max_iters = 50;
    /// Dirichlet data; when empty the balance value √(a/b) (clamped to 1e-6)
    /// is used on the boundary nodes.
    std::function<double(double, double)> boundary;
    /// Initial interior guess; when empty the boundary profile is used.
    std::function<double(double, double)> initial;
};

struct GridSolution {
    int nx = 0;
    int ny = 0;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double lambda = 0.0;
    std::vector<double> q; // row-major, q[j*nx + i]
    std::vector<double> residual_history; // max-norm residual, entry 0 = initial guess
    int newton_iterations = 0;
    /// Set when some grid node violates a > 0 and b > 0, the standard
    /// existence conditions for a positive solution. The solve still runs.
    bool positivity_warning = false;

    double hx() const { return (x_max - x_min) / (nx - 1); }
    double hy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return x_min + i * hx(); }
    double y(int j) const { return y_min + j * hy(); }
    double value(int i, int j) const {
        return q[static_cast<size_t>(j) * static_cast<size_t>(nx) + static_cast<size_t>(i)];
    }
    double max_residual() const {
        return residual_history.empty() ? 0.0 : residual_history.back();
    }

    /// Grid value extended one layer past each edge by cubic extrapolation,
    /// so the interpolation stencil is defined up to the boundary.
    double node(int i, int j) const {
        if (j < 0)
            return 4 * node(i, 0) - 6 * node(i, 1) + 4 * node(i, 2) - node(i, 3);
        if (j >= ny)
            return 4 * node(i, ny - 1) - 6 * node(i, ny - 2) + 4 * node(i, ny - 3) -
                   node(i, ny - 4);
        if (i < 0)
            return 4 * value(0, j) - 6 * value(1, j) + 4 * value(2, j) - value(3, j);
        if (i >= nx)
            return 4 * value(nx - 1, j) - 6 * value(nx - 2, j) + 4 * value(nx - 3, j) -
                   value(nx - 4, j);
        return value(i, j);
    }

    /// Catmull-Rom interpolant evaluated as an order-2 jet, so grid
    /// solutions plug into the lift machinery that needs q, q_z, q_{z z̄}.
    Jet2 q_jet(double px, double py) const {
        if (px < x_min - 1e-12 || px > x_max + 1e-12 || py < y_min - 1e-12 ||
            py > y_max + 1e-12)
            throw DomainError("interpolation point outside the solved box");
        const int ci = std::clamp(static_cast<int>(std::floor((px - x_min) / hx())), 0, nx - 2);
        const int cj = std::clamp(static_cast<int>(std::floor((py - y_min) / hy())), 0, ny - 2);
        const Jet2 tx = (Jet2::variable_x(px, py, 2) - Complex(x(ci))) * (1.0 / hx());
        const Jet2 ty = (Jet2::variable_y(px, py, 2) - Complex(y(cj))) * (1.0 / hy());
        std::array<Jet2, 4> rows = {tx, tx, tx, tx};
        for (int k = 0; k < 4; ++k)
            rows[static_cast<size_t>(k)] =
                catmull_(tx, node(ci - 1, cj - 1 + k), node(ci, cj - 1 + k),
                         node(ci + 1, cj - 1 + k), node(ci + 2, cj - 1 + k));
        return catmull_(ty, rows[0], rows[1], rows[2], rows[3]);
    }

  private:
    template <class V>
    static Jet2 catmull_(const Jet2& t, const V& p0, const V& p1, const V& p2, const V& p3) {
        const Jet2 t2 = t * t;
        const Jet2 t3 = t2 * t;
        return 0.5 * (2.0 * p1 + (p2 - p0) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                      (3.0 * (p1 - p2) + (p3 - p0)) * t3);
    }
};

class EllipticSolver {
  public:
    EllipticSolver(const Potential& P, double lambda, SolverOptions opts = {})
        : potential_(P), lambda_(lambda), opts_(std::move(opts)) {
        if (opts_.nx < 8 || opts_.ny < 8)
            throw std::invalid_argument("solver grid must be at least 8x8");
        if (opts_.max_iters < 1)
            throw std::invalid_argument("max_iters must be positive");
        build_coefficients_();
    }

    const Potential& potential() const { return potential_; }
    double lambda() const { return lambda_; }

    double a_at(int i, int j) const { return a_[index_(i, j)]; }
    double b_at(int i, int j) const { return b_[index_(i, j)]; }

    GridSolution solve() const {
        std::vector<double> q(a_.size());
        for (int j = 0; j < opts_.ny; ++j)
            for (int i = 0; i < opts_.nx; ++i) {
                const size_t k = index_(i, j);
                q[k] = opts_.initial ? opts_.initial(gx_(i), gy_(j)) : balance_(a_[k], b_[k]);
            }
        return solve(q);
    }

    GridSolution solve(std::vector<double> q) const {
        const int nx = opts_.nx, ny = opts_.ny;
        if (q.size() != a_.size())
            throw std::invalid_argument("initial guess has the wrong grid size");

        // pin the Dirichlet data
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (j > 0 && j < ny - 1 && i > 0 && i < nx - 1)
                    continue;
                const size_t k = index_(i, j);
                q[k] = opts_.boundary ? opts_.boundary(gx_(i), gy_(j))
                                      : balance_(a_[k], b_[k]);
            }

        GridSolution sol;
        sol.nx = nx;
        sol.ny = ny;
        const Domain& d = potential_.domain();
        sol.x_min = d.x_min;
        sol.x_max = d.x_max;
        sol.y_min = d.y_min;
        sol.y_max = d.y_max;
        sol.lambda = lambda_;
        sol.positivity_warning = warning_;

        const int n_int = (nx - 2) * (ny - 2);
        Eigen::VectorXd F(n_int);
        compute_residual_(q, F);
        double r = F.lpNorm<Eigen::Infinity>();
        sol.residual_history.push_back(r);

        int it = 0;
        while (r >= opts_.tol) {
            if (it >= opts_.max_iters) {
                std::ostringstream oss;
                oss << "Newton did not reach tol " << opts_.tol << " within "
                    << opts_.max_iters << " iterations (residual " << r << ")";
                throw SolveError(oss.str());
            }
            const Eigen::VectorXd delta = newton_step_(q, F);

            bool accepted = false;
            Eigen::VectorXd Ft(n_int);
            for (double step = 1.0; step >= 1.0 / 1024.0; step *= 0.5) {
                std::vector<double> trial = q;
                bool positive = true;
                for (int j = 1; j < ny - 1 && positive; ++j)
                    for (int i = 1; i < nx - 1; ++i) {
                        const size_t k = index_(i, j);
                        trial[k] += step * delta(interior_(i, j));
                        if (trial[k] <= 0.0) {
                            positive = false;
                            break;
                        }
                    }
                if (!positive)
                    continue;
                compute_residual_(trial, Ft);
                const double rt = Ft.lpNorm<Eigen::Infinity>();
                if (rt < (1.0 - 1e-4 * step) * r || rt < opts_.tol) {
                    q = std::move(trial);
                    F = Ft;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                std::ostringstream oss;
                oss << "Newton line search stalled at residual " << r << " after " << it
                    << " iterations";
                throw SolveError(oss.str());
            }
            ++it;
            sol.residual_history.push_back(r);
        }

        sol.newton_iterations = it;
        sol.q = std::move(q);
        return sol;
    }

  private:
    size_t index_(int i, int j) const {
        return static_cast<size_t>(j) * static_cast<size_t>(opts_.nx) + static_cast<size_t>(i);
    }
    int interior_(int i, int j) const { return (j - 1) * (opts_.nx - 2) + (i - 1); }
    double gx_(int i) const {
        const Domain& d = potential_.domain();
        return d.x_min + i * (d.x_max - d.x_min) / (opts_.nx - 1);
    }
    double gy_(int j) const {
        const Domain& d = potential_.domain();
        return d.y_min + j * (d.y_max - d.y_min) / (opts_.ny - 1);
    }

    static double balance_(double a, double b) {
        const double ratio = std::abs(b) > 1e-300 ? a / b : 0.0;
        return std::max(std::sqrt(std::max(ratio, 0.0)), 1e-6);
    }

    void build_coefficients_() {
        a_.resize(static_cast<size_t>(opts_.nx) * static_cast<size_t>(opts_.ny));
        b_.resize(a_.size());
        // On a tube the conformal normalizer carries an extra factor of two
        // (p = 2√w q instead of √w q), so the cubic coefficient gains its
        // square; this keeps grid solutions consistent with the lift.
        const double fscale = potential_.is_tubular() ? 4.0 : 1.0;
        for (int j = 0; j < opts_.ny; ++j)
            for (int i = 0; i < opts_.nx; ++i) {
                const CRPoint cr = build_cr_point(potential_, gx_(i), gy_(j));
                const size_t k = index_(i, j);
                a_[k] = 0.25 * cr.R;
                b_[k] = fscale * lambda_ / 3.0 * cr.w.value().real();
                if (!(a_[k] > 0.0 && b_[k] > 0.0))
                    warning_ = true;
            }
    }

    void compute_residual_(const std::vector<double>& v, Eigen::VectorXd& F) const {
        const int nx = opts_.nx, ny = opts_.ny;
        const Domain& d = potential_.domain();
        const double ihx2 = 1.0 / std::pow((d.x_max - d.x_min) / (nx - 1), 2);
        const double ihy2 = 1.0 / std::pow((d.y_max - d.y_min) / (ny - 1), 2);
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const size_t k = index_(i, j);
                const double lap = (v[k + 1] - 2.0 * v[k] + v[k - 1]) * ihx2 +
                                   (v[index_(i, j + 1)] - 2.0 * v[k] + v[index_(i, j - 1)]) * ihy2;
                F(interior_(i, j)) = 0.25 * lap + a_[k] * v[k] - b_[k] * v[k] * v[k] * v[k];
            }
    }

    Eigen::VectorXd newton_step_(const std::vector<double>& v, const Eigen::VectorXd& F) const {
        const int nx = opts_.nx, ny = opts_.ny;
        const Domain& d = potential_.domain();
        const double cx = 0.25 / std::pow((d.x_max - d.x_min) / (nx - 1), 2);
        const double cy = 0.25 / std::pow((d.y_max - d.y_min) / (ny - 1), 2);
        const int n_int = (nx - 2) * (ny - 2);

        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<size_t>(5 * n_int));
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const size_t k = index_(i, j);
                const int row = interior_(i, j);
                trips.emplace_back(row, row,
                                   -2.0 * (cx + cy) + a_[k] - 3.0 * b_[k] * v[k] * v[k]);
                if (i > 1)
                    trips.emplace_back(row, interior_(i - 1, j), cx);
                if (i < nx - 2)
                    trips.emplace_back(row, interior_(i + 1, j), cx);
                if (j > 1)
                    trips.emplace_back(row, interior_(i, j - 1), cy);
                if (j < ny - 2)
                    trips.emplace_back(row, interior_(i, j + 1), cy);
            }
        Eigen::SparseMatrix<double> J(n_int, n_int);
        J.setFromTriplets(trips.begin(), trips.end());

        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(J);
        if (ldlt.info() == Eigen::Success) {
            Eigen::VectorXd delta = ldlt.solve(-F);
            if (ldlt.info() == Eigen::Success && delta.allFinite())
                return delta;
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
        if (lu.info() != Eigen::Success)
            throw SolveError("Jacobian factorization failed");
        Eigen::VectorXd delta = lu.solve(-F);
        if (lu.info() != Eigen::Success || !delta.allFinite())
            throw SolveError("Jacobian solve produced no finite step");
        return delta;
    }

    Potential potential_;
    double lambda_ = 0.0;
    SolverOptions opts_;
    std::vector<double> a_;
    std::vector<double> b_;
    bool warning_ = false;
};

/// Mean of R/w over an interior sample grid when that ratio is constant to
/// one part in 1e8; empty when it varies or vanishes.
inline std::optional<double> uniform_curvature_ratio(const Potential& P) {
    const Domain& d = P.domain();
    const double mx = 0.05 * (d.x_max - d.x_min);
    const double my = 0.05 * (d.y_max - d.y_min);
    std::vector<double> ratios;
    for (int gj = 0; gj <= 8; ++gj)
        for (int gi = 0; gi <= 8; ++gi) {
            const double x = d.x_min + mx + (d.x_max - d.x_min - 2 * mx) * gi / 8.0;
            const double y = d.y_min + my + (d.y_max - d.y_min - 2 * my) * gj / 8.0;
            try {
                const CRPoint cr = build_cr_point(P, x, y);
                ratios.push_back(cr.R / cr.w.value().real());
            } catch (const DomainError&) {
            }
        }
    if (ratios.size() < 10)
        return std::nullopt;
    double mean = 0.0;
    for (double v : ratios)
        mean += v;
    mean /= static_cast<double>(ratios.size());
    for (double v : ratios)
        if (std::abs(v - mean) > 1e-8 * std::max(1.0, std::abs(mean)))
            return std::nullopt;
    if (std::abs(mean) < 1e-10)
        return std::nullopt;
    return mean;
}

/// Constant solution q = √(3 Λ₀ / (4Λ)) with Λ₀ = R/w, available exactly
/// when R/w is a nonzero constant of the same sign as Λ.
inline std::optional<double> constant_solution(const Potential& P, double lambda) {
    if (lambda == 0.0)
        return std::nullopt;
    const std::optional<double> ratio = uniform_curvature_ratio(P);
    if (!ratio || *ratio * lambda <= 0.0)
        return std::nullopt;
    const double scale = P.is_tubular() ? 0.5 : 1.0;
    return scale * std::sqrt(3.0 * *ratio / (4.0 * lambda));
}

/// Wraps a grid solution as a lift profile through the interpolating jets.
inline LiftProfile lift_from_grid(const Potential& P, GridSolution sol) {
    auto shared = std::make_shared<const GridSolution>(std::move(sol));
    return LiftProfile::from_q(
        P, [shared](double x, double y) { return shared->q_jet(x, y); }, shared->lambda);
}

} // namespace crlift
