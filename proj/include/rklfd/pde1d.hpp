#pragma once

#include "rklfd/grid.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rklfd {

/// Model coefficient: a constant or a tabulated function of (x, t).
struct Coefficient {
    double constant = 0.0;
    std::function<double(double, double)> fn; // used when set

    Coefficient() = default;
    Coefficient(double c) : constant(c) {}
    Coefficient(std::function<double(double, double)> f) : fn(std::move(f)) {}

    double operator()(double x, double t) const { return fn ? fn(x, t) : constant; }
    bool is_constant() const { return !fn; }
};

/// Black-Scholes / local-volatility dynamics: sigma(x,t), drift mu(x,t),
/// rate r(x,t).
struct BSModel {
    Coefficient sigma;
    Coefficient mu;
    Coefficient r;
};

/// Tridiagonal spatial operator M (lower a, diagonal b, upper c), stored
/// without the time-step factor so one assembly serves any step size.
/// bhat keeps the reaction-diffusion diagonal magnitude -b used by the
/// explicit step bound.
struct TridiagonalOperator {
    std::vector<double> a, b, c, bhat;

    std::size_t size() const { return b.size(); }

    /// out = M in
    void apply(const std::vector<double>& in, std::vector<double>& out) const
    {
        const std::size_t n = b.size();
        out.resize(n);
        out[0] = b[0] * in[0] + c[0] * in[1];
        for (std::size_t i = 1; i + 1 < n; ++i)
            out[i] = a[i] * in[i - 1] + b[i] * in[i] + c[i] * in[i + 1];
        out[n - 1] = a[n - 1] * in[n - 2] + b[n - 1] * in[n - 1];
    }

    std::vector<double> apply(const std::vector<double>& in) const
    {
        std::vector<double> out;
        apply(in, out);
        return out;
    }
};

namespace detail {

/// Interior row of the tridiagonal operator at node x with spacings
/// (hi, hip) = (x_i - x_{i-1}, x_{i+1} - x_i) for local diffusion
/// coefficient s2x2 = sigma^2 x^2.
inline void interior_row(double x, double hi, double hip, double mu, double r,
                         double s2x2, double& a, double& b, double& c, double& bhat)
{
    a = -(mu * hip * x - s2x2) / (hi * (hip + hi));
    c = (mu * hi * x + s2x2) / (hip * (hip + hi));
    bhat = r + (mu * x * (hi - hip) + s2x2) / (hi * hip);
    b = -bhat;
}

} // namespace detail

/// Assembles the Black-Scholes operator on the grid at time t: second-order
/// central differences inside, first-order one-sided rows with the zero-gamma
/// assumption at both ends.
inline TridiagonalOperator assemble_bs(const BSModel& model, const Grid1D& grid, double t = 0.0)
{
    const std::size_t m = grid.num_steps();
    TridiagonalOperator op;
    op.a.assign(m + 1, 0.0);
    op.b.assign(m + 1, 0.0);
    op.c.assign(m + 1, 0.0);
    op.bhat.assign(m + 1, 0.0);

    for (std::size_t i = 1; i < m; ++i) {
        const double x = grid.node(i);
        const double sig = model.sigma(x, t);
        const double mu = model.mu(x, t);
        const double r = model.r(x, t);
        detail::interior_row(x, grid.spacing(i), grid.spacing(i + 1), mu, r,
                             sig * sig * x * x, op.a[i], op.b[i], op.c[i], op.bhat[i]);
    }
    {
        const double x0 = grid.node(0);
        const double mu = model.mu(x0, t);
        const double r = model.r(x0, t);
        op.bhat[0] = r + mu * x0 / grid.spacing(1);
        op.b[0] = -op.bhat[0];
        op.c[0] = mu * x0 / grid.spacing(1);
    }
    {
        const double xm = grid.node(m);
        const double mu = model.mu(xm, t);
        const double r = model.r(xm, t);
        op.a[m] = -mu * xm / grid.spacing(m);
        op.bhat[m] = r - mu * xm / grid.spacing(m);
        op.b[m] = -op.bhat[m];
    }
    return op;
}

/// Maximum explicit-Euler step 1/max(bhat). Throws when the operator is
/// degenerate (max bhat <= 0) and the step is unbounded.
inline double explicit_max_step(const TridiagonalOperator& op)
{
    double bmax = -std::numeric_limits<double>::infinity();
    for (double v : op.bhat) bmax = std::max(bmax, v);
    if (!(bmax > 0.0))
        throw std::domain_error("explicit_max_step: unbounded (max bhat <= 0); cap the step externally");
    return 1.0 / bmax;
}

/// Central first derivative (three-point, nonuniform); boundary entries use
/// one-sided differences.
inline std::vector<double> central_delta(const Grid1D& grid, const std::vector<double>& f)
{
    const std::size_t m = grid.num_steps();
    std::vector<double> d(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const double hi = grid.spacing(i), hip = grid.spacing(i + 1);
        d[i] = (hi * hi * f[i + 1] + (hip * hip - hi * hi) * f[i] - hip * hip * f[i - 1])
             / (hi * hip * (hip + hi));
    }
    d[0] = (f[1] - f[0]) / grid.spacing(1);
    d[m] = (f[m] - f[m - 1]) / grid.spacing(m);
    return d;
}

/// Central second derivative (three-point, nonuniform); boundary entries are
/// zero, consistent with the zero-gamma boundary rows.
inline std::vector<double> central_gamma(const Grid1D& grid, const std::vector<double>& f)
{
    const std::size_t m = grid.num_steps();
    std::vector<double> g(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const double hi = grid.spacing(i), hip = grid.spacing(i + 1);
        g[i] = 2.0 * (hi * f[i + 1] - (hip + hi) * f[i] + hip * f[i - 1])
             / (hi * hip * (hip + hi));
    }
    return g;
}

} // namespace rklfd
