#pragma once

#include "rklfd/payoff.hpp"
#include "rklfd/pde1d.hpp"
#include "rklfd/rkl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rklfd {

/// Direction of the projected substitution pass in the Brennan-Schwartz
/// solver. Ascending starts at x_0 (exercise region of a put), descending
/// starts at x_m (exercise region of a call).
enum class BsSweep { Ascending, Descending };

/// Picks the Brennan-Schwartz sweep for a vanilla payoff; other payoffs are
/// non-monotone and must fall back to PSOR.
inline BsSweep brennan_schwartz_sweep(const Payoff& p)
{
    switch (p.kind) {
    case PayoffKind::VanillaPut: return BsSweep::Ascending;
    case PayoffKind::VanillaCall: return BsSweep::Descending;
    default:
        throw std::invalid_argument(
            "brennan_schwartz_sweep: non-monotone payoff, use PSOR instead");
    }
}

/// Solves the tridiagonal system (lo, di, up) x = rhs by elimination.
inline std::vector<double> thomas_solve(const std::vector<double>& lo,
                                        const std::vector<double>& di,
                                        const std::vector<double>& up,
                                        const std::vector<double>& rhs)
{
    const std::size_t n = di.size();
    std::vector<double> dp = di, rp = rhs, x(n);
    for (std::size_t i = 1; i < n; ++i) {
        if (dp[i - 1] == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
        const double w = lo[i] / dp[i - 1];
        dp[i] -= w * up[i - 1];
        rp[i] -= w * rp[i - 1];
    }
    if (dp[n - 1] == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    x[n - 1] = rp[n - 1] / dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (rp[i] - up[i] * x[i + 1]) / dp[i];
    return x;
}

/// Brennan-Schwartz LCP solve: single elimination sweep plus a projected
/// substitution pass which traverses the exercise region first. Exact for
/// monotone obstacles (vanilla puts and calls).
inline std::vector<double> brennan_schwartz_solve(const std::vector<double>& lo,
                                                  const std::vector<double>& di,
                                                  const std::vector<double>& up,
                                                  const std::vector<double>& rhs,
                                                  const std::vector<double>& floor,
                                                  BsSweep sweep)
{
    const std::size_t n = di.size();
    std::vector<double> dp = di, rp = rhs, x(n);
    if (sweep == BsSweep::Ascending) {
        // clear the upper diagonal from the top, substitute upward
        for (std::size_t i = n - 1; i-- > 0;) {
            if (dp[i + 1] == 0.0) throw std::runtime_error("brennan_schwartz_solve: zero pivot");
            const double w = up[i] / dp[i + 1];
            dp[i] -= w * lo[i + 1];
            rp[i] -= w * rp[i + 1];
        }
        x[0] = std::max(rp[0] / dp[0], floor[0]);
        for (std::size_t i = 1; i < n; ++i)
            x[i] = std::max((rp[i] - lo[i] * x[i - 1]) / dp[i], floor[i]);
    } else {
        for (std::size_t i = 1; i < n; ++i) {
            if (dp[i - 1] == 0.0) throw std::runtime_error("brennan_schwartz_solve: zero pivot");
            const double w = lo[i] / dp[i - 1];
            dp[i] -= w * up[i - 1];
            rp[i] -= w * rp[i - 1];
        }
        x[n - 1] = std::max(rp[n - 1] / dp[n - 1], floor[n - 1]);
        for (std::size_t i = n - 1; i-- > 0;)
            x[i] = std::max((rp[i] - up[i] * x[i + 1]) / dp[i], floor[i]);
    }
    return x;
}

/// Projected successive over-relaxation settings.
struct PsorConfig {
    double omega = 1.3;
    double tol = 1e-10; // absolute, on the max componentwise update
    int max_iterations = 10000;
};

/// PSOR LCP solve; iterates until the largest componentwise update falls
/// below tol. Throws (with the final residual in the message) when the
/// iteration budget is exhausted.
inline std::vector<double> psor_solve(const std::vector<double>& lo,
                                      const std::vector<double>& di,
                                      const std::vector<double>& up,
                                      const std::vector<double>& rhs,
                                      const std::vector<double>& floor,
                                      const PsorConfig& cfg,
                                      const std::vector<double>& start)
{
    if (!(cfg.omega > 0.0 && cfg.omega < 2.0))
        throw std::invalid_argument("psor_solve: omega must lie in (0, 2)");
    const std::size_t n = di.size();
    std::vector<double> x = start;
    double delta = 0.0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double resid = rhs[i] - di[i] * x[i];
            if (i > 0) resid -= lo[i] * x[i - 1];
            if (i + 1 < n) resid -= up[i] * x[i + 1];
            const double xn = std::max(floor[i], x[i] + cfg.omega * resid / di[i]);
            delta = std::max(delta, std::fabs(xn - x[i]));
            x[i] = xn;
        }
        if (delta < cfg.tol) return x;
    }
    throw std::runtime_error("psor_solve: max iterations exceeded, last update " + std::to_string(delta));
}

enum class ImplicitScheme { CrankNicolson, BackwardEuler };
enum class LcpStrategy { None, BrennanSchwartz, Psor };

/// Implicit-side bands (I - theta k M).
inline void implicit_bands(const TridiagonalOperator& op, double k, double theta,
                           std::vector<double>& lo, std::vector<double>& di,
                           std::vector<double>& up)
{
    const std::size_t n = op.size();
    lo.resize(n); di.resize(n); up.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i] = -theta * k * op.a[i];
        di[i] = 1.0 - theta * k * op.b[i];
        up[i] = -theta * k * op.c[i];
    }
}

/// One implicit step of size k. Backward Euler solves (I - kM) f+ = f;
/// Crank-Nicolson solves (I - k/2 M) f+ = (I + k/2 M) f. The LCP strategy
/// handles the early-exercise constraint; None solves the linear system.
inline std::vector<double> implicit_step(ImplicitScheme scheme,
                                         const TridiagonalOperator& op,
                                         double k,
                                         const std::vector<double>& f,
                                         const std::vector<double>* floor,
                                         LcpStrategy strategy,
                                         BsSweep sweep = BsSweep::Ascending,
                                         const PsorConfig& psor = {})
{
    if (k == 0.0) return f;
    const double theta = (scheme == ImplicitScheme::CrankNicolson) ? 0.5 : 1.0;
    std::vector<double> lo, di, up;
    implicit_bands(op, k, theta, lo, di, up);
    std::vector<double> rhs;
    if (scheme == ImplicitScheme::CrankNicolson) {
        op.apply(f, rhs);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = f[i] + 0.5 * k * rhs[i];
    } else {
        rhs = f;
    }
    if (floor == nullptr || strategy == LcpStrategy::None)
        return thomas_solve(lo, di, up, rhs);
    if (strategy == LcpStrategy::BrennanSchwartz)
        return brennan_schwartz_solve(lo, di, up, rhs, *floor, sweep);
    return psor_solve(lo, di, up, rhs, *floor, psor, f);
}

/// Time-marching schemes exposed by the 1D pricers.
enum class Scheme1D { Rkl, CrankNicolson, Rannacher, BackwardEuler };

struct Pricing1DResult {
    std::vector<double> values; // at t_0, over the grid
    int stages = 0;             // RKL only
    double dt_explicit = 0.0;
};

/// Prices a 1D problem by marching the time axis backward from the payoff.
/// op_factory(t) assembles the operator for the step whose later (maturity
/// side) time label is t; constant-coefficient models reuse one assembly.
/// Rannacher replaces the two steps adjacent to maturity by four half-steps
/// of backward Euler.
inline Pricing1DResult run_scheme_1d(Scheme1D scheme,
                                     const std::function<TridiagonalOperator(double)>& op_factory,
                                     const TimeAxis& time,
                                     const std::vector<double>& terminal,
                                     const std::vector<double>* floor,
                                     LcpStrategy strategy,
                                     BsSweep sweep = BsSweep::Ascending,
                                     double rkl_eps = 0.0,
                                     const PsorConfig& psor = {},
                                     int stage_override = 0)
{
    Pricing1DResult res;
    std::vector<double> f = terminal;
    const std::size_t n = time.num_steps();

    if (scheme == Scheme1D::Rkl) {
        RklWorkspace ws;
        for (std::size_t j = n; j >= 1; --j) {
            const double k = time.step(j);
            const TridiagonalOperator op = op_factory(time.point(j));
            double dt;
            int s;
            try {
                dt = explicit_max_step(op);
                s = (stage_override > 0) ? stage_override : stages_for_step(k, dt, rkl_eps);
            } catch (const std::domain_error&) {
                dt = std::numeric_limits<double>::infinity();
                s = (stage_override > 0) ? stage_override : 3;
            }
            res.stages = s;
            res.dt_explicit = dt;
            const SchemeCoefficients c = scheme_coefficients(s, rkl_eps);
            auto apply = [&op](const std::vector<double>& in, std::vector<double>& out) {
                op.apply(in, out);
            };
            ObstacleSpec obs = floor ? ObstacleSpec::lower_bound(*floor) : ObstacleSpec::none();
            rkl_step(c, apply, k, f, obs, ws);
        }
        res.values = std::move(f);
        return res;
    }

    std::size_t j = n;
    if (scheme == Scheme1D::Rannacher) {
        const std::size_t smooth_steps = std::min<std::size_t>(2, n);
        for (std::size_t step = 0; step < smooth_steps; ++step, --j) {
            const double k = time.step(j);
            const TridiagonalOperator op = op_factory(time.point(j));
            f = implicit_step(ImplicitScheme::BackwardEuler, op, 0.5 * k, f, floor, strategy, sweep, psor);
            f = implicit_step(ImplicitScheme::BackwardEuler, op, 0.5 * k, f, floor, strategy, sweep, psor);
        }
    }
    const ImplicitScheme istep = (scheme == Scheme1D::BackwardEuler)
                                     ? ImplicitScheme::BackwardEuler
                                     : ImplicitScheme::CrankNicolson;
    for (; j >= 1; --j) {
        const double k = time.step(j);
        const TridiagonalOperator op = op_factory(time.point(j));
        f = implicit_step(istep, op, k, f, floor, strategy, sweep, psor);
    }
    res.values = std::move(f);
    return res;
}

} // namespace rklfd
