#pragma once

#include "rklfd/lcp.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace rklfd {

enum class UvmObjective { BestLong, WorstLong };

/// Uncertain-volatility model: sigma known only to lie in [sigma_min, sigma_max].
struct UvmModel {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double r = 0.0;
    double mu = 0.0; // = r in the reference problems
    UvmObjective objective = UvmObjective::WorstLong;

    void validate() const
    {
        if (!(sigma_min > 0.0 && sigma_min <= sigma_max))
            throw std::invalid_argument("UvmModel: requires 0 < sigma_min <= sigma_max");
    }
};

/// Pointwise optimal volatility from the sign of the discrete second
/// derivative: the best-long (sup) objective takes sigma_max where
/// D2 f >= 0, the worst-long objective takes sigma_min there. Ties follow
/// the sup branch. Boundary nodes carry no diffusion term; they get the
/// tie value for determinism.
inline std::vector<double> select_control(const std::vector<double>& f,
                                          const Grid1D& grid,
                                          const UvmModel& model)
{
    const std::vector<double> g = central_gamma(grid, f);
    std::vector<double> sig(f.size());
    const bool best = model.objective == UvmObjective::BestLong;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const bool convex = g[i] >= 0.0;
        sig[i] = (convex == best) ? model.sigma_max : model.sigma_min;
    }
    return sig;
}

/// Operator assembly with a per-node volatility control vector.
inline TridiagonalOperator assemble_uvm(const Grid1D& grid,
                                        const std::vector<double>& sigma,
                                        double mu, double r)
{
    const std::size_t m = grid.num_steps();
    TridiagonalOperator op;
    op.a.assign(m + 1, 0.0);
    op.b.assign(m + 1, 0.0);
    op.c.assign(m + 1, 0.0);
    op.bhat.assign(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        const double x = grid.node(i);
        detail::interior_row(x, grid.spacing(i), grid.spacing(i + 1), mu, r,
                             sigma[i] * sigma[i] * x * x,
                             op.a[i], op.b[i], op.c[i], op.bhat[i]);
    }
    op.bhat[0] = r + mu * grid.node(0) / grid.spacing(1);
    op.b[0] = -op.bhat[0];
    op.c[0] = mu * grid.node(0) / grid.spacing(1);
    op.a[m] = -mu * grid.node(m) / grid.spacing(m);
    op.bhat[m] = r - mu * grid.node(m) / grid.spacing(m);
    op.b[m] = -op.bhat[m];
    return op;
}

struct UvmStepReport {
    int iterations = 0;
    bool converged = true;
};

/// One RKL time-step of the HJB problem. Controls are frozen over all s
/// stages of an iteration and refreshed from the result; the step is redone
/// from the same initial state until the control vector is unchanged (at
/// most max_iterations passes; the paper reports two suffice).
inline UvmStepReport uvm_rkl_step(const SchemeCoefficients& coeffs,
                                  const Grid1D& grid,
                                  const UvmModel& model,
                                  double k,
                                  std::vector<double>& f,
                                  RklWorkspace& ws,
                                  int max_iterations = 5)
{
    UvmStepReport rep;
    std::vector<double> sigma = select_control(f, grid, model);
    std::vector<double> fnew;
    for (int it = 0; it < max_iterations; ++it) {
        rep.iterations = it + 1;
        const TridiagonalOperator op = assemble_uvm(grid, sigma, model.mu, model.r);
        fnew = f;
        auto apply = [&op](const std::vector<double>& in, std::vector<double>& out) {
            op.apply(in, out);
        };
        rkl_step(coeffs, apply, k, fnew, ObstacleSpec::none(), ws);
        std::vector<double> sigma_new = select_control(fnew, grid, model);
        if (sigma_new == sigma) { f = std::move(fnew); return rep; }
        sigma = std::move(sigma_new);
    }
    rep.converged = false;
    f = std::move(fnew);
    return rep;
}

/// One backward-Euler step solved by policy iteration: controls from the
/// current iterate, implicit solve, repeat until the controls are fixed.
inline UvmStepReport uvm_euler_step(const Grid1D& grid,
                                    const UvmModel& model,
                                    double k,
                                    std::vector<double>& f,
                                    int max_iterations = 20)
{
    UvmStepReport rep;
    std::vector<double> sigma = select_control(f, grid, model);
    std::vector<double> lo, di, up, fnew;
    for (int it = 0; it < max_iterations; ++it) {
        rep.iterations = it + 1;
        const TridiagonalOperator op = assemble_uvm(grid, sigma, model.mu, model.r);
        implicit_bands(op, k, 1.0, lo, di, up);
        fnew = thomas_solve(lo, di, up, f);
        std::vector<double> sigma_new = select_control(fnew, grid, model);
        if (sigma_new == sigma) { f = std::move(fnew); return rep; }
        sigma = std::move(sigma_new);
    }
    rep.converged = false;
    f = std::move(fnew);
    return rep;
}

struct UvmRunResult {
    std::vector<double> values;
    int stages = 0;          // RKL only
    int max_iterations = 0;  // worst outer-iteration count over the run
    bool converged = true;
};

/// Full backward march of the UVM problem under RKL. The stage count comes
/// from the sigma_max operator (worst-case spectral bound) once per run.
inline UvmRunResult uvm_rkl_run(const Grid1D& grid, const UvmModel& model,
                                const TimeAxis& time, const std::vector<double>& terminal,
                                double eps)
{
    model.validate();
    UvmRunResult out;
    const std::vector<double> sig_max(grid.num_nodes(), model.sigma_max);
    const TridiagonalOperator bound_op = assemble_uvm(grid, sig_max, model.mu, model.r);
    const double dt = explicit_max_step(bound_op);

    std::vector<double> f = terminal;
    RklWorkspace ws;
    for (std::size_t j = time.num_steps(); j >= 1; --j) {
        const double k = time.step(j);
        const int s = stages_for_step(k, dt, eps);
        out.stages = s;
        const SchemeCoefficients c = scheme_coefficients(s, eps);
        const UvmStepReport rep = uvm_rkl_step(c, grid, model, k, f, ws);
        out.max_iterations = std::max(out.max_iterations, rep.iterations);
        out.converged = out.converged && rep.converged;
    }
    out.values = std::move(f);
    return out;
}

inline UvmRunResult uvm_euler_run(const Grid1D& grid, const UvmModel& model,
                                  const TimeAxis& time, const std::vector<double>& terminal)
{
    model.validate();
    UvmRunResult out;
    std::vector<double> f = terminal;
    for (std::size_t j = time.num_steps(); j >= 1; --j) {
        const UvmStepReport rep = uvm_euler_step(grid, model, time.step(j), f);
        out.max_iterations = std::max(out.max_iterations, rep.iterations);
        out.converged = out.converged && rep.converged;
    }
    out.values = std::move(f);
    return out;
}

} // namespace rklfd
