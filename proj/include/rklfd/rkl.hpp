#pragma once

#include "rklfd/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rklfd {

/// Per-stage constants of an s-stage super-time-stepping scheme
/// (Runge-Kutta-Legendre or the Chebyshev analogue), with optional shift
/// w0 = 1 + eps/s^2.
///
/// Index convention follows the recursion: lam/lam_tilde/nu/gam_tilde are
/// addressed by stage eta in [2, s], lam_tilde[1] drives the first stage.
/// b[m] is built from the degree-(m+1) polynomial; b[0] = b[1].
struct SchemeCoefficients {
    PolyFamily family = PolyFamily::Legendre;
    int stages = 0;
    double eps = 0.0;
    double w0 = 1.0;
    double w1 = 0.0;
    std::vector<double> a;         // a[m], m = 0..s-1
    std::vector<double> b;         // b[m], m = 0..s-1
    std::vector<double> lam;       // lam[eta]
    std::vector<double> lam_tilde; // lam_tilde[eta]
    std::vector<double> nu;        // nu[eta]
    std::vector<double> gam_tilde; // gam_tilde[eta]
};

/// Builds all per-stage constants for an s-stage scheme with shift eps.
/// Rejects s < 2 (the two-term recursion needs at least two stages).
inline SchemeCoefficients scheme_coefficients(int s, double eps,
                                              PolyFamily family = PolyFamily::Legendre)
{
    if (s < 2) throw std::invalid_argument("scheme_coefficients: stages must be >= 2");
    if (eps < 0.0) throw std::invalid_argument("scheme_coefficients: shift must be >= 0");

    SchemeCoefficients c;
    c.family = family;
    c.stages = s;
    c.eps = eps;
    c.w0 = 1.0 + eps / (static_cast<double>(s) * s);
    const PolyEval top = poly_eval(family, s, c.w0);
    c.w1 = top.d1 / top.d2;

    c.a.assign(s, 0.0);
    c.b.assign(s, 0.0);
    std::vector<double> pval(s, 0.0);
    for (int m = 1; m < s; ++m) {
        const PolyEval pe = poly_eval(family, m + 1, c.w0);
        c.b[m] = pe.d2 / (pe.d1 * pe.d1);
        pval[m] = pe.value;
    }
    c.b[0] = c.b[1];
    pval[0] = c.w0; // P_1(w0)
    for (int m = 0; m < s; ++m) c.a[m] = 1.0 - c.b[m] * pval[m];

    c.lam.assign(s + 1, 0.0);
    c.lam_tilde.assign(s + 1, 0.0);
    c.nu.assign(s + 1, 0.0);
    c.gam_tilde.assign(s + 1, 0.0);
    c.lam_tilde[1] = c.b[0] * c.w1;
    for (int eta = 2; eta <= s; ++eta) {
        double A, B;
        if (family == PolyFamily::Legendre) {
            A = (2.0 * eta - 1.0) / eta;
            B = (eta - 1.0) / eta;
        } else {
            A = 2.0;
            B = 1.0;
        }
        const double ratio = c.b[eta - 1] / c.b[eta - 2];
        c.lam[eta] = A * ratio * c.w0;
        c.lam_tilde[eta] = A * ratio * c.w1;
        const double bm3 = (eta >= 3) ? c.b[eta - 3] : c.b[0];
        c.nu[eta] = -B * c.b[eta - 1] / bm3;
        c.gam_tilde[eta] = -c.a[eta - 2] * c.lam_tilde[eta];
    }
    return c;
}

/// Stability-limit factor (1 + w0) / (2 w1) of the s-stage scheme.
inline double step_gain(int s, double eps, PolyFamily family = PolyFamily::Legendre)
{
    const double w0 = 1.0 + eps / (static_cast<double>(s) * s);
    const PolyEval pe = poly_eval(family, s, w0);
    return (1.0 + w0) * pe.d2 / (2.0 * pe.d1);
}

/// Smallest odd stage count such that a step of size k is stable given the
/// explicit-Euler limit dt_explicit. The stability condition is applied with
/// a 5% safety margin, k <= 0.95 (1+w0)/(2 w1) dt_explicit, then rounded up
/// to the first odd integer; this reproduces the reference stage counts
/// (47 stages at 20 steps and 9 at 640 on the 500-step American put grid).
inline int stages_for_step(double k, double dt_explicit, double eps = 0.0,
                           PolyFamily family = PolyFamily::Legendre)
{
    if (!(k > 0.0)) throw std::invalid_argument("stages_for_step: k must be > 0");
    if (!(dt_explicit > 0.0)) throw std::invalid_argument("stages_for_step: dt_explicit must be > 0");
    const double target = k / (0.95 * dt_explicit);
    int s = 2;
    while (step_gain(s, eps, family) < target) {
        ++s;
        if (s > 100000) throw std::runtime_error("stages_for_step: stage count diverged");
    }
    return (s % 2 == 1) ? s : s + 1;
}

/// Lower-bound constraint applied at every stage of a constrained step.
struct ObstacleSpec {
    bool constrained = false;
    std::vector<double> floor; // payoff values at the grid nodes

    static ObstacleSpec none() { return {}; }
    static ObstacleSpec lower_bound(std::vector<double> f)
    {
        ObstacleSpec o;
        o.constrained = true;
        o.floor = std::move(f);
        return o;
    }
};

/// Scratch buffers for rkl_step, reusable across time-steps.
struct RklWorkspace {
    std::vector<double> mf0, mf, f1, f2, fnew;
};

/// One super-time-step of size k over a fixed linear operator.
///
/// apply_op must compute out = M in, where M excludes the time-step factor;
/// the k lam_tilde scaling happens here. Under an obstacle every stage output
/// is clipped to max(floor, .) componentwise, and the gam_tilde term keeps
/// using the cached raw M f^0 product (never reconstructed from the projected
/// first stage).
inline void rkl_step(const SchemeCoefficients& c,
                     const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_op,
                     double k,
                     std::vector<double>& f,
                     const ObstacleSpec& obstacle,
                     RklWorkspace& ws)
{
    const std::size_t n = f.size();
    if (obstacle.constrained && obstacle.floor.size() != n)
        throw std::invalid_argument("rkl_step: obstacle size does not match state size");

    const std::vector<double>& f0 = f;
    ws.mf0.resize(n);
    ws.mf.resize(n);
    ws.f1.resize(n);
    ws.f2.resize(n);
    ws.fnew.resize(n);

    apply_op(f0, ws.mf0);

    // stage 1
    const double lt1 = c.lam_tilde[1] * k;
    for (std::size_t i = 0; i < n; ++i) ws.f1[i] = f0[i] + lt1 * ws.mf0[i];
    if (obstacle.constrained)
        for (std::size_t i = 0; i < n; ++i) ws.f1[i] = std::max(obstacle.floor[i], ws.f1[i]);

    ws.f2 = f0; // f^{eta-2}
    for (int eta = 2; eta <= c.stages; ++eta) {
        apply_op(ws.f1, ws.mf);
        const double lam = c.lam[eta];
        const double nu = c.nu[eta];
        const double mu0 = 1.0 - lam - nu;
        const double lt = c.lam_tilde[eta] * k;
        const double gt = c.gam_tilde[eta] * k;
        for (std::size_t i = 0; i < n; ++i)
            ws.fnew[i] = lam * ws.f1[i] + nu * ws.f2[i] + mu0 * f0[i]
                       + lt * ws.mf[i] + gt * ws.mf0[i];
        if (obstacle.constrained)
            for (std::size_t i = 0; i < n; ++i)
                ws.fnew[i] = std::max(obstacle.floor[i], ws.fnew[i]);
        std::swap(ws.f2, ws.f1);
        std::swap(ws.f1, ws.fnew);
    }
    f = ws.f1;
}

inline std::vector<double> rkl_step(const SchemeCoefficients& c,
                                    const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_op,
                                    double k,
                                    const std::vector<double>& f0,
                                    const ObstacleSpec& obstacle = ObstacleSpec::none())
{
    RklWorkspace ws;
    std::vector<double> f = f0;
    rkl_step(c, apply_op, k, f, obstacle, ws);
    return f;
}

/// Runs the s-stage recursion on the scalar test problem u' = lambda u with
/// z = k lambda. Templated so the stability scan can feed complex z through
/// exactly the arithmetic the vector stepper performs.
template <typename Scalar>
Scalar scalar_amplification(const SchemeCoefficients& c, Scalar z)
{
    Scalar f0{1.0};
    Scalar mf0 = z * f0;
    Scalar fm1 = f0 + c.lam_tilde[1] * mf0;
    Scalar fm2 = f0;
    for (int eta = 2; eta <= c.stages; ++eta) {
        Scalar fnew = c.lam[eta] * fm1 + c.nu[eta] * fm2
                    + (1.0 - c.lam[eta] - c.nu[eta]) * f0
                    + c.lam_tilde[eta] * (z * fm1) + c.gam_tilde[eta] * mf0;
        fm2 = fm1;
        fm1 = fnew;
    }
    return fm1;
}

} // namespace rklfd
