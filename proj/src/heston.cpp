#include "rklfd/heston.hpp"

#include "rklfd/ncchi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rklfd {

DomainBounds domain_bounds(const HestonModel& model, double strike, double maturity,
                           double eps_v, double num_sd)
{
    model.validate();
    if (!(eps_v > 0.0 && eps_v < 0.5))
        throw std::invalid_argument("domain_bounds: eps_v must lie in (0, 0.5)");
    DomainBounds b;
    b.x_max = strike * std::exp(num_sd * std::sqrt(model.theta * maturity));
    const double ekt = std::exp(-model.kappa * maturity);
    const double d_chi = 4.0 * model.kappa * model.theta / (model.sigma * model.sigma);
    const double n_chi = 4.0 * model.kappa * ekt / (model.sigma * model.sigma * (1.0 - ekt));
    const double lam = model.v0 * n_chi;
    b.v_max = ncchi2_quantile(1.0 - eps_v, d_chi, lam) * ekt / n_chi;
    return b;
}

namespace {

// diffusion coefficient beta^x v x^2 with the exponential-fitting limit at
// v = 0 (upwind viscosity h |mu| x)
double fitted_diff_x(double mu, double v, double x, double h, double& beta, double& pe)
{
    const double plain = v * x * x;
    if (mu == 0.0 || x == 0.0) {
        pe = 0.0;
        beta = 1.0;
        return plain;
    }
    if (v == 0.0) {
        pe = std::numeric_limits<double>::infinity();
        beta = std::numeric_limits<double>::infinity();
        return std::fabs(h * mu * x);
    }
    pe = 2.0 * h * mu / (v * x);
    if (std::fabs(pe) >= 2.0) {
        beta = pe / (2.0 * std::tanh(0.5 * pe));
        return h * mu * x / std::tanh(0.5 * pe);
    }
    beta = 1.0;
    return plain;
}

// diffusion coefficient beta^v sigma^2 v in the variance direction
double fitted_diff_v(double kappa, double theta, double sigma, double v, double w,
                     double& beta, double& pe)
{
    const double plain = sigma * sigma * v;
    const double drift = kappa * (theta - v);
    if (drift == 0.0) {
        pe = 0.0;
        beta = 1.0;
        return plain;
    }
    if (v == 0.0) {
        pe = std::numeric_limits<double>::infinity();
        beta = std::numeric_limits<double>::infinity();
        return std::fabs(w * drift);
    }
    pe = 2.0 * w * drift / (sigma * sigma * v);
    if (std::fabs(pe) >= 2.0) {
        beta = pe / (2.0 * std::tanh(0.5 * pe));
        return w * drift / std::tanh(0.5 * pe);
    }
    beta = 1.0;
    return plain;
}

} // namespace

StencilOperator2D::StencilOperator2D(const HestonModel& model, const Grid2D& grid)
{
    model.validate();
    const std::size_t m = grid.m(), n = grid.n();
    nx_ = m + 1;
    nv_ = n + 1;
    const std::size_t sz = nx_ * nv_;
    a_.assign(sz, 0.0);
    b_.assign(sz, 0.0);
    c_.assign(sz, 0.0);
    d_.assign(sz, 0.0);
    e_.assign(sz, 0.0);
    w_.assign(sz, 0.0);
    beta_x_.assign(sz, 1.0);
    beta_v_.assign(sz, 1.0);
    pe_x_.assign(sz, 0.0);
    pe_v_.assign(sz, 0.0);

    const double mu = model.r - model.q;
    const double r = model.r;
    const auto& x = grid.x;
    const auto& v = grid.v;
    auto hx = [&](std::size_t i) { return x[i] - x[i - 1]; };
    auto wv = [&](std::size_t j) { return v[j] - v[j - 1]; };

    for (std::size_t j = 0; j <= n; ++j) {
        for (std::size_t i = 1; i < m; ++i) {
            const std::size_t idx = j * nx_ + i;
            const double hi = hx(i), hip = hx(i + 1);
            const double dx = fitted_diff_x(mu, v[j], x[i], hi, beta_x_[idx], pe_x_[idx]);
            a_[idx] = -(mu * hip * x[i] - dx) / (hi * (hip + hi));
            c_[idx] = (mu * hi * x[i] + dx) / (hip * (hip + hi));
            double bhat = r + (mu * x[i] * (hi - hip) + dx) / (hi * hip);
            if (j == 0) {
                const double drift = model.kappa * (model.theta - v[0]);
                bhat += drift / wv(1);
                e_[idx] = drift / wv(1);
            } else if (j == n) {
                const double drift = model.kappa * (model.theta - v[n]);
                bhat -= drift / wv(n);
                d_[idx] = -drift / wv(n);
            } else {
                const double wj = wv(j), wjp = wv(j + 1);
                const double dv = fitted_diff_v(model.kappa, model.theta, model.sigma, v[j],
                                                wj, beta_v_[idx], pe_v_[idx]);
                const double drift = model.kappa * (model.theta - v[j]);
                d_[idx] = -(drift * wjp - dv) / (wj * (wjp + wj));
                e_[idx] = (drift * wj + dv) / (wjp * (wjp + wj));
                bhat += (drift * (wj - wjp) + dv) / (wj * wjp);
                w_[idx] = model.rho * model.sigma * x[i] * v[j] / ((hi + hip) * (wj + wjp));
            }
            b_[idx] = -bhat;
        }
        // x boundaries: value linear in x, no variance flow (Eq. 18 rows)
        {
            const std::size_t idx = j * nx_;
            const double bhat0 = r + mu * x[0] / hx(1);
            b_[idx] = -bhat0;
            c_[idx] = mu * x[0] / hx(1);
        }
        {
            const std::size_t idx = j * nx_ + m;
            a_[idx] = -mu * x[m] / hx(m);
            const double bhatm = r - mu * x[m] / hx(m);
            b_[idx] = -bhatm;
        }
    }
}

double StencilOperator2D::bhat_max() const
{
    double bmax = -std::numeric_limits<double>::infinity();
    for (double bi : b_) bmax = std::max(bmax, -bi);
    return bmax;
}

void StencilOperator2D::apply_serial(const std::vector<double>& in, std::vector<double>& out) const
{
    const std::size_t nx = nx_, nv = nv_;
    out.resize(nx * nv);
    for (std::size_t j = 0; j < nv; ++j) {
        const std::size_t row = j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t idx = row + i;
            double acc = b_[idx] * in[idx];
            if (i > 0) acc += a_[idx] * in[idx - 1];
            if (i + 1 < nx) acc += c_[idx] * in[idx + 1];
            if (j > 0) acc += d_[idx] * in[idx - nx];
            if (j + 1 < nv) acc += e_[idx] * in[idx + nx];
            if (w_[idx] != 0.0)
                acc += w_[idx] * (in[idx + nx + 1] - in[idx - nx + 1]
                                  - in[idx + nx - 1] + in[idx - nx - 1]);
            out[idx] = acc;
        }
    }
}

void StencilOperator2D::apply(const std::vector<double>& in, std::vector<double>& out) const
{
    const std::size_t nx = nx_, nv = nv_;
    out.resize(nx * nv);
    const double* f = in.data();
    double* o = out.data();
#pragma omp parallel for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(nv); ++jj) {
        const std::size_t j = static_cast<std::size_t>(jj);
        const std::size_t row = j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t idx = row + i;
            double acc = b_[idx] * f[idx];
            if (i > 0) acc += a_[idx] * f[idx - 1];
            if (i + 1 < nx) acc += c_[idx] * f[idx + 1];
            if (j > 0) acc += d_[idx] * f[idx - nx];
            if (j + 1 < nv) acc += e_[idx] * f[idx + nx];
            if (w_[idx] != 0.0)
                acc += w_[idx] * (f[idx + nx + 1] - f[idx - nx + 1]
                                  - f[idx + nx - 1] + f[idx - nx - 1]);
            o[idx] = acc;
        }
    }
}

double bilinear(const Grid2D& grid, const std::vector<double>& surface, double x, double v)
{
    const auto& xs = grid.x;
    const auto& vs = grid.v;
    const std::size_t nx = xs.size();
    auto bracket = [](const std::vector<double>& u, double val) {
        std::size_t lo = 0, hi = u.size() - 1;
        if (val <= u.front()) return std::size_t{0};
        if (val >= u.back()) return u.size() - 2;
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (u[mid] <= val) lo = mid; else hi = mid;
        }
        return lo;
    };
    const std::size_t i = bracket(xs, x);
    const std::size_t j = bracket(vs, v);
    const double tx = std::clamp((x - xs[i]) / (xs[i + 1] - xs[i]), 0.0, 1.0);
    const double tv = std::clamp((v - vs[j]) / (vs[j + 1] - vs[j]), 0.0, 1.0);
    const double f00 = surface[j * nx + i];
    const double f10 = surface[j * nx + i + 1];
    const double f01 = surface[(j + 1) * nx + i];
    const double f11 = surface[(j + 1) * nx + i + 1];
    return (1.0 - tx) * (1.0 - tv) * f00 + tx * (1.0 - tv) * f10
         + (1.0 - tx) * tv * f01 + tx * tv * f11;
}

HestonPriceResult heston_rkl_price(const HestonModel& model, const Payoff& payoff,
                                   bool american, const Grid2D& grid, int time_steps,
                                   double maturity, const std::vector<double>& spots,
                                   bool smooth_payoff, double eps, int stage_override)
{
    if (time_steps < 1) throw std::invalid_argument("heston_rkl_price: need at least one step");
    HestonPriceResult res;
    res.grid = grid;
    const std::size_t nx = grid.x.size(), nv = grid.v.size();

    const StencilOperator2D op(model, grid);
    res.dt_explicit = 1.0 / op.bhat_max();
    const double k = maturity / time_steps;
    res.stages = (stage_override > 0) ? stage_override : stages_for_step(k, res.dt_explicit, eps);
    const SchemeCoefficients coeffs = scheme_coefficients(res.stages, eps);

    const Grid1D gx(grid.x);
    const std::vector<double> pay_col =
        smooth_payoff ? kreiss_smooth(payoff, gx) : payoff_values(payoff, gx);
    std::vector<double> f(nx * nv);
    for (std::size_t j = 0; j < nv; ++j)
        std::copy(pay_col.begin(), pay_col.end(), f.begin() + j * nx);

    ObstacleSpec obstacle = ObstacleSpec::none();
    if (american) {
        std::vector<double> floor(nx * nv);
        const std::vector<double> raw = payoff_values(payoff, gx);
        for (std::size_t j = 0; j < nv; ++j)
            std::copy(raw.begin(), raw.end(), floor.begin() + j * nx);
        // keep the smoothed start above the true payoff
        for (std::size_t idx = 0; idx < f.size(); ++idx) f[idx] = std::max(f[idx], floor[idx]);
        obstacle = ObstacleSpec::lower_bound(std::move(floor));
    }

    RklWorkspace ws;
    auto apply = [&op](const std::vector<double>& in, std::vector<double>& out) {
        op.apply(in, out);
    };
    for (int step = 0; step < time_steps; ++step)
        rkl_step(coeffs, apply, k, f, obstacle, ws);

    res.spot_prices.reserve(spots.size());
    for (double s : spots) res.spot_prices.push_back(bilinear(grid, f, s, model.v0));
    res.surface = std::move(f);
    return res;
}

} // namespace rklfd
