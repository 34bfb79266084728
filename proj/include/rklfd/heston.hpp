#pragma once

#include "rklfd/payoff.hpp"
#include "rklfd/rkl.hpp"

#include <stdexcept>
#include <vector>

namespace rklfd {

/// Heston dynamics parameters.
struct HestonModel {
    double kappa = 0.0;  // mean-reversion speed
    double theta = 0.0;  // long-run variance
    double sigma = 0.0;  // vol of vol
    double rho = 0.0;    // correlation
    double r = 0.0;      // rate
    double q = 0.0;      // dividend yield
    double v0 = 0.0;     // initial variance

    void validate() const
    {
        if (!(kappa > 0.0 && theta > 0.0 && sigma > 0.0))
            throw std::invalid_argument("HestonModel: kappa, theta, sigma must be positive");
        if (std::fabs(rho) > 1.0)
            throw std::invalid_argument("HestonModel: |rho| must be <= 1");
        if (v0 < 0.0) throw std::invalid_argument("HestonModel: v0 must be >= 0");
    }
};

/// Tensor-product mesh: asset nodes x_0..x_m, variance nodes v_0..v_n
/// (v_0 = 0 allowed).
struct Grid2D {
    std::vector<double> x;
    std::vector<double> v;

    static Grid2D uniform(double x_max, int m, double v_max, int n, double x_min = 0.0,
                          double v_min = 0.0)
    {
        if (m < 2 || n < 2) throw std::invalid_argument("Grid2D::uniform: need at least 2 steps per axis");
        Grid2D g;
        g.x.resize(m + 1);
        g.v.resize(n + 1);
        for (int i = 0; i <= m; ++i) g.x[i] = x_min + (x_max - x_min) * static_cast<double>(i) / m;
        for (int j = 0; j <= n; ++j) g.v[j] = v_min + (v_max - v_min) * static_cast<double>(j) / n;
        g.x.back() = x_max;
        g.v.back() = v_max;
        return g;
    }

    std::size_t m() const { return x.size() - 1; }
    std::size_t n() const { return v.size() - 1; }
    std::size_t num_nodes() const { return x.size() * v.size(); }
};

/// Truncated computational domain per the variance-process distribution:
/// x_max covers num_sd standard deviations in log space, v_max the
/// (1 - eps_v) quantile of V(T) | v0 via the noncentral chi-square law.
struct DomainBounds {
    double x_max = 0.0;
    double v_max = 0.0;
};
DomainBounds domain_bounds(const HestonModel& model, double strike, double maturity,
                           double eps_v = 1e-4, double num_sd = 4.0);

/// Nine-point stencil operator for the Heston PDE, unscaled by the time
/// step. Layout is variance-major: node (i, j) lives at index j*(m+1)+i.
/// Exponential fitting inflates the diffusion wherever the cell Peclet
/// number reaches 2; beta/peclet rasters are kept for diagnostics.
class StencilOperator2D {
public:
    StencilOperator2D(const HestonModel& model, const Grid2D& grid);

    std::size_t rows() const { return nv_; }
    std::size_t cols() const { return nx_; }
    std::size_t size() const { return nx_ * nv_; }

    double bhat_max() const;

    /// out = M in (serial reference kernel).
    void apply_serial(const std::vector<double>& in, std::vector<double>& out) const;
    /// out = M in, parallel over variance rows; bitwise identical to the
    /// serial kernel for any thread count.
    void apply(const std::vector<double>& in, std::vector<double>& out) const;

    // band accessors (row-major over (j, i))
    const std::vector<double>& band_a() const { return a_; }
    const std::vector<double>& band_b() const { return b_; }
    const std::vector<double>& band_c() const { return c_; }
    const std::vector<double>& band_d() const { return d_; }
    const std::vector<double>& band_e() const { return e_; }
    const std::vector<double>& band_w() const { return w_; }
    const std::vector<double>& beta_x() const { return beta_x_; }
    const std::vector<double>& beta_v() const { return beta_v_; }
    const std::vector<double>& peclet_x() const { return pe_x_; }
    const std::vector<double>& peclet_v() const { return pe_v_; }

private:
    std::size_t nx_ = 0, nv_ = 0;
    std::vector<double> a_, b_, c_, d_, e_, w_;
    std::vector<double> beta_x_, beta_v_, pe_x_, pe_v_;
};

struct HestonPriceResult {
    std::vector<double> surface; // variance-major, at t_0
    Grid2D grid;
    int stages = 0;
    double dt_explicit = 0.0;
    std::vector<double> spot_prices; // bilinear at (spot, v0)
};

/// Prices an option under Heston with the RKL scheme: Kreiss-smoothed
/// terminal condition (optional), per-stage projection for American
/// exercise, uniform tensor grid.
HestonPriceResult heston_rkl_price(const HestonModel& model, const Payoff& payoff,
                                   bool american, const Grid2D& grid, int time_steps,
                                   double maturity, const std::vector<double>& spots,
                                   bool smooth_payoff = true, double eps = 0.0,
                                   int stage_override = 0);

/// Bilinear interpolation on a variance-major surface.
double bilinear(const Grid2D& grid, const std::vector<double>& surface, double x, double v);

} // namespace rklfd
