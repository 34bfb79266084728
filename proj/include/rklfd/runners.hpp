#pragma once

#include "rklfd/config.hpp"
#include "rklfd/stability.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rklfd {

/// Standard normal CDF.
double norm_cdf(double z);

/// Black-Scholes European put/call and cash-or-nothing digital call.
double bs_put_price(double spot, double strike, double r, double sigma, double tau);
double bs_call_price(double spot, double strike, double r, double sigma, double tau);
double bs_digital_call_price(double spot, double strike, double r, double sigma, double tau,
                             double rebate = 1.0);

struct PriceRun {
    std::vector<double> spots;
    std::vector<double> prices;
    int stages = 0;         // RKL schemes
    double dt_explicit = 0; // explicit-Euler bound of the assembled operator
    double time_s = 0.0;
    std::vector<double> grid_x;  // pricing grid
    std::vector<double> values;  // full value vector at t_0 (1D models)
};

/// Prices one configured problem; returns probe prices plus diagnostics.
PriceRun run_price(const PricingProblem& problem);

/// One row of a refinement-ladder table (change/ratio defined from the
/// second/third level on).
struct ConvergenceRow {
    int spacesteps = 0;
    int timesteps = 0;
    double value = 0.0;
    std::optional<double> change;
    std::optional<double> ratio;
    std::optional<double> error;
    double time_s = 0.0;
};

/// Runs the doubling ladder: level g rebuilds the grid with steps*2^g base
/// intervals (and timesteps*2^g), re-placing the strike when requested.
std::vector<ConvergenceRow> run_converge(const PricingProblem& base, int levels,
                                         std::optional<double> reference);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

struct StabilityRun {
    RegionScan scan;
    RegionStats stats;
    double reference_area = 0.0; // RKL eps=0 at the same stage count
};

/// Scans a scheme's stability region and reports Table-1 style statistics;
/// the area ratio is normalized by the RKL eps=0 region at the same s.
StabilityRun run_stability(PolyFamily family, int stages, double eps,
                           std::optional<ScanWindow> window = std::nullopt,
                           int nx = 2000, int ny = 1000);

std::string stability_stats_json(const StabilityRun& run);

struct GammaRow {
    double x, value, delta, gamma;
};

/// Prices the configured problem and differentiates the t_0 profile.
std::vector<GammaRow> run_gamma(const PricingProblem& problem);

void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& out);

/// One-step digital experiment: the smoothed digital payoff advanced one
/// super-step of size k under four scheme variants, next to the analytic
/// value at t = T - k.
struct CmpDigitalTable {
    std::vector<double> x;
    std::vector<double> analytic;
    std::vector<double> rkl_eps0;
    std::vector<double> rkl_eps20;
    std::vector<double> rkc_eps01;
    std::vector<double> rkc_eps2;
    int stages = 0;
};

CmpDigitalTable run_cmp_digital(int stages = 111, double step = 0.01);

void write_cmp_digital_csv(const CmpDigitalTable& t, std::ostream& out);

/// Count of adjacent decreasing pairs beyond tolerance (monotonicity check).
int monotonicity_violations(const std::vector<double>& f, double tol = 1e-12);

} // namespace rklfd
