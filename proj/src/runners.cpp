#include "rklfd/runners.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace rklfd {

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double bs_put_price(double spot, double strike, double r, double sigma, double tau)
{
    if (tau <= 0.0 || sigma <= 0.0)
        return std::max(strike * std::exp(-r * std::max(tau, 0.0)) - spot, 0.0);
    const double st = sigma * std::sqrt(tau);
    const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * tau) / st;
    const double d2 = d1 - st;
    return strike * std::exp(-r * tau) * norm_cdf(-d2) - spot * norm_cdf(-d1);
}

double bs_call_price(double spot, double strike, double r, double sigma, double tau)
{
    if (tau <= 0.0 || sigma <= 0.0)
        return std::max(spot - strike * std::exp(-r * std::max(tau, 0.0)), 0.0);
    const double st = sigma * std::sqrt(tau);
    const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * tau) / st;
    return spot * norm_cdf(d1) - strike * std::exp(-r * tau) * norm_cdf(d1 - st);
}

double bs_digital_call_price(double spot, double strike, double r, double sigma, double tau,
                             double rebate)
{
    if (tau <= 0.0 || sigma <= 0.0) return spot > strike ? rebate : 0.0;
    const double st = sigma * std::sqrt(tau);
    const double d2 = (std::log(spot / strike) + (r - 0.5 * sigma * sigma) * tau) / st;
    return rebate * std::exp(-r * tau) * norm_cdf(d2);
}

namespace {

Grid1D build_grid_1d(const PricingProblem& p)
{
    Grid1D g = Grid1D::uniform(p.grid.x_min, *p.grid.x_max, p.grid.steps);
    if (p.grid.strike_on_grid) g = place_strike_on_grid(g, p.payoff.strike);
    return g;
}

LcpStrategy implicit_strategy(const PricingProblem& p)
{
    switch (p.scheme.lcp) {
    case LcpChoice::BrennanSchwartz: return LcpStrategy::BrennanSchwartz;
    case LcpChoice::Psor: return LcpStrategy::Psor;
    case LcpChoice::None: return LcpStrategy::None;
    case LcpChoice::Projection: return LcpStrategy::None; // rejected earlier for implicit
    case LcpChoice::Auto:
        break;
    }
    // auto: the optimized sweep for vanilla payoffs, PSOR otherwise
    if (p.payoff.kind == PayoffKind::VanillaPut || p.payoff.kind == PayoffKind::VanillaCall)
        return LcpStrategy::BrennanSchwartz;
    return LcpStrategy::Psor;
}

PriceRun run_price_bs(const PricingProblem& p)
{
    PriceRun out;
    const Grid1D grid = build_grid_1d(p);
    const TimeAxis time = TimeAxis::uniform(p.time.steps, p.time.maturity);

    const std::vector<double> raw = payoff_values(p.payoff, grid);
    const std::vector<double> start = p.scheme.smoothing ? kreiss_smooth(p.payoff, grid) : raw;
    const bool american = p.exercise == ExerciseStyle::American;

    auto factory = [&](double t) { return assemble_bs(p.bs, grid, t); };
    const LcpStrategy strategy = american ? implicit_strategy(p) : LcpStrategy::None;
    BsSweep sweep = BsSweep::Ascending;
    if (american && strategy == LcpStrategy::BrennanSchwartz)
        sweep = brennan_schwartz_sweep(p.payoff);

    std::vector<double> terminal = start;
    if (american)
        for (std::size_t i = 0; i < terminal.size(); ++i)
            terminal[i] = std::max(terminal[i], raw[i]);

    Pricing1DResult r = run_scheme_1d(p.scheme.method, factory, time, terminal,
                                      american ? &raw : nullptr, strategy, sweep,
                                      p.scheme.eps, p.scheme.psor, p.scheme.stages);
    out.stages = r.stages;
    out.dt_explicit = r.dt_explicit;
    for (double s : p.spots) out.prices.push_back(grid.interpolate(r.values, s));
    out.spots = p.spots;
    out.grid_x = grid.nodes();
    out.values = std::move(r.values);
    return out;
}

PriceRun run_price_uvm(const PricingProblem& p)
{
    PriceRun out;
    const Grid1D grid = build_grid_1d(p);
    const TimeAxis time = TimeAxis::uniform(p.time.steps, p.time.maturity);
    const std::vector<double> terminal =
        p.scheme.smoothing ? kreiss_smooth(p.payoff, grid) : payoff_values(p.payoff, grid);

    UvmRunResult r;
    if (p.scheme.method == Scheme1D::Rkl)
        r = uvm_rkl_run(grid, p.uvm, time, terminal, p.scheme.eps);
    else if (p.scheme.method == Scheme1D::BackwardEuler)
        r = uvm_euler_run(grid, p.uvm, time, terminal);
    else
        throw ConfigError("scheme.method: the uvm model supports rkl and euler");
    out.stages = r.stages;
    {
        std::vector<double> smax(grid.num_nodes(), p.uvm.sigma_max);
        out.dt_explicit = explicit_max_step(assemble_uvm(grid, smax, p.uvm.mu, p.uvm.r));
    }
    for (double s : p.spots) out.prices.push_back(grid.interpolate(r.values, s));
    out.spots = p.spots;
    out.grid_x = grid.nodes();
    out.values = std::move(r.values);
    return out;
}

PriceRun run_price_heston(const PricingProblem& p)
{
    PriceRun out;
    double x_max, v_max;
    const DomainBounds db = domain_bounds(p.heston, p.payoff.strike, p.time.maturity,
                                          p.grid.eps_v, p.grid.num_sd);
    x_max = p.grid.x_max ? *p.grid.x_max : db.x_max;
    v_max = p.grid.v_max ? *p.grid.v_max : db.v_max;
    const Grid2D grid = Grid2D::uniform(x_max, p.grid.steps, v_max, p.grid.v_steps, p.grid.x_min);

    const HestonPriceResult r = heston_rkl_price(p.heston, p.payoff,
                                                 p.exercise == ExerciseStyle::American, grid,
                                                 p.time.steps, p.time.maturity, p.spots,
                                                 p.scheme.smoothing, p.scheme.eps,
                                                 p.scheme.stages);
    out.stages = r.stages;
    out.dt_explicit = r.dt_explicit;
    out.prices = r.spot_prices;
    out.spots = p.spots;
    out.grid_x = grid.x;
    return out;
}

} // namespace

PriceRun run_price(const PricingProblem& p)
{
    p.validate();
    const auto t0 = std::chrono::steady_clock::now();
    PriceRun out;
    switch (p.model_type) {
    case ModelType::BlackScholes: out = run_price_bs(p); break;
    case ModelType::Uvm: out = run_price_uvm(p); break;
    case ModelType::Heston: out = run_price_heston(p); break;
    }
    out.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::vector<ConvergenceRow> run_converge(const PricingProblem& base, int levels,
                                         std::optional<double> reference)
{
    if (levels < 1) throw ConfigError("converge: levels must be >= 1");
    std::vector<ConvergenceRow> rows;
    for (int g = 0; g < levels; ++g) {
        PricingProblem p = base;
        p.grid.steps = base.grid.steps << g;
        p.grid.v_steps = base.grid.v_steps << g;
        p.time.steps = base.time.steps << g;
        const PriceRun run = run_price(p);

        ConvergenceRow row;
        row.spacesteps = static_cast<int>(run.grid_x.size()) - 1;
        row.timesteps = p.time.steps;
        row.value = run.prices.front();
        row.time_s = run.time_s;
        if (!rows.empty()) row.change = row.value - rows.back().value;
        if (rows.size() >= 2 && rows.back().change && *rows.back().change != 0.0 && row.change)
            row.ratio = *rows.back().change / *row.change;
        if (reference) row.error = row.value - *reference;
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out)
{
    out << "spacesteps,timesteps,value,change,ratio,error,time_s\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.spacesteps << ',' << r.timesteps << ',' << r.value << ',';
        if (r.change) out << *r.change;
        out << ',';
        if (r.ratio) out << *r.ratio;
        out << ',';
        if (r.error) out << *r.error;
        out << ',' << r.time_s << '\n';
    }
}

StabilityRun run_stability(PolyFamily family, int stages, double eps,
                           std::optional<ScanWindow> window, int nx, int ny)
{
    StabilityRun run;
    run.scan = scan_region(family, stages, eps, window, nx, ny);
    const RegionScan ref = (family == PolyFamily::Legendre && eps == 0.0)
                               ? run.scan
                               : scan_region(PolyFamily::Legendre, stages, 0.0, std::nullopt, nx, ny);
    run.reference_area = region_stats(ref).area;
    run.stats = region_stats(run.scan, run.reference_area);
    return run;
}

std::string stability_stats_json(const StabilityRun& run)
{
    nlohmann::json j;
    j["scheme"] = (run.scan.family == PolyFamily::Legendre) ? "RKL" : "RKC";
    j["s"] = run.scan.stages;
    j["eps"] = run.scan.eps;
    j["area"] = run.stats.area;
    j["area_ratio"] = run.stats.area_ratio.value_or(1.0);
    j["avg_damping"] = run.stats.avg_damping;
    return j.dump(2);
}

std::vector<GammaRow> run_gamma(const PricingProblem& problem)
{
    const PriceRun run = run_price(problem);
    if (run.values.empty())
        throw ConfigError("gamma: requires a 1D model (bs or uvm)");
    const Grid1D grid{run.grid_x};
    const std::vector<double> delta = central_delta(grid, run.values);
    const std::vector<double> gamma = central_gamma(grid, run.values);
    std::vector<GammaRow> rows(grid.num_nodes());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i] = {grid.node(i), run.values[i], delta[i], gamma[i]};
    return rows;
}

void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& out)
{
    out << "x,value,delta,gamma\n";
    out << std::setprecision(12);
    for (const auto& r : rows)
        out << r.x << ',' << r.value << ',' << r.delta << ',' << r.gamma << '\n';
}

CmpDigitalTable run_cmp_digital(int stages, double step)
{
    // binary call, K = 100, T = 0.25, sigma = 25%, r = 10%, 800 uniform steps
    // between three-standard-deviation bounds
    const double strike = 100.0, sigma = 0.25, rate = 0.10, maturity = 0.25;
    const Grid1D grid = Grid1D::uniform(68.71, 145.58, 800);
    const Payoff payoff = Payoff::digital_call(strike, 1.0);
    const std::vector<double> smoothed = kreiss_smooth(payoff, grid);

    BSModel model;
    model.sigma = Coefficient(sigma);
    model.mu = Coefficient(rate);
    model.r = Coefficient(rate);
    const TridiagonalOperator op = assemble_bs(model, grid, maturity);
    auto apply = [&op](const std::vector<double>& in, std::vector<double>& out) {
        op.apply(in, out);
    };

    CmpDigitalTable t;
    t.stages = stages;
    t.x = grid.nodes();
    auto advance = [&](PolyFamily fam, double eps) {
        if (step == 0.0) return smoothed;
        return rkl_step(scheme_coefficients(stages, eps, fam), apply, step, smoothed);
    };
    t.rkl_eps0 = advance(PolyFamily::Legendre, 0.0);
    t.rkl_eps20 = advance(PolyFamily::Legendre, 20.0);
    t.rkc_eps01 = advance(PolyFamily::Chebyshev, 0.1);
    t.rkc_eps2 = advance(PolyFamily::Chebyshev, 2.0);
    t.analytic.resize(t.x.size());
    for (std::size_t i = 0; i < t.x.size(); ++i)
        t.analytic[i] = bs_digital_call_price(t.x[i], strike, rate, sigma, step);
    return t;
}

void write_cmp_digital_csv(const CmpDigitalTable& t, std::ostream& out)
{
    out << "x,analytic,rkl_eps0,rkl_eps20,rkc_eps0.1,rkc_eps2\n";
    out << std::setprecision(12);
    for (std::size_t i = 0; i < t.x.size(); ++i)
        out << t.x[i] << ',' << t.analytic[i] << ',' << t.rkl_eps0[i] << ','
            << t.rkl_eps20[i] << ',' << t.rkc_eps01[i] << ',' << t.rkc_eps2[i] << '\n';
}

int monotonicity_violations(const std::vector<double>& f, double tol)
{
    int count = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
        if (f[i] < f[i - 1] - tol) ++count;
    return count;
}

} // namespace rklfd
