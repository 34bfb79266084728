#pragma once

#include "rklfd/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace rklfd {

enum class PayoffKind { VanillaPut, VanillaCall, DigitalCall, Butterfly };

/// Terminal payoff. Butterfly = long one call at each of strike/strike2,
/// short two calls at the midpoint. DigitalCall pays the rebate above strike.
struct Payoff {
    PayoffKind kind = PayoffKind::VanillaPut;
    double strike = 0.0;  // K, or K1 for the butterfly
    double strike2 = 0.0; // K2 (butterfly only)
    double rebate = 1.0;  // digital only

    static Payoff put(double k) { return {PayoffKind::VanillaPut, k, 0.0, 0.0}; }
    static Payoff call(double k) { return {PayoffKind::VanillaCall, k, 0.0, 0.0}; }
    static Payoff digital_call(double k, double reb = 1.0)
    {
        return {PayoffKind::DigitalCall, k, 0.0, reb};
    }
    static Payoff butterfly(double k1, double k2)
    {
        if (!(k1 < k2)) throw std::invalid_argument("Payoff::butterfly: requires K1 < K2");
        return {PayoffKind::Butterfly, k1, k2, 0.0};
    }

    void validate() const
    {
        if (!(strike > 0.0)) throw std::invalid_argument("Payoff: strike must be positive");
        if (kind == PayoffKind::Butterfly && !(strike < strike2))
            throw std::invalid_argument("Payoff: butterfly requires K1 < K2");
    }

    double value(double x) const
    {
        switch (kind) {
        case PayoffKind::VanillaPut: return std::max(strike - x, 0.0);
        case PayoffKind::VanillaCall: return std::max(x - strike, 0.0);
        case PayoffKind::DigitalCall: return x > strike ? rebate : 0.0;
        case PayoffKind::Butterfly: {
            const double mid = 0.5 * (strike + strike2);
            return std::max(x - strike, 0.0) + std::max(x - strike2, 0.0)
                 - 2.0 * std::max(x - mid, 0.0);
        }
        }
        return 0.0;
    }

    /// Exact integral of the payoff over [a, b] (piecewise linear + jumps).
    double integral(double a, double b) const
    {
        auto call_int = [](double k, double lo, double hi) {
            // integral of max(u - k, 0) over [lo, hi]
            const double l = std::max(lo, k);
            if (hi <= l) return 0.0;
            return 0.5 * ((hi - k) * (hi - k) - (l - k) * (l - k));
        };
        switch (kind) {
        case PayoffKind::VanillaPut: {
            const double h = std::min(b, strike);
            if (h <= a) return 0.0;
            return 0.5 * ((strike - a) * (strike - a) - (strike - h) * (strike - h));
        }
        case PayoffKind::VanillaCall: return call_int(strike, a, b);
        case PayoffKind::DigitalCall: return rebate * std::max(0.0, b - std::max(a, strike));
        case PayoffKind::Butterfly: {
            const double mid = 0.5 * (strike + strike2);
            return call_int(strike, a, b) + call_int(strike2, a, b) - 2.0 * call_int(mid, a, b);
        }
        }
        return 0.0;
    }
};

/// Nodal payoff evaluation.
inline std::vector<double> payoff_values(const Payoff& p, const Grid1D& grid)
{
    std::vector<double> f(grid.num_nodes());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = p.value(grid.node(i));
    return f;
}

/// Second-order smoothing of a discontinuous/kinked payoff: each nodal value
/// is replaced by the exact cell average over [x_i - h_l/2, x_i + h_r/2].
inline std::vector<double> kreiss_smooth(const Payoff& p, const Grid1D& grid)
{
    const std::size_t m = grid.num_steps();
    std::vector<double> f(grid.num_nodes());
    for (std::size_t i = 0; i <= m; ++i) {
        const double hl = (i > 0) ? grid.spacing(i) : grid.spacing(1);
        const double hr = (i < m) ? grid.spacing(i + 1) : grid.spacing(m);
        const double a = grid.node(i) - 0.5 * hl;
        const double b = grid.node(i) + 0.5 * hr;
        f[i] = p.integral(a, b) / (b - a);
    }
    return f;
}

} // namespace rklfd
