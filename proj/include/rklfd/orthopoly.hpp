#pragma once

#include <stdexcept>

namespace rklfd {

/// Polynomial family behind a super-time-stepping scheme.
enum class PolyFamily { Legendre, Chebyshev };

/// Value and first two derivatives of an orthogonal polynomial at w.
struct PolyEval {
    double value;
    double d1;
    double d2;
};

/// Evaluates P_s(w), P_s'(w), P_s''(w) by the three-term recursion,
/// differentiating the recursion itself (no closed forms).
/// Legendre: eta P_eta = (2 eta - 1) w P_{eta-1} - (eta - 1) P_{eta-2}
/// Chebyshev:     T_eta = 2 w T_{eta-1} - T_{eta-2}
inline PolyEval poly_eval(PolyFamily family, int s, double w)
{
    if (s < 0) throw std::invalid_argument("poly_eval: degree must be >= 0");
    if (s == 0) return {1.0, 0.0, 0.0};
    double p0 = 1.0, d0 = 0.0, dd0 = 0.0;
    double p1 = w, d1 = 1.0, dd1 = 0.0;
    for (int eta = 2; eta <= s; ++eta) {
        double A, B;
        if (family == PolyFamily::Legendre) {
            A = (2.0 * eta - 1.0) / eta;
            B = (eta - 1.0) / eta;
        } else {
            A = 2.0;
            B = 1.0;
        }
        const double p2 = A * w * p1 - B * p0;
        const double d2 = A * (p1 + w * d1) - B * d0;
        const double dd2 = A * (2.0 * d1 + w * dd1) - B * dd0;
        p0 = p1; d0 = d1; dd0 = dd1;
        p1 = p2; d1 = d2; dd1 = dd2;
    }
    return {p1, d1, dd1};
}

} // namespace rklfd
