#include "rklfd/ncchi2.hpp"

#include <cmath>
#include <stdexcept>

namespace rklfd {

namespace {

// series expansion, reliable for x < a + 1
double gamma_p_series(double a, double x)
{
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 2000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p: series did not converge");
}

// modified Lentz continued fraction for Q(a, x), reliable for x >= a + 1
double gamma_q_cf(double a, double x)
{
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 2000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("gamma_p: continued fraction did not converge");
}

} // namespace

double gamma_p(double a, double x)
{
    if (!(a > 0.0)) throw std::invalid_argument("gamma_p: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double ncchi2_cdf(double y, double d, double lambda)
{
    if (!(d > 0.0)) throw std::invalid_argument("ncchi2_cdf: d must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("ncchi2_cdf: lambda must be >= 0");
    if (y <= 0.0) return 0.0;
    if (lambda == 0.0) return gamma_p(0.5 * d, 0.5 * y);

    const double half_lam = 0.5 * lambda;
    // start at the modal Poisson index and sweep both directions
    const long k0 = static_cast<long>(half_lam);
    const double log_w0 = -half_lam + k0 * std::log(half_lam) - std::lgamma(k0 + 1.0);
    double w0 = std::exp(log_w0);

    double sum = w0 * gamma_p(0.5 * d + k0, 0.5 * y);
    double w = w0;
    long budget = 100000;
    for (long k = k0 + 1; ; ++k) {
        w *= half_lam / k;
        const double term = w * gamma_p(0.5 * d + k, 0.5 * y);
        sum += term;
        if (w < 1e-17 || term < 1e-17 * sum) break;
        if (--budget == 0) throw std::runtime_error("ncchi2_cdf: series budget exceeded");
    }
    w = w0;
    for (long k = k0; k > 0; --k) {
        w *= k / half_lam;
        const double term = w * gamma_p(0.5 * d + (k - 1), 0.5 * y);
        sum += term;
        if (w < 1e-17) break;
        if (--budget == 0) throw std::runtime_error("ncchi2_cdf: series budget exceeded");
    }
    return std::min(sum, 1.0);
}

double ncchi2_quantile(double p, double d, double lambda)
{
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ncchi2_quantile: p must lie in (0, 1)");
    if (!(d > 0.0)) throw std::invalid_argument("ncchi2_quantile: d must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("ncchi2_quantile: lambda must be >= 0");

    // bracket the root around the mean
    double hi = d + lambda;
    while (ncchi2_cdf(hi, d, lambda) < p) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("ncchi2_quantile: failed to bracket");
    }
    double lo = 0.0;

    // bisection with a secant refinement once the bracket is tight
    double flo = 0.0 - p;
    double fhi = ncchi2_cdf(hi, d, lambda) - p;
    for (int it = 0; it < 200; ++it) {
        double mid;
        if (it > 20 && fhi != flo) {
            mid = lo - flo * (hi - lo) / (fhi - flo); // secant
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        const double fm = ncchi2_cdf(mid, d, lambda) - p;
        if (std::fabs(fm) <= 1e-10 || hi - lo < 1e-13 * (1.0 + mid)) return mid;
        if (fm < 0.0) { lo = mid; flo = fm; } else { hi = mid; fhi = fm; }
    }
    return 0.5 * (lo + hi);
}

} // namespace rklfd
