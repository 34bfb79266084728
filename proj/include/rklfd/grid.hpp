#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rklfd {

/// Strictly increasing 1D asset-price mesh x_0 < ... < x_m, m >= 2.
class Grid1D {
public:
    explicit Grid1D(std::vector<double> nodes) : x_(std::move(nodes))
    {
        if (x_.size() < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
        for (std::size_t i = 1; i < x_.size(); ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
    }

    static Grid1D uniform(double x_min, double x_max, int steps)
    {
        if (steps < 2) throw std::invalid_argument("Grid1D::uniform: need at least 2 steps");
        if (!(x_max > x_min)) throw std::invalid_argument("Grid1D::uniform: x_max must exceed x_min");
        std::vector<double> x(steps + 1);
        for (int i = 0; i <= steps; ++i)
            x[i] = x_min + (x_max - x_min) * static_cast<double>(i) / steps;
        x.back() = x_max;
        return Grid1D(std::move(x));
    }

    std::size_t num_nodes() const { return x_.size(); }
    std::size_t num_steps() const { return x_.size() - 1; }
    double node(std::size_t i) const { return x_[i]; }
    const std::vector<double>& nodes() const { return x_; }
    /// spacing h_i = x_i - x_{i-1}, i in [1, m]
    double spacing(std::size_t i) const { return x_[i] - x_[i - 1]; }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    /// Index of the node equal to v within relative tolerance, or -1.
    std::ptrdiff_t index_of(double v, double rel_tol = 1e-12) const
    {
        const double tol = rel_tol * std::max(1.0, std::fabs(v));
        std::size_t lo = 0, hi = x_.size();
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (x_[mid] <= v) lo = mid; else hi = mid;
        }
        for (std::size_t i = lo; i <= std::min(lo + 1, x_.size() - 1); ++i)
            if (std::fabs(x_[i] - v) <= tol) return static_cast<std::ptrdiff_t>(i);
        return -1;
    }

    std::size_t nearest_index(double v) const
    {
        std::size_t best = 0;
        double bd = std::fabs(x_[0] - v);
        for (std::size_t i = 1; i < x_.size(); ++i) {
            const double d = std::fabs(x_[i] - v);
            if (d < bd) { bd = d; best = i; }
        }
        return best;
    }

    /// Linear interpolation of nodal values at position v.
    double interpolate(const std::vector<double>& f, double v) const
    {
        if (f.size() != x_.size()) throw std::invalid_argument("Grid1D::interpolate: size mismatch");
        if (v <= x_.front()) return f.front();
        if (v >= x_.back()) return f.back();
        std::size_t lo = 0, hi = x_.size() - 1;
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (x_[mid] <= v) lo = mid; else hi = mid;
        }
        const double t = (v - x_[lo]) / (x_[lo + 1] - x_[lo]);
        return (1.0 - t) * f[lo] + t * f[lo + 1];
    }

private:
    std::vector<double> x_;
};

/// Ensures the strike is a grid node: returns the grid unchanged when K is
/// already a node (relative 1e-12), otherwise inserts K as a new node.
inline Grid1D place_strike_on_grid(const Grid1D& grid, double strike)
{
    if (strike < grid.x_min() || strike > grid.x_max())
        throw std::invalid_argument("place_strike_on_grid: strike outside the grid domain");
    if (grid.index_of(strike) >= 0) return grid;
    std::vector<double> x = grid.nodes();
    std::size_t pos = 0;
    while (pos < x.size() && x[pos] < strike) ++pos;
    x.insert(x.begin() + pos, strike);
    return Grid1D(std::move(x));
}

/// Strictly increasing time discretization t_0 < ... < t_n.
class TimeAxis {
public:
    explicit TimeAxis(std::vector<double> t) : t_(std::move(t))
    {
        if (t_.size() < 2) throw std::invalid_argument("TimeAxis: need at least 2 points");
        for (std::size_t j = 1; j < t_.size(); ++j)
            if (!(t_[j] > t_[j - 1]))
                throw std::invalid_argument("TimeAxis: points must be strictly increasing");
    }

    /// n constant steps from 0 to T.
    static TimeAxis uniform(int n, double maturity)
    {
        if (n < 1) throw std::invalid_argument("TimeAxis::uniform: need at least 1 step");
        if (!(maturity > 0.0)) throw std::invalid_argument("TimeAxis::uniform: maturity must be > 0");
        std::vector<double> t(n + 1);
        for (int j = 0; j <= n; ++j) t[j] = maturity * static_cast<double>(j) / n;
        t.back() = maturity;
        return TimeAxis(std::move(t));
    }

    std::size_t num_steps() const { return t_.size() - 1; }
    double point(std::size_t j) const { return t_[j]; }
    /// step k_j = t_j - t_{j-1}, j in [1, n]
    double step(std::size_t j) const { return t_[j] - t_[j - 1]; }
    double maturity() const { return t_.back(); }

private:
    std::vector<double> t_;
};

} // namespace rklfd
