#pragma once

#include "rklfd/rkl.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace rklfd {

/// Amplification factor R(z) of the s-stage scheme on u' = lambda u,
/// obtained by running the scalar stage recursion (not a closed form), so
/// the scan tests exactly what the stepper does.
inline std::complex<double> amplification(PolyFamily family, int s, double eps,
                                          std::complex<double> z)
{
    return scalar_amplification(scheme_coefficients(s, eps, family), z);
}

/// Rectangular window in the complex plane.
struct ScanWindow {
    double re_min, re_max, im_min, im_max;
};

/// |R(z)| raster over a window, with the stability mask |R| <= 1.
struct RegionScan {
    PolyFamily family = PolyFamily::Legendre;
    int stages = 0;
    double eps = 0.0;
    ScanWindow window{};
    int nx = 0, ny = 0;
    std::vector<double> damping; // row-major over (iy, ix), im ascending
    std::vector<char> stable;

    double re_at(int ix) const
    {
        return window.re_min + (window.re_max - window.re_min) * ix / (nx - 1.0);
    }
    double im_at(int iy) const
    {
        return window.im_min + (window.im_max - window.im_min) * iy / (ny - 1.0);
    }
    double cell_area() const
    {
        return (window.re_max - window.re_min) / (nx - 1.0)
             * (window.im_max - window.im_min) / (ny - 1.0);
    }
};

struct RegionStats {
    double area = 0.0;
    double avg_damping = 0.0;
    std::optional<double> area_ratio; // vs the reference area when supplied
};

/// Scans |R(z)| over a window (auto-fitted when window is absent: real extent
/// [-1.1 (1+w0)/w1, 0.1], imaginary extent grown until the mask clears the
/// top and bottom edges). Cells are independent; the scan parallelizes over
/// rows with results identical to the serial kernel.
RegionScan scan_region(PolyFamily family, int s, double eps,
                       std::optional<ScanWindow> window = std::nullopt,
                       int nx = 2000, int ny = 1000, bool parallel = true);

/// Area (cell area times stable-cell count) and mean |R| over the stable
/// cells. Throws when the mask touches the window boundary away from the
/// origin (window too small).
RegionStats region_stats(const RegionScan& scan,
                         std::optional<double> reference_area = std::nullopt);

/// CSV export: header re,im,damping,stable; one row per cell, row-major.
void write_region_csv(const RegionScan& scan, const std::string& path);

} // namespace rklfd
