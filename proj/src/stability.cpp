#include "rklfd/stability.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rklfd {

namespace {

void fill_raster(RegionScan& scan, const SchemeCoefficients& c, bool parallel)
{
    const int nx = scan.nx, ny = scan.ny;
    scan.damping.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    scan.stable.assign(static_cast<std::size_t>(nx) * ny, 0);
    double* damp = scan.damping.data();
    char* st = scan.stable.data();
    const ScanWindow w = scan.window;

#pragma omp parallel for schedule(static) if (parallel)
    for (int iy = 0; iy < ny; ++iy) {
        const double im = w.im_min + (w.im_max - w.im_min) * iy / (ny - 1.0);
        for (int ix = 0; ix < nx; ++ix) {
            const double re = w.re_min + (w.re_max - w.re_min) * ix / (nx - 1.0);
            const double r = std::abs(scalar_amplification(c, std::complex<double>(re, im)));
            const std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
            damp[idx] = r;
            st[idx] = (r <= 1.0) ? 1 : 0;
        }
    }
}

bool top_or_bottom_touched(const RegionScan& scan)
{
    for (int ix = 0; ix < scan.nx; ++ix)
        if (scan.stable[ix] || scan.stable[static_cast<std::size_t>(scan.ny - 1) * scan.nx + ix])
            return true;
    return false;
}

} // namespace

RegionScan scan_region(PolyFamily family, int s, double eps,
                       std::optional<ScanWindow> window, int nx, int ny, bool parallel)
{
    if (nx < 2 || ny < 2) throw std::invalid_argument("scan_region: resolution must be >= 2x2");
    const SchemeCoefficients c = scheme_coefficients(s, eps, family);
    RegionScan scan;
    scan.family = family;
    scan.stages = s;
    scan.eps = eps;
    scan.nx = nx;
    scan.ny = ny;

    if (window) {
        scan.window = *window;
        fill_raster(scan, c, parallel);
        return scan;
    }

    const double reach = (1.0 + c.w0) / c.w1;
    double im_extent = 0.05 * reach;
    for (int attempt = 0; attempt < 40; ++attempt) {
        scan.window = ScanWindow{-1.1 * reach, 0.1, -im_extent, im_extent};
        fill_raster(scan, c, parallel);
        if (!top_or_bottom_touched(scan)) return scan;
        im_extent *= 1.5;
    }
    throw std::runtime_error("scan_region: failed to enclose the stability region vertically");
}

RegionStats region_stats(const RegionScan& scan, std::optional<double> reference_area)
{
    // boundary check: stable cells on the window edge mean the window clipped
    // the region; only cells next to the origin are exempt (R(0) = 1).
    const double cw = (scan.window.re_max - scan.window.re_min) / (scan.nx - 1.0);
    const double ch = (scan.window.im_max - scan.window.im_min) / (scan.ny - 1.0);
    const double origin_slack = 3.0 * std::hypot(cw, ch);
    auto check = [&](int ix, int iy) {
        if (!scan.stable[static_cast<std::size_t>(iy) * scan.nx + ix]) return;
        const double re = scan.re_at(ix), im = scan.im_at(iy);
        if (std::hypot(re, im) > origin_slack)
            throw std::runtime_error("region_stats: window too small, stability mask touches the boundary");
    };
    for (int ix = 0; ix < scan.nx; ++ix) {
        check(ix, 0);
        check(ix, scan.ny - 1);
    }
    for (int iy = 0; iy < scan.ny; ++iy) {
        check(0, iy);
        check(scan.nx - 1, iy);
    }

    // deterministic reduction: per-row partials combined serially
    long long count = 0;
    double sum = 0.0;
    for (int iy = 0; iy < scan.ny; ++iy) {
        long long row_count = 0;
        double row_sum = 0.0;
        const std::size_t off = static_cast<std::size_t>(iy) * scan.nx;
        for (int ix = 0; ix < scan.nx; ++ix) {
            if (scan.stable[off + ix]) {
                ++row_count;
                row_sum += scan.damping[off + ix];
            }
        }
        count += row_count;
        sum += row_sum;
    }

    RegionStats st;
    st.area = scan.cell_area() * static_cast<double>(count);
    st.avg_damping = (count > 0) ? sum / static_cast<double>(count) : 0.0;
    if (reference_area) st.area_ratio = st.area / *reference_area;
    return st;
}

void write_region_csv(const RegionScan& scan, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_region_csv: cannot open " + path);
    out << "re,im,damping,stable\n";
    for (int iy = 0; iy < scan.ny; ++iy)
        for (int ix = 0; ix < scan.nx; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * scan.nx + ix;
            out << scan.re_at(ix) << ',' << scan.im_at(iy) << ','
                << scan.damping[idx] << ',' << int(scan.stable[idx]) << '\n';
        }
}

} // namespace rklfd
