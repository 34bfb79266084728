// Compares the serial reference kernels against the OpenMP ones: the Heston
// stencil mat-vec and the stability-region raster.

#include "rklfd/heston.hpp"
#include "rklfd/stability.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_per_call(const std::function<void()>& fn, int reps)
{
    fn(); // warm up
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(Clock::now() - t0).count() / reps;
}

} // namespace

int main()
{
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both kernels run serially\n");
#endif

    {
        rklfd::HestonModel model{1.15, 0.0348, 0.39, -0.64, 0.04, 0.0, 0.0348};
        for (int m : {128, 512}) {
            const int n = m / 2;
            const auto grid = rklfd::Grid2D::uniform(145.2, m, 0.25, n);
            const rklfd::StencilOperator2D op(model, grid);
            std::vector<double> in(op.size()), out(op.size());
            for (std::size_t i = 0; i < in.size(); ++i) in[i] = std::sin(0.01 * i);

            const int reps = m <= 128 ? 400 : 50;
            const double ts = seconds_per_call([&] { op.apply_serial(in, out); }, reps);
            const double tp = seconds_per_call([&] { op.apply(in, out); }, reps);
            std::printf("stencil apply %4dx%-4d: serial %8.3f us   omp %8.3f us   speedup %.2fx\n",
                        m, n, ts * 1e6, tp * 1e6, ts / tp);
        }
    }

    {
        for (int s : {11, 21}) {
            const int nx = 1000, ny = 500;
            const double ts = seconds_per_call(
                [&] { rklfd::scan_region(rklfd::PolyFamily::Legendre, s, 0.0, std::nullopt, nx, ny, false); }, 3);
            const double tp = seconds_per_call(
                [&] { rklfd::scan_region(rklfd::PolyFamily::Legendre, s, 0.0, std::nullopt, nx, ny, true); }, 3);
            std::printf("region scan s=%2d %dx%d: serial %8.1f ms   omp %8.1f ms   speedup %.2fx\n",
                        s, nx, ny, ts * 1e3, tp * 1e3, ts / tp);
        }
    }
    return 0;
}
