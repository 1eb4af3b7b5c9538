// Serial vs OpenMP timings for the decoder kernels at training batch shapes.
//   bench_kernels [repeats]

#include "scsn/kernels.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

namespace k = scsn::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

double time_ms(const std::function<void()>& fn, int repeats) {
    fn();
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.3f %10.3f %8.2fx\n", name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
    std::mt19937_64 rng(1);

    k::ConvTimeDims ct{60, 22, 500, 40, 25, 1};
    k::ConvSpaceDims cs{60, 40, 22, ct.out_time(), 40};
    k::PoolDims pd{60 * 40, ct.out_time(), 75, 15};
    k::DenseDims dd{60, 40 * pd.out_time(), 128};

    auto x = random_vec(ct.batch * ct.channels * ct.time, rng);
    auto kt = random_vec(ct.filters * ct.kernel, rng);
    std::vector<double> yt(ct.batch * ct.filters * ct.channels * ct.out_time());
    auto gyt = random_vec(yt.size(), rng);
    std::vector<double> gx(x.size()), gkt(kt.size());

    auto ws = random_vec(cs.outputs * cs.filters * cs.channels, rng);
    std::vector<double> ys(cs.batch * cs.outputs * cs.time);
    auto gys = random_vec(ys.size(), rng);
    std::vector<double> gxs(yt.size()), gws(ws.size());

    auto xp = random_vec(pd.rows * pd.time, rng);
    std::vector<double> yp(pd.rows * pd.out_time());
    auto gyp = random_vec(yp.size(), rng);
    std::vector<double> gxp(xp.size());

    auto xd = random_vec(dd.batch * dd.in, rng);
    auto wd = random_vec(dd.out * dd.in, rng);
    auto bd = random_vec(dd.out, rng);
    std::vector<double> yd(dd.batch * dd.out), gxd(xd.size()), gwd(wd.size()), gbd(bd.size());
    auto gyd = random_vec(yd.size(), rng);

    std::printf("threads=%d repeats=%d\n", omp_get_max_threads(), repeats);
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial_ms", "omp_ms", "speedup");

#define BENCH(name, call)                                                                        \
    row(name, time_ms([&] { k::serial::call; }, repeats), time_ms([&] { k::parallel::call; }, repeats))

    BENCH("conv_time_forward", conv_time_forward(ct, x, kt, yt));
    BENCH("conv_time_backward_input", conv_time_backward_input(ct, gyt, kt, gx));
    BENCH("conv_time_backward_kernel", conv_time_backward_kernel(ct, gyt, x, gkt));
    BENCH("conv_space_forward", conv_space_forward(cs, yt, ws, ys));
    BENCH("conv_space_backward_input", conv_space_backward_input(cs, gys, ws, gxs));
    BENCH("conv_space_backward_weight", conv_space_backward_weight(cs, gys, yt, gws));
    BENCH("mean_pool_forward", mean_pool_forward(pd, xp, yp));
    BENCH("mean_pool_backward", mean_pool_backward(pd, gyp, gxp));
    BENCH("dense_forward", dense_forward(dd, xd, wd, bd, yd));
    BENCH("dense_backward_input", dense_backward_input(dd, gyd, wd, gxd));
    BENCH("dense_backward_params", dense_backward_params(dd, gyd, xd, gwd, gbd));
#undef BENCH
    return 0;
}
