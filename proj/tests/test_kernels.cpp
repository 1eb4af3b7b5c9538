#include "scsn/kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

namespace k = scsn::kernels;

namespace {

std::vector<double> rnd(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

TEST_CASE("serial and parallel kernels are bit-identical") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        CAPTURE(trial);
        k::ConvTimeDims ct{pick(rng, 1, 5), pick(rng, 1, 4), pick(rng, 8, 40), pick(rng, 1, 6), pick(rng, 1, 7),
                           pick(rng, 1, 3)};
        auto x = rnd(ct.batch * ct.channels * ct.time, rng);
        auto kk = rnd(ct.filters * ct.kernel, rng);
        const std::size_t ny = ct.batch * ct.filters * ct.channels * ct.out_time();
        std::vector<double> ys(ny), yp(ny);
        k::serial::conv_time_forward(ct, x, kk, ys);
        k::parallel::conv_time_forward(ct, x, kk, yp);
        CHECK(ys == yp);
        auto gy = rnd(ny, rng);
        std::vector<double> gxs(x.size(), 0.5), gxp(x.size(), 0.5), gks(kk.size()), gkp(kk.size());
        k::serial::conv_time_backward_input(ct, gy, kk, gxs);
        k::parallel::conv_time_backward_input(ct, gy, kk, gxp);
        CHECK(gxs == gxp);
        k::serial::conv_time_backward_kernel(ct, gy, x, gks);
        k::parallel::conv_time_backward_kernel(ct, gy, x, gkp);
        CHECK(gks == gkp);

        k::ConvSpaceDims cs{ct.batch, ct.filters, ct.channels, ct.out_time(), pick(rng, 1, 5)};
        auto w = rnd(cs.outputs * cs.filters * cs.channels, rng);
        std::vector<double> zs(cs.batch * cs.outputs * cs.time), zp(zs.size());
        k::serial::conv_space_forward(cs, ys, w, zs);
        k::parallel::conv_space_forward(cs, ys, w, zp);
        CHECK(zs == zp);
        auto gz = rnd(zs.size(), rng);
        std::vector<double> g1(ny), g2(ny), gw1(w.size()), gw2(w.size());
        k::serial::conv_space_backward_input(cs, gz, w, g1);
        k::parallel::conv_space_backward_input(cs, gz, w, g2);
        CHECK(g1 == g2);
        k::serial::conv_space_backward_weight(cs, gz, ys, gw1);
        k::parallel::conv_space_backward_weight(cs, gz, ys, gw2);
        CHECK(gw1 == gw2);

        const std::size_t width = pick(rng, 1, cs.time);
        k::PoolDims pd{cs.batch * cs.outputs, cs.time, width, pick(rng, 1, 4)};
        std::vector<double> ps(pd.rows * pd.out_time()), pp(ps.size());
        k::serial::mean_pool_forward(pd, zs, ps);
        k::parallel::mean_pool_forward(pd, zs, pp);
        CHECK(ps == pp);
        auto gp = rnd(ps.size(), rng);
        std::vector<double> gq1(zs.size()), gq2(zs.size());
        k::serial::mean_pool_backward(pd, gp, gq1);
        k::parallel::mean_pool_backward(pd, gp, gq2);
        CHECK(gq1 == gq2);

        k::DenseDims dd{pick(rng, 1, 6), pick(rng, 1, 20), pick(rng, 1, 9)};
        auto dx = rnd(dd.batch * dd.in, rng), dw = rnd(dd.out * dd.in, rng), db = rnd(dd.out, rng);
        std::vector<double> d1(dd.batch * dd.out), d2(d1.size());
        k::serial::dense_forward(dd, dx, dw, db, d1);
        k::parallel::dense_forward(dd, dx, dw, db, d2);
        CHECK(d1 == d2);
        auto gd = rnd(d1.size(), rng);
        std::vector<double> e1(dx.size()), e2(dx.size()), w1(dw.size()), w2(dw.size()), b1(db.size()), b2(db.size());
        k::serial::dense_backward_input(dd, gd, dw, e1);
        k::parallel::dense_backward_input(dd, gd, dw, e2);
        CHECK(e1 == e2);
        k::serial::dense_backward_params(dd, gd, dx, w1, b1);
        k::parallel::dense_backward_params(dd, gd, dx, w2, b2);
        CHECK(w1 == w2);
        CHECK(b1 == b2);
    }
}

TEST_CASE("serial conv_time matches a hand sliding dot product") {
    k::ConvTimeDims d{1, 1, 4, 1, 2, 1};
    std::vector<double> x{1, 2, 3, 4}, kk{1, -1}, y(3);
    k::serial::conv_time_forward(d, x, kk, y);
    CHECK(y == std::vector<double>{-1, -1, -1});
}
