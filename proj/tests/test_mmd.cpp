#include "scsn/errors.hpp"
#include "scsn/grad_check.hpp"
#include "scsn/mmd.hpp"
#include "scsn/ops.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace scsn;
using nn::Tape;
using nn::Tensor;

namespace {

Tensor normal(std::size_t n, std::size_t d, std::mt19937_64& rng, double shift = 0.0) {
    Tensor t({n, d});
    std::normal_distribution<double> g(shift, 1.0);
    for (double& v : t.values()) v = g(rng);
    return t;
}

double dist(const Tensor& a, std::size_t i, const Tensor& b, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.dim(1); ++k) {
        const double d = a[i * a.dim(1) + k] - b[j * b.dim(1) + k];
        s += d * d;
    }
    return std::sqrt(s);
}

double naive_bandwidth(const Tensor& x, const Tensor& y) {
    std::vector<std::pair<const Tensor*, std::size_t>> pts;
    for (std::size_t i = 0; i < x.dim(0); ++i) pts.push_back({&x, i});
    for (std::size_t i = 0; i < y.dim(0); ++i) pts.push_back({&y, i});
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j, ++n) s += dist(*pts[i].first, pts[i].second, *pts[j].first, pts[j].second);
    return s / static_cast<double>(n);
}

double naive_mmd(const Tensor& x, const Tensor& y) {
    const double s2 = naive_bandwidth(x, y);
    auto k = [&](const Tensor& a, std::size_t i, const Tensor& b, std::size_t j) {
        const double d = dist(a, i, b, j);
        return std::exp(-d * d / (2.0 * s2));
    };
    const double n = static_cast<double>(x.dim(0)), m = static_cast<double>(y.dim(0));
    double xx = 0, yy = 0, xy = 0;
    for (std::size_t i = 0; i < x.dim(0); ++i)
        for (std::size_t j = 0; j < x.dim(0); ++j) xx += k(x, i, x, j);
    for (std::size_t i = 0; i < y.dim(0); ++i)
        for (std::size_t j = 0; j < y.dim(0); ++j) yy += k(y, i, y, j);
    for (std::size_t i = 0; i < x.dim(0); ++i)
        for (std::size_t j = 0; j < y.dim(0); ++j) xy += k(x, i, y, j);
    return xx / (n * n) + yy / (m * m) - 2.0 * xy / (n * m);
}

}  // namespace

TEST_CASE("bandwidth examples") {
    Tensor x({1, 2}, std::vector<double>{0.3, -1});
    CHECK(mmd::bandwidth_mean_l2(x, x) == 1.0);
    CHECK(mmd::bandwidth_mean_l2(Tensor({1, 2}, std::vector<double>{0, 0}), Tensor({1, 2}, std::vector<double>{0, 2})) ==
          2.0);
    std::mt19937_64 rng(1);
    Tensor a = normal(50, 3, rng), b = normal(50, 3, rng);
    CHECK(std::abs(mmd::bandwidth_mean_l2(a, b) - naive_bandwidth(a, b)) < 1e-12);
}

TEST_CASE("mmd2 examples") {
    Tensor x({1, 2}, std::vector<double>{0, 0}), y({1, 2}, std::vector<double>{0, 2});
    CHECK(std::abs(mmd::mmd2_biased(x, y) - (2.0 - 2.0 * std::exp(-1.0))) < 1e-12);
    std::mt19937_64 rng(2);
    Tensor a = normal(20, 4, rng), b = normal(20, 4, rng, 0.5);
    CHECK(std::abs(mmd::mmd2_biased(a, a)) <= 1e-12);
    CHECK(std::abs(mmd::mmd2_biased(a, b) - naive_mmd(a, b)) < 1e-12);
    CHECK(std::abs(mmd::mmd2_biased(a, b) - mmd::mmd2_biased(b, a)) < 1e-12);
}

TEST_CASE("mmd2 with fixed bandwidth") {
    Tensor x({1, 1}, std::vector<double>{0}), y({1, 1}, std::vector<double>{1});
    const double v = mmd::mmd2_biased(x, y, {mmd::BandwidthRule::Fixed, 0.5});
    CHECK(std::abs(v - (2.0 - 2.0 * std::exp(-1.0))) < 1e-12);
}

TEST_CASE("mmd2 grows with mean shift") {
    std::mt19937_64 rng(3);
    Tensor a = normal(30, 2, rng);
    Tensor b0 = normal(30, 2, rng), b1 = b0, b2 = b0;
    for (double& v : b1.values()) v += 1.0;
    for (double& v : b2.values()) v += 3.0;
    CHECK(mmd::mmd2_biased(a, b0) < mmd::mmd2_biased(a, b1));
    CHECK(mmd::mmd2_biased(a, b1) < mmd::mmd2_biased(a, b2));
    CHECK(mmd::mmd2_biased(a, b0) >= 0.0);
}

TEST_CASE("mmd2 gradient matches finite differences") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 5; ++rep) {
        Tensor a = normal(5, 3, rng), b = normal(4, 3, rng, 0.7);
        for (const auto& kernel : {mmd::KernelSpec{}, mmd::KernelSpec{mmd::BandwidthRule::Fixed, 1.3}}) {
            const auto r = mmd::mmd2_biased_with_grad(a, b, kernel);
            const double eps = 1e-5;
            for (std::size_t i = 0; i < a.size(); ++i) {
                Tensor p = a, m = a;
                p[i] += eps;
                m[i] -= eps;
                const double num = (mmd::mmd2_biased(p, b, kernel) - mmd::mmd2_biased(m, b, kernel)) / (2 * eps);
                CHECK(std::abs(num - r.grad_x[i]) < 1e-8);
            }
            auto tape_r =
                nn::grad_check([&](Tape& t, auto in) { return mmd::mmd2_biased(t, in[0], in[1], kernel); }, {a, b});
            CHECK(tape_r.max_rel_error < 1e-4);
        }
    }
}

TEST_CASE("layered_class_mmd") {
    std::mt19937_64 rng(5);
    SUBCASE("equal per-layer values give that value") {
        Tensor t = normal(6, 3, rng), s = normal(6, 3, rng, 1.0);
        std::vector<std::size_t> lt(6, 0), ls(6, 0);
        const double m = mmd::mmd2_biased(t, s);
        std::vector<Tensor> tf{t, t, t}, sf{s, s, s};
        CHECK(std::abs(mmd::layered_class_mmd(tf, sf, lt, ls) - m) < 1e-12);
    }
    SUBCASE("identical batches give zero") {
        std::vector<Tensor> f{normal(8, 2, rng), normal(8, 3, rng), normal(8, 4, rng)};
        std::vector<std::size_t> l{0, 1, 0, 1, 2, 2, 0, 1};
        CHECK(std::abs(mmd::layered_class_mmd(f, f, l, l)) < 1e-12);
    }
    SUBCASE("two classes compose from per-class values") {
        // target labels {0,1,0,1}, source labels {1,0,0,1}
        auto per_layer = [](double k) {
            auto col = [k](std::vector<double> v) {
                for (double& x : v) x *= k;
                return Tensor({v.size(), 1}, v);
            };
            const double c0 = mmd::mmd2_biased(col({0, 1}), col({2, 0.5}));
            const double c1 = mmd::mmd2_biased(col({5, 6}), col({7, 5}));
            return 0.5 * (c0 + c1);
        };
        std::vector<Tensor> tf, sf;
        for (double k : {1.0, 2.0, 3.0}) {
            tf.push_back(Tensor({4, 1}, std::vector<double>{0 * k, 5 * k, 1 * k, 6 * k}));
            sf.push_back(Tensor({4, 1}, std::vector<double>{7 * k, 2 * k, 0.5 * k, 5 * k}));
        }
        std::vector<std::size_t> lt{0, 1, 0, 1}, ls{1, 0, 0, 1};
        const double expect = per_layer(1.0) / 6 + per_layer(2.0) / 3 + per_layer(3.0) / 2;
        CHECK(std::abs(mmd::layered_class_mmd(tf, sf, lt, ls) - expect) < 1e-12);
    }
    SUBCASE("no shared class gives zero") {
        std::vector<Tensor> f{normal(2, 2, rng), normal(2, 2, rng), normal(2, 2, rng)};
        std::vector<std::size_t> lt{0, 0}, ls{1, 1};
        CHECK(mmd::layered_class_mmd(f, f, lt, ls) == 0.0);
    }
    SUBCASE("wrong layer count") {
        std::vector<Tensor> f{normal(2, 2, rng)};
        std::vector<std::size_t> l{0, 0};
        CHECK_THROWS_AS(mmd::layered_class_mmd(f, f, l, l), ContractError);
    }
}

TEST_CASE("tape layered_class_mmd agrees with the pure version and passes grad check") {
    std::mt19937_64 rng(6);
    std::vector<Tensor> tf{normal(6, 3, rng), normal(6, 2, rng), normal(6, 4, rng)};
    std::vector<Tensor> sf{normal(5, 3, rng, 0.4), normal(5, 2, rng, 0.4), normal(5, 4, rng, 0.4)};
    std::vector<std::size_t> lt{0, 1, 2, 0, 1, 1}, ls{1, 0, 0, 1, 3};
    Tape tape;
    std::vector<nn::Var> tv, sv;
    for (auto& t : tf) tv.push_back(tape.constant(t));
    for (auto& s : sf) sv.push_back(tape.constant(s));
    const double v = tape.value(mmd::layered_class_mmd(tape, tv, sv, lt, ls))[0];
    CHECK(std::abs(v - mmd::layered_class_mmd(tf, sf, lt, ls)) < 1e-12);
}

TEST_CASE("transfer loss") {
    std::vector<double> terms{0.2, 0.3};
    CHECK(mmd::transfer_loss(1.0, terms, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(mmd::transfer_loss(0.7, terms, 0.0) == 0.7);
    CHECK_THROWS_AS(mmd::transfer_loss(0.7, terms, -1.0), ContractError);
    Tape tape;
    auto lc = tape.constant(Tensor({1}, 0.7));
    std::vector<nn::Var> m{tape.constant(Tensor({1}, 0.2))};
    CHECK(tape.value(mmd::transfer_loss(tape, lc, m, 0.0))[0] == 0.7);
}
