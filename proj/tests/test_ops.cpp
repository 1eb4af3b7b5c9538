#include "scsn/errors.hpp"
#include "scsn/grad_check.hpp"
#include "scsn/ops.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace scsn;
using nn::Tape;
using nn::Tensor;
using nn::Var;

namespace {

Tensor random_tensor(nn::Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(std::move(shape));
    std::uniform_real_distribution<double> u(lo, hi);
    for (double& v : t.values()) v = u(rng);
    return t;
}

Tensor eval1(const Tensor& x, const std::function<Var(Tape&, Var)>& op) {
    Tape tape;
    return tape.value(op(tape, tape.constant(x)));
}

// Loss = Σ r ⊙ f(inputs) with fixed random r, so every output element matters.
nn::LossBuilder weighted(std::function<Var(Tape&, std::span<const Var>)> f, std::uint64_t seed) {
    return [f, seed](Tape& tape, std::span<const Var> in) {
        Var y = f(tape, in);
        std::mt19937_64 rng(seed);
        Tensor r = random_tensor(tape.value(y).shape(), rng);
        Var prod = tape.record(
            [&] {
                Tensor out = tape.value(y);
                for (std::size_t i = 0; i < out.size(); ++i) out[i] *= r[i];
                return out;
            }(),
            {y}, [y, r](Tape& t, std::span<const double> g) {
                auto gy = t.grad(y);
                for (std::size_t i = 0; i < gy.size(); ++i) gy[i] += g[i] * r[i];
            });
        return nn::sum(tape, prod);
    };
}

}  // namespace

TEST_CASE("conv_time examples") {
    Tensor x({1, 5}, std::vector<double>{1, 2, 3, 4, 5});
    Tape tape;
    auto y = nn::conv_time(tape, tape.constant(x), tape.constant(Tensor({1, 1}, 1.0)));
    CHECK(tape.value(y).storage() == std::vector<double>{1, 2, 3, 4, 5});

    Tape t2;
    auto y2 = nn::conv_time(t2, t2.constant(Tensor({1, 4}, std::vector<double>{1, 2, 3, 4})),
                            t2.constant(Tensor({1, 2}, std::vector<double>{1, -1})));
    CHECK(t2.value(y2).storage() == std::vector<double>{-1, -1, -1});
    CHECK(t2.value(y2).shape() == nn::Shape{1, 1, 3});

    Tape t3;
    auto y3 = nn::conv_time(t3, t3.constant(x), t3.constant(Tensor({1, 3}, 1.0)), 2);
    CHECK(t3.value(y3).dim(2) == 2);
}

TEST_CASE("conv_space examples") {
    Tape tape;
    Tensor x({1, 2, 3}, std::vector<double>{1, 1, 1, 2, 2, 2});
    auto y = nn::conv_space(tape, tape.constant(x), tape.constant(Tensor({1, 1, 2}, 1.0)));
    CHECK(tape.value(y).storage() == std::vector<double>{3, 3, 3});
    auto z = nn::conv_space(tape, tape.constant(x), tape.constant(Tensor({1, 1, 2}, 0.0)));
    for (double v : tape.value(z).values()) CHECK(v == 0.0);
    std::mt19937_64 rng(3);
    auto w = nn::conv_space(tape, tape.constant(random_tensor({3, 2, 7}, rng)),
                            tape.constant(random_tensor({4, 3, 2}, rng)));
    CHECK(tape.value(w).shape() == nn::Shape{4, 7});
}

TEST_CASE("mean_pool examples") {
    auto pool = [](const Tensor& x, std::size_t w, std::size_t s) {
        return eval1(x, [&](Tape& t, Var v) { return nn::mean_pool(t, v, w, s); });
    };
    CHECK(pool(Tensor({1, 4}, std::vector<double>{1, 2, 3, 4}), 2, 2).storage() == std::vector<double>{1.5, 3.5});
    const Tensor flat = pool(Tensor({2, 9}, 4.25), 3, 2);
    for (double v : flat.values()) CHECK(v == 4.25);
    auto g = pool(Tensor({1, 4}, std::vector<double>{1, 2, 3, 6}), 4, 1);
    CHECK(g.size() == 1);
    CHECK(g[0] == 3.0);
}

TEST_CASE("dense examples") {
    Tape tape;
    auto x = tape.constant(Tensor({2}, std::vector<double>{1, 1}));
    auto y = nn::dense(tape, x, tape.constant(Tensor({2, 2}, std::vector<double>{1, 2, 3, 4})),
                       tape.constant(Tensor({2}, 0.0)));
    CHECK(tape.value(y).storage() == std::vector<double>{3, 7});
    auto id = nn::dense(tape, tape.constant(Tensor({2}, std::vector<double>{-3, 5})),
                        tape.constant(Tensor({2, 2}, std::vector<double>{1, 0, 0, 1})), tape.constant(Tensor({2}, 0.0)));
    CHECK(tape.value(id).storage() == std::vector<double>{-3, 5});
    auto b = nn::dense(tape, x, tape.constant(Tensor({3, 2}, 0.0)),
                       tape.constant(Tensor({3}, std::vector<double>{1, -2, 0.5})));
    CHECK(tape.value(b).storage() == std::vector<double>{1, -2, 0.5});
}

TEST_CASE("shape errors") {
    Tape tape;
    auto x = tape.constant(Tensor({2, 5}, 1.0));
    CHECK_THROWS_AS(nn::conv_time(tape, x, tape.constant(Tensor({1, 6}, 1.0))), ShapeError);
    CHECK_THROWS_AS(nn::conv_space(tape, tape.constant(Tensor({1, 3, 4}, 1.0)), tape.constant(Tensor({1, 1, 2}, 1.0))),
                    ShapeError);
    CHECK_THROWS_AS(nn::mean_pool(tape, x, 6, 1), ShapeError);
    CHECK_THROWS_AS(nn::dense(tape, x, tape.constant(Tensor({2, 4}, 1.0)), tape.constant(Tensor({2}, 0.0))),
                    ShapeError);
}

TEST_CASE("shape laws hold over random shapes") {
    std::mt19937_64 rng(5);
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    for (int i = 0; i < 40; ++i) {
        const std::size_t B = pick(1, 3), C = pick(1, 4), T = pick(6, 30), F = pick(1, 4), K = pick(1, 6),
                          S = pick(1, 3), O = pick(1, 3);
        Tape tape;
        auto y = nn::conv_time(tape, tape.constant(random_tensor({B, C, T}, rng)),
                               tape.constant(random_tensor({F, K}, rng)), S);
        const std::size_t Tp = (T - K) / S + 1;
        CHECK(tape.value(y).shape() == nn::Shape{B, F, C, Tp});
        auto z = nn::conv_space(tape, y, tape.constant(random_tensor({O, F, C}, rng)));
        CHECK(tape.value(z).shape() == nn::Shape{B, O, Tp});
        const std::size_t W = pick(1, Tp), PS = pick(1, 3);
        auto p = nn::mean_pool(tape, z, W, PS);
        CHECK(tape.value(p).shape() == nn::Shape{B, O, (Tp - W) / PS + 1});
        auto f = nn::flatten(tape, p);
        CHECK(tape.value(f).shape() == nn::Shape{B, O * ((Tp - W) / PS + 1)});
    }
}

TEST_CASE("softmax cross-entropy") {
    auto r = nn::softmax_xent(std::vector<double>{0, 0, 0, 0}, 1);
    for (double p : r.probabilities) CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.loss == doctest::Approx(std::log(4.0)).epsilon(1e-14));

    auto big = nn::softmax_xent(std::vector<double>{1000, 0}, 0);
    CHECK(std::isfinite(big.loss));
    CHECK(big.probabilities[0] == doctest::Approx(1.0));
    CHECK(big.probabilities[1] < 1e-300);

    // -log(e^3 / (e^1 + e^2 + e^3)), evaluated independently
    CHECK(std::abs(nn::softmax_xent(std::vector<double>{1, 2, 3}, 2).loss - 0.40760596444437967) < 1e-14);

    CHECK_THROWS_AS(nn::softmax_xent(std::vector<double>{1, 2}, 2), std::out_of_range);
    CHECK_THROWS_AS(nn::softmax_xent(std::vector<double>{1}, 0), ContractError);
}

TEST_CASE("softmax sums to one and ignores constant shifts") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 5.0);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> z(2 + i % 7);
        for (double& v : z) v = g(rng);
        auto p = nn::softmax(z);
        double s = 0.0;
        for (double v : p) {
            CHECK(v > 0.0);
            s += v;
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
        for (double& v : z) v += 17.3;
        auto q = nn::softmax(z);
        for (std::size_t j = 0; j < p.size(); ++j) CHECK(std::abs(p[j] - q[j]) < 1e-10);
    }
}

TEST_CASE("dropout") {
    std::mt19937_64 rng(1);
    Tape tape;
    auto x = tape.constant(Tensor({1000}, 1.0));
    CHECK(nn::dropout(tape, x, 0.0, true, rng).id == x.id);
    CHECK(nn::dropout(tape, x, 0.5, false, rng).id == x.id);
    auto y = nn::dropout(tape, x, 0.5, true, rng);
    std::size_t kept = 0;
    for (double v : tape.value(y).values()) {
        CHECK((v == 0.0 || v == 2.0));
        kept += v != 0.0;
    }
    CHECK(kept > 400);
    CHECK(kept < 600);
    CHECK_THROWS_AS(nn::dropout(tape, x, 1.0, true, rng), ParameterError);
}

TEST_CASE("gradient checks per layer op") {
    std::mt19937_64 rng(21);
    SUBCASE("dense") {
        auto r = nn::grad_check(weighted([](Tape& t, auto in) { return nn::dense(t, in[0], in[1], in[2]); }, 1),
                                {random_tensor({3, 5}, rng), random_tensor({4, 5}, rng), random_tensor({4}, rng)});
        CHECK(r.max_rel_error < 1e-4);
    }
    SUBCASE("conv_time") {
        auto r = nn::grad_check(weighted([](Tape& t, auto in) { return nn::conv_time(t, in[0], in[1], 2); }, 2),
                                {random_tensor({2, 3, 11}, rng), random_tensor({2, 4}, rng)});
        CHECK(r.max_rel_error < 1e-4);
    }
    SUBCASE("conv_space") {
        auto r = nn::grad_check(weighted([](Tape& t, auto in) { return nn::conv_space(t, in[0], in[1]); }, 3),
                                {random_tensor({2, 3, 4, 5}, rng), random_tensor({2, 3, 4}, rng)});
        CHECK(r.max_rel_error < 1e-4);
    }
    SUBCASE("mean_pool") {
        auto r = nn::grad_check(weighted([](Tape& t, auto in) { return nn::mean_pool(t, in[0], 3, 2); }, 4),
                                {random_tensor({2, 3, 9}, rng)});
        CHECK(r.max_rel_error < 1e-4);
    }
    SUBCASE("square, log, tanh") {
        auto r = nn::grad_check(
            weighted([](Tape& t, auto in) { return nn::tanh(t, nn::log_floor(t, nn::square(t, in[0]))); }, 5),
            {random_tensor({4, 6}, rng, 0.2, 2.0)});
        CHECK(r.max_rel_error < 1e-4);
    }
    SUBCASE("softmax cross-entropy") {
        std::vector<std::size_t> labels{0, 2, 1, 2};
        auto r = nn::grad_check([&](Tape& t, auto in) { return nn::softmax_xent(t, in[0], labels); },
                                {random_tensor({4, 3}, rng, -3, 3)});
        CHECK(r.max_rel_error < 1e-4);
    }
}

TEST_CASE("square activation has exact zero gradient at zero") {
    Tensor w({3}, 0.0);
    Tape tape;
    tape.backward(nn::sum(tape, nn::square(tape, tape.parameter(w))));
    for (double g : w.grad()) CHECK(g == 0.0);
}

TEST_CASE("log floor gradient is zero below the floor") {
    Tensor w({2}, std::vector<double>{1e-9, 2.0});
    Tape tape;
    auto y = nn::log_floor(tape, tape.parameter(w));
    CHECK(tape.value(y)[0] == doctest::Approx(std::log(nn::kLogFloor)));
    tape.backward(nn::sum(tape, y));
    CHECK(w.grad()[0] == 0.0);
    CHECK(w.grad()[1] == doctest::Approx(0.5));
}

TEST_CASE("grad_check rejects a non-scalar loss") {
    CHECK_THROWS_AS(nn::grad_check([](Tape&, auto in) { return in[0]; }, {Tensor({2}, 1.0)}), ContractError);
}

TEST_CASE("forward pass is bit-deterministic") {
    std::mt19937_64 rng(4);
    Tensor x = random_tensor({2, 3, 20}, rng), k = random_tensor({4, 5}, rng), w = random_tensor({4, 4, 3}, rng);
    auto run = [&] {
        Tape tape;
        auto y = nn::conv_space(tape, nn::conv_time(tape, tape.constant(x), tape.constant(k)), tape.constant(w));
        return tape.value(nn::log_floor(tape, nn::mean_pool(tape, nn::square(tape, y), 5, 3)));
    };
    CHECK(run() == run());
}
