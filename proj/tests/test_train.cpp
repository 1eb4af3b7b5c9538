#include "scsn/adam.hpp"
#include "scsn/errors.hpp"
#include "scsn/split.hpp"
#include "scsn/synth.hpp"
#include "scsn/train.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace scsn;
using models::ModelKind;

TEST_CASE("adam step") {
    nn::Tensor w({1}, 1.0);
    train::AdamState st;
    train::AdamConfig cfg;
    cfg.lr = 0.1;
    std::vector<nn::Tensor*> params{&w};
    w.grad()[0] = 2.0 * w[0];
    train::adam_step(params, st, cfg);
    CHECK(std::abs(w[0] - 0.9) < 1e-8);

    nn::Tensor z({3}, std::vector<double>{1, 2, 3});
    train::AdamState s2;
    std::vector<nn::Tensor*> zp{&z};
    z.zero_grad();
    train::adam_step(zp, s2, cfg);
    CHECK(z.storage() == std::vector<double>{1, 2, 3});

    auto run = [] {
        nn::Tensor p({2}, std::vector<double>{0.5, -1.5});
        train::AdamState s;
        std::vector<nn::Tensor*> ps{&p};
        for (int i = 0; i < 20; ++i) {
            p.grad()[0] = 2 * p[0];
            p.grad()[1] = std::sin(p[1]);
            train::adam_step(ps, s, {});
        }
        return p.storage();
    };
    CHECK(run() == run());

    nn::Tensor other({2}, 0.0);
    std::vector<nn::Tensor*> wrong{&other, &w};
    CHECK_THROWS_AS(train::adam_step(wrong, st, cfg), ContractError);
}

namespace {

std::vector<SubjectDataset> easy_data(std::size_t subjects, std::size_t classes, double shift) {
    data::SynthConfig c;
    c.n_subjects = subjects;
    c.n_sessions = 2;
    c.n_trials = 40;
    c.n_channels = 4;
    c.fs = 128;
    c.duration_s = 1.5;
    c.n_classes = classes;
    c.shift_strength = shift;
    c.snr = 5;
    c.seed = 3;
    return data::synth_multisubject(c);
}

data::Split easy_split(std::size_t subjects, std::size_t classes = 2, double shift = 0.0) {
    return data::make_splits(easy_data(subjects, classes, shift),
                             {"S01", 10, data::parse_range("10:20"), data::parse_range("20:40")});
}

train::TrainConfig small_cfg() {
    train::TrainConfig cfg;
    cfg.max_epochs = 6;
    cfg.patience = 0;
    cfg.batch_per_branch = 10;
    cfg.seed = 5;
    cfg.win_s = 1.0;
    cfg.overlap_s = 0.75;
    cfg.arch.temporal_filters = 4;
    cfg.arch.temporal_kernel = 9;
    cfg.arch.pool_width = 24;
    cfg.arch.pool_stride = 8;
    cfg.arch.dropout = 0.2;
    cfg.common_fc_dims = {16, 16, 16};
    cfg.separate_fc_dims = {8, 8, 8};
    return cfg;
}

}  // namespace

TEST_CASE("separable two-class data is learned") {
    auto cfg = small_cfg();
    cfg.max_epochs = 50;
    cfg.patience = 10;
    cfg.adam.lr = 3e-3;
    const auto res = train::train(ModelKind::Baseline, easy_split(1).single_subject(), cfg);
    CHECK(res.report.best_val_acc >= 0.95);
    CHECK(res.report.regime == "single");
    CHECK(res.report.epochs.size() <= 50);
}

TEST_CASE("training is deterministic") {
    const auto split = easy_split(2);
    const auto a = train::train(ModelKind::Scsn, split, small_cfg());
    const auto b = train::train(ModelKind::Scsn, split, small_cfg());
    REQUIRE(a.report.epochs.size() == b.report.epochs.size());
    for (std::size_t i = 0; i < a.report.epochs.size(); ++i) {
        CHECK(a.report.epochs[i].train_loss == b.report.epochs[i].train_loss);
        CHECK(a.report.epochs[i].val_acc == b.report.epochs[i].val_acc);
    }
    for (std::size_t i = 0; i < a.model.params().size(); ++i) CHECK(a.model.params().tensor(i) == b.model.params().tensor(i));
}

TEST_CASE("scsn-mmd with zero lambda reproduces scsn") {
    const auto split = easy_split(3, 2, 0.5);
    auto cfg = small_cfg();
    cfg.lambda = 0.0;
    const auto plain = train::train(ModelKind::Scsn, split, cfg);
    const auto mmd0 = train::train(ModelKind::ScsnMmd, split, cfg);
    REQUIRE(plain.report.epochs.size() == mmd0.report.epochs.size());
    for (std::size_t i = 0; i < plain.report.epochs.size(); ++i) {
        CHECK(plain.report.epochs[i].train_loss == mmd0.report.epochs[i].train_loss);
        CHECK(plain.report.epochs[i].val_acc == mmd0.report.epochs[i].val_acc);
        CHECK(mmd0.report.epochs[i].mmd_loss >= 0.0);
    }
    CHECK(plain.report.test_trial_accuracy == mmd0.report.test_trial_accuracy);
    CHECK(plain.report.test_crop_accuracy == mmd0.report.test_crop_accuracy);
}

TEST_CASE("step hook sees per-branch features and labels") {
    const auto split = easy_split(2);
    auto cfg = small_cfg();
    cfg.max_epochs = 1;
    std::size_t steps = 0;
    cfg.on_step = [&](const train::StepRecord& r) {
        ++steps;
        CHECK(r.features.size() == 2);
        CHECK(r.features[0].size() == 3);
        CHECK(r.labels[1].size() == 10);
        CHECK(r.mmd_sum >= 0.0);
    };
    train::train(ModelKind::ScsnMmd, split, cfg);
    CHECK(steps > 0);
}

TEST_CASE("training parameter errors") {
    auto cfg = small_cfg();
    CHECK_THROWS_AS(train::train(ModelKind::Scsn, easy_split(2).single_subject(), cfg), ParameterError);
    auto no_val = data::make_splits(easy_data(2, 2, 0.0), {"S01", 10, {10, 10}, {20, 40}});
    cfg.patience = 3;
    CHECK_THROWS_AS(train::train(ModelKind::Baseline, no_val, cfg), ParameterError);
    cfg = small_cfg();
    cfg.lambda = -1;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("evaluate") {
    TrialSet test;
    test.subject_id = "S01";
    test.fs = 10;
    test.channel_names = {"C3"};
    test.class_names = {"a", "b", "c", "d"};
    for (int t = 0; t < 5; ++t) test.trials.push_back({1, 20, std::vector<float>(20, 0.0f), 0, "S01", 10});

    auto zero = [](const nn::Tensor& x) { return std::vector<std::size_t>(x.dim(0), 0); };
    auto r = train::evaluate(zero, test, 1.0, 0.5);
    CHECK(r.crop_accuracy == 1.0);
    CHECK(r.trial_accuracy == 1.0);
    CHECK(r.n_crops == 15);

    std::mt19937_64 rng(1);
    auto random4 = [&](const nn::Tensor& x) {
        std::vector<std::size_t> out(x.dim(0));
        for (auto& v : out) v = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        return out;
    };
    TrialSet big = test;
    big.trials.assign(200, test.trials[0]);
    for (std::size_t t = 0; t < big.trials.size(); ++t) big.trials[t].label = t % 4;
    const auto rr = train::evaluate(random4, big, 0.2, 0.1);  // 19 crops per trial
    CHECK(rr.n_crops >= 2000);
    CHECK(std::abs(rr.crop_accuracy - 0.25) <= 0.03);

    auto alternate = [](const nn::Tensor& x) {
        std::vector<std::size_t> out(x.dim(0));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i % 2 ? 0 : 1;
        return out;
    };
    const auto one = train::evaluate(alternate, test, 2.0, 0.0);
    CHECK(one.crop_accuracy == one.trial_accuracy);

    // 4 crops voting 1,0,1,0: tie goes to class 0.
    const auto tie = train::evaluate(alternate, test, 0.5, 0.0);
    CHECK(tie.trial_accuracy == 1.0);
    CHECK(tie.crop_accuracy == 0.5);

    CHECK_THROWS_AS(train::evaluate(zero, test.empty_like(), 1.0, 0.5), ContractError);
}

TEST_CASE("summary and epoch csv") {
    train::TrainReport r;
    r.model = "scsn";
    r.regime = "multi";
    r.target_subject = "S01";
    r.epochs.push_back({1, 1.25, 0.0, 0.5});
    r.test_trial_accuracy = 0.75;
    std::ostringstream s, c;
    train::write_summary(s, r);
    train::write_epoch_csv(c, r);
    CHECK(s.str().find("test_trial_accuracy=0.750000\n") != std::string::npos);
    CHECK(s.str().find("wall") == std::string::npos);
    CHECK(c.str() == "epoch,train_loss,mmd_loss,val_acc\n1,1.25,0,0.500000\n");
}
