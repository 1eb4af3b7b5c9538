#include "scsn/train.hpp"

#include "scsn/batching.hpp"
#include "scsn/errors.hpp"
#include "scsn/ops.hpp"
#include "scsn/signal.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>

namespace scsn::train {

namespace {

using models::ModelKind;
using nn::Tensor;
using nn::Var;

std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Crops referenced in place: (trial, first sample).
struct CropPool {
    std::vector<const Epoch*> trial;
    std::vector<std::size_t> start;
    std::size_t size() const { return trial.size(); }

    void add(const TrialSet& set, const signal::CropGeometry& g) {
        for (const Epoch& e : set.trials)
            for (std::size_t k = 0; k < g.count; ++k) {
                trial.push_back(&e);
                start.push_back(k * g.stride);
            }
    }
};

Tensor gather(const CropPool& pool, std::span<const std::size_t> idx, std::size_t window,
              std::vector<std::size_t>* labels) {
    const std::size_t C = pool.trial.front()->n_channels;
    Tensor x({idx.size(), C, window});
    if (labels) labels->clear();
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const Epoch& e = *pool.trial[idx[r]];
        for (std::size_t c = 0; c < C; ++c) {
            auto src = e.channel(c).subspan(pool.start[idx[r]], window);
            std::copy(src.begin(), src.end(), x.values().begin() + static_cast<std::ptrdiff_t>((r * C + c) * window));
        }
        if (labels) labels->push_back(e.label);
    }
    return x;
}

std::size_t argmax(std::span<const double> p) {
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

constexpr std::size_t kInferChunk = 256;

double pool_accuracy(const models::Model& model, std::size_t branch, const CropPool& pool, std::size_t window) {
    if (pool.size() == 0) return 0.0;
    std::size_t correct = 0;
    std::vector<std::size_t> idx, labels;
    for (std::size_t s = 0; s < pool.size(); s += kInferChunk) {
        idx.clear();
        for (std::size_t i = s; i < std::min(pool.size(), s + kInferChunk); ++i) idx.push_back(i);
        Tensor probs = models::forward_infer(model, gather(pool, idx, window, &labels), branch);
        const std::size_t k = probs.dim(1);
        for (std::size_t r = 0; r < idx.size(); ++r)
            if (argmax(probs.values().subspan(r * k, k)) == labels[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(pool.size());
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

void TrainConfig::validate() const {
    if (!(adam.lr > 0.0)) throw ParameterError("learning rate must be positive");
    if (max_epochs == 0) throw ParameterError("max_epochs must be positive");
    if (patience > max_epochs) throw ParameterError("patience must not exceed max_epochs");
    if (lambda < 0.0) throw ParameterError("lambda must be non-negative");
    if (batch_per_branch == 0) throw ParameterError("batch size must be positive");
}

TrainResult train(ModelKind kind, const data::Split& split, const TrainConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t N = split.train.size();
    if (N == 0) throw ContractError("split has no training subjects");
    if (kind != ModelKind::Baseline && N < 2) {
        throw ParameterError("multi-branch models need at least 2 training subjects");
    }
    if (split.val.empty() && cfg.patience > 0) {
        throw ParameterError("early stopping (patience > 0) needs a non-empty validation set");
    }
    const std::size_t target = split.target_index;
    const TrialSet& tgt = split.target_train();
    if (tgt.empty()) throw ContractError("target subject has no training trials");
    const auto geo = signal::crop_geometry(tgt.fs, tgt.n_samples(), cfg.win_s, cfg.overlap_s);

    // Sources are topped up to the target's trial count so branches see
    // equally long pools.
    std::vector<TrialSet> sets;
    for (std::size_t i = 0; i < N; ++i) {
        const TrialSet& s = split.train[i].set;
        if (kind != ModelKind::Baseline && i != target && s.size() < tgt.size()) {
            sets.push_back(data::balanced_upsample(s, tgt.size(), mix(cfg.seed, 0x0A5A0000 + i)));
        } else {
            sets.push_back(s);
        }
    }

    std::vector<CropPool> pools;
    std::size_t batch = cfg.batch_per_branch;
    if (kind == ModelKind::Baseline) {
        pools.emplace_back();
        for (const TrialSet& s : sets) pools.back().add(s, geo);
        batch = cfg.batch_per_branch * N;
    } else {
        for (const TrialSet& s : sets) {
            pools.emplace_back();
            pools.back().add(s, geo);
        }
    }
    CropPool val_pool;
    val_pool.add(split.val, geo);

    models::BaselineConfig arch = cfg.arch;
    arch.n_channels = tgt.n_channels();
    arch.n_samples = geo.window;
    arch.n_classes = tgt.n_classes();
    models::Model model = [&] {
        if (kind == ModelKind::Baseline) return models::build_baseline(arch, cfg.seed);
        models::ScsnConfig sc;
        sc.base = arch;
        sc.n_subjects = N;
        sc.common_fc_dims = cfg.common_fc_dims;
        sc.separate_fc_dims = cfg.separate_fc_dims;
        sc.target_index = target;
        return models::build_scsn(sc, cfg.seed, kind);
    }();
    const std::size_t infer_branch = kind == ModelKind::Baseline ? 0 : target;

    std::vector<std::size_t> pool_sizes;
    for (const auto& p : pools) pool_sizes.push_back(p.size());
    data::BatchIterator batches(pool_sizes, batch, mix(cfg.seed, 0xBA7C4));
    std::mt19937_64 dropout_rng(mix(cfg.seed, 0xD4090));
    AdamState adam;
    std::vector<Tensor*> params = model.params().tensors();

    TrainReport report;
    report.model = models::to_string(kind);
    report.regime = N == 1 ? "single" : "multi";
    report.target_subject = split.train[target].subject_id;
    report.train_trials = split.train_size();
    report.val_trials = split.val.size();
    report.test_trials = split.test.size();

    models::ModelParams best_params = model.params();
    double best_acc = -1.0;
    std::size_t best_epoch = 0;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        double loss_sum = 0.0, mmd_sum = 0.0;
        std::size_t steps = 0;
        for (const data::MultiBatch& mb : batches.next_epoch()) {
            std::vector<Tensor> inputs;
            std::vector<std::vector<std::size_t>> labels(mb.size());
            for (std::size_t i = 0; i < mb.size(); ++i) inputs.push_back(gather(pools[i], mb[i], geo.window, &labels[i]));

            nn::Tape tape;
            auto outs = models::forward_train(model, tape, inputs, true, dropout_rng);

            std::size_t rows = 0;
            for (const auto& l : labels) rows += l.size();
            std::vector<Var> xents;
            std::vector<double> shares;
            for (std::size_t i = 0; i < outs.size(); ++i) {
                xents.push_back(nn::softmax_xent(tape, outs[i].logits, labels[i]));
                shares.push_back(static_cast<double>(labels[i].size()) / static_cast<double>(rows));
            }
            Var lc = nn::weighted_sum(tape, xents, shares);
            Var loss = lc;
            double step_mmd = 0.0;
            if (kind == ModelKind::ScsnMmd) {
                std::vector<Var> per_source;
                for (std::size_t i = 0; i < outs.size(); ++i) {
                    if (i == target) continue;
                    per_source.push_back(mmd::layered_class_mmd(tape, outs[target].features, outs[i].features,
                                                                labels[target], labels[i], cfg.mmd));
                    step_mmd += tape.value(per_source.back())[0];
                }
                loss = mmd::transfer_loss(tape, lc, per_source, cfg.lambda);
            }

            if (cfg.on_step) {
                StepRecord rec;
                rec.epoch = epoch;
                rec.step = steps;
                rec.loss = tape.value(loss)[0];
                rec.classification_loss = tape.value(lc)[0];
                rec.mmd_sum = step_mmd;
                rec.labels = labels;
                for (const auto& o : outs) {
                    rec.features.emplace_back();
                    for (Var f : o.features) rec.features.back().push_back(tape.value(f));
                }
                cfg.on_step(rec);
            }

            loss_sum += tape.value(loss)[0];
            mmd_sum += step_mmd;
            ++steps;
            model.params().zero_grad();
            tape.backward(loss);
            adam_step(params, adam, cfg.adam);
        }

        EpochLog log;
        log.epoch = epoch;
        log.train_loss = steps ? loss_sum / static_cast<double>(steps) : 0.0;
        log.mmd_loss = steps ? mmd_sum / static_cast<double>(steps) : 0.0;
        log.val_acc = pool_accuracy(model, infer_branch, val_pool, geo.window);
        report.epochs.push_back(log);
        if (cfg.on_epoch) cfg.on_epoch(epoch, log.train_loss, log.mmd_loss, log.val_acc);

        if (val_pool.size() == 0) {
            best_epoch = epoch;
            best_acc = 0.0;
            continue;
        }
        if (log.val_acc > best_acc) {
            best_acc = log.val_acc;
            best_epoch = epoch;
            best_params = model.params();
        } else if (cfg.patience > 0 && epoch - best_epoch >= cfg.patience) {
            break;
        }
    }
    if (val_pool.size() > 0) model.params() = best_params;
    for (std::size_t i = 0; i < model.params().size(); ++i) model.params().tensor(i).drop_grad();

    report.best_epoch = best_epoch;
    report.best_val_acc = std::max(best_acc, 0.0);
    if (!split.test.empty()) {
        const EvalResult ev = evaluate(model, infer_branch, split.test, cfg.win_s, cfg.overlap_s);
        report.test_crop_accuracy = ev.crop_accuracy;
        report.test_trial_accuracy = ev.trial_accuracy;
    }
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(model), std::move(report)};
}

double crop_accuracy(const models::Model& model, std::size_t branch, const TrialSet& crops) {
    if (crops.empty()) return 0.0;
    CropPool pool;
    pool.add(crops, signal::CropGeometry{crops.n_samples(), 1, 1});
    return pool_accuracy(model, branch, pool, crops.n_samples());
}

void write_epoch_csv(std::ostream& os, const TrainReport& report) {
    os << "epoch,train_loss,mmd_loss,val_acc\n";
    for (const EpochLog& e : report.epochs) {
        os << e.epoch << ',' << fmt("%.10g", e.train_loss) << ',' << fmt("%.10g", e.mmd_loss) << ','
           << fmt("%.6f", e.val_acc) << '\n';
    }
}

void write_summary(std::ostream& os, const TrainReport& report) {
    os << "model=" << report.model << '\n'
       << "regime=" << report.regime << '\n'
       << "subject=" << report.target_subject << '\n'
       << "train_trials=" << report.train_trials << '\n'
       << "val_trials=" << report.val_trials << '\n'
       << "test_trials=" << report.test_trials << '\n'
       << "epochs_run=" << report.epochs.size() << '\n'
       << "best_epoch=" << report.best_epoch << '\n'
       << "best_val_acc=" << fmt("%.6f", report.best_val_acc) << '\n'
       << "test_crop_accuracy=" << fmt("%.6f", report.test_crop_accuracy) << '\n'
       << "test_trial_accuracy=" << fmt("%.6f", report.test_trial_accuracy) << '\n';
}

}  // namespace scsn::train
