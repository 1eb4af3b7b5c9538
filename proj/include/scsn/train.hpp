#pragma once

#include "scsn/adam.hpp"
#include "scsn/mmd.hpp"
#include "scsn/models.hpp"
#include "scsn/split.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace scsn::train {

// Per-step snapshot handed to TrainConfig::on_step.
struct StepRecord {
    std::size_t epoch = 0;
    std::size_t step = 0;
    double loss = 0.0;
    double classification_loss = 0.0;
    double mmd_sum = 0.0;                               // Σ_i MMD_i, before lambda
    std::vector<std::vector<nn::Tensor>> features;      // [branch][layer]
    std::vector<std::vector<std::size_t>> labels;       // [branch]
};

struct TrainConfig {
    AdamConfig adam;
    std::size_t max_epochs = 200;
    std::size_t patience = 20;  // 0 disables early stopping
    double lambda = 1.0;
    mmd::MmdConfig mmd;
    std::size_t batch_per_branch = 30;
    std::uint64_t seed = 0;
    double win_s = 2.0;
    double overlap_s = 1.9;

    // Architecture hyperparameters; data-derived extents are filled in by train().
    models::BaselineConfig arch;
    std::vector<std::size_t> common_fc_dims{128, 128, 128};
    std::vector<std::size_t> separate_fc_dims{64, 64, 64};

    std::function<void(const StepRecord&)> on_step;
    std::function<void(std::size_t epoch, double loss, double mmd, double val_acc)> on_epoch;

    void validate() const;
};

struct EpochLog {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double mmd_loss = 0.0;
    double val_acc = 0.0;
};

struct TrainReport {
    std::string model;
    std::string regime;  // "single" or "multi"
    std::string target_subject;
    std::size_t train_trials = 0, val_trials = 0, test_trials = 0;
    std::vector<EpochLog> epochs;
    std::size_t best_epoch = 0;
    double best_val_acc = 0.0;
    double test_crop_accuracy = 0.0;
    double test_trial_accuracy = 0.0;
    double wall_time_s = 0.0;
};

struct TrainResult {
    models::Model model;
    TrainReport report;
};

/// Trains on `split`. Baseline pools every training subject into one stream
/// of batches of batch_per_branch * N crops; the SCSN variants upsample the
/// sources to the target's size and draw batch_per_branch crops per branch.
TrainResult train(models::ModelKind kind, const data::Split& split, const TrainConfig& cfg);

struct EvalResult {
    double crop_accuracy = 0.0;
    double trial_accuracy = 0.0;
    std::size_t n_crops = 0;
    std::size_t n_trials = 0;
};

// Predicted class per crop for a [crops x channels x samples] tensor.
using CropPredictor = std::function<std::vector<std::size_t>(const nn::Tensor&)>;

/// Crops each trial, predicts every crop, and scores crops and majority-voted
/// trials (ties go to the lowest class index).
EvalResult evaluate(const CropPredictor& predict, const TrialSet& test, double win_s, double overlap_s);
EvalResult evaluate(const models::Model& model, std::size_t branch, const TrialSet& test, double win_s,
                    double overlap_s);

// Crop-level accuracy of `branch` on a pre-cropped set.
double crop_accuracy(const models::Model& model, std::size_t branch, const TrialSet& crops);

void write_epoch_csv(std::ostream& os, const TrainReport& report);
void write_summary(std::ostream& os, const TrainReport& report);

}  // namespace scsn::train
