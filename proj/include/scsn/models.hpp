#pragma once

// Baseline shallow decoder and the Separate-Common-Separate network.
//
// Baseline:  TemporalConv -> SpatialConv -> Square -> MeanPool -> Log -> Dropout -> Dense -> Softmax
// SCSN, per subject i:
//   shallow_i (same chain up to Dropout) -> common block (3 dense + tanh, shared by all subjects)
//   -> separate_i (3 dense + tanh, the MMD-bearing layers) -> classifier_i -> Softmax

#include "scsn/tape.hpp"
#include "scsn/tensor.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace scsn::models {

struct BaselineConfig {
    std::size_t n_channels = 22;
    std::size_t n_samples = 500;
    std::size_t n_classes = 4;
    std::size_t temporal_filters = 40;
    std::size_t temporal_kernel = 25;
    std::size_t pool_width = 75;
    std::size_t pool_stride = 15;
    double dropout = 0.5;

    void validate() const;
    std::size_t conv_length() const { return n_samples - temporal_kernel + 1; }
    std::size_t pooled_length() const { return (conv_length() - pool_width) / pool_stride + 1; }
    std::size_t feature_dim() const { return temporal_filters * pooled_length(); }
};

struct ScsnConfig {
    BaselineConfig base;
    std::size_t n_subjects = 2;
    std::vector<std::size_t> common_fc_dims{128, 128, 128};
    std::vector<std::size_t> separate_fc_dims{64, 64, 64};
    std::size_t target_index = 0;

    void validate() const;
};

enum class ModelKind { Baseline, Scsn, ScsnMmd };
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Named parameter tensors, each owned by exactly one group ("shared" or
/// "subject<i>"). Tensor addresses are stable for the lifetime of the object.
class ModelParams {
public:
    ModelParams() = default;
    ModelParams(const ModelParams& other);
    ModelParams& operator=(const ModelParams& other);
    ModelParams(ModelParams&&) noexcept = default;
    ModelParams& operator=(ModelParams&&) noexcept = default;

    nn::Tensor& add(const std::string& group, const std::string& name, nn::Tensor value);
    nn::Tensor& at(const std::string& name);
    const nn::Tensor& at(const std::string& name) const;
    bool contains(const std::string& name) const { return index_.count(name) > 0; }

    std::size_t size() const { return entries_.size(); }
    const std::string& name(std::size_t i) const { return entries_[i].name; }
    const std::string& group(std::size_t i) const { return entries_[i].group; }
    nn::Tensor& tensor(std::size_t i) { return entries_[i].value; }
    const nn::Tensor& tensor(std::size_t i) const { return entries_[i].value; }

    std::vector<std::string> groups() const;
    std::size_t scalar_count() const;
    std::size_t scalar_count(const std::string& group) const;
    std::vector<nn::Tensor*> tensors();
    void zero_grad();

private:
    struct Entry {
        std::string group;
        std::string name;
        nn::Tensor value;
    };
    std::deque<Entry> entries_;
    std::map<std::string, std::size_t> index_;
};

class Model {
public:
    ModelKind kind() const { return kind_; }
    const ScsnConfig& config() const { return cfg_; }
    std::size_t n_branches() const { return cfg_.n_subjects; }
    std::size_t target_index() const { return cfg_.target_index; }
    ModelParams& params() { return params_; }
    const ModelParams& params() const { return params_; }

    // Group that owns the given branch's private parameters.
    std::string branch_group(std::size_t branch) const;

    friend Model build_baseline(const BaselineConfig& cfg, std::uint64_t seed);
    friend Model build_scsn(const ScsnConfig& cfg, std::uint64_t seed, ModelKind kind);
    friend Model make_model_skeleton(ModelKind kind, const ScsnConfig& cfg);

private:
    ModelKind kind_ = ModelKind::Baseline;
    ScsnConfig cfg_;
    ModelParams params_;
};

Model build_baseline(const BaselineConfig& cfg, std::uint64_t seed);
Model build_scsn(const ScsnConfig& cfg, std::uint64_t seed, ModelKind kind = ModelKind::Scsn);
// Zero-initialised model of the given shape (checkpoint loading).
Model make_model_skeleton(ModelKind kind, const ScsnConfig& cfg);

struct BranchOutput {
    nn::Var logits;
    std::vector<nn::Var> features;  // post-activation outputs of the separate dense layers
};

/// Runs each branch's sub-batch ([rows x channels x samples]) through its own
/// path. `inputs[i]` feeds branch i; an empty tensor is a contract error.
std::vector<BranchOutput> forward_train(Model& model, nn::Tape& tape, std::span<const nn::Tensor> inputs,
                                        bool training, std::mt19937_64& rng);

/// Class probabilities [rows x classes] using only `branch`'s path.
nn::Tensor forward_infer(const Model& model, const nn::Tensor& crops, std::size_t branch);

}  // namespace scsn::models
