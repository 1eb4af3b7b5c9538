#pragma once

// Maximum mean discrepancy between feature batches, its class-matched and
// layer-weighted composition, and the combined transfer loss
//     L = L_c + lambda * sum_i MMD_i^2(X_si, X_t).
//
// Feature sets are [rows x dim] tensors. The kernel is
//     k(a, b) = exp(-|a - b|^2 / (2 * sigma2))
// and MMD^2 uses the biased (V-statistic) estimator, which stays defined
// for singleton sets.

#include "scsn/tape.hpp"
#include "scsn/tensor.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace scsn::mmd {

using nn::Tensor;
using nn::Var;

enum class BandwidthRule { MeanPairwiseL2, Fixed };

struct KernelSpec {
    BandwidthRule rule = BandwidthRule::MeanPairwiseL2;
    double sigma2 = 1.0;  // used when rule == Fixed
};

struct MmdConfig {
    double lambda = 1.0;
    std::array<double, 3> layer_weights{1.0 / 6.0, 1.0 / 3.0, 1.0 / 2.0};
    bool class_matched = true;

    void validate() const;
};

/// Mean Euclidean distance over all unordered pairs of distinct rows of
/// X ∪ Y. Falls back to 1 when every point coincides.
double bandwidth_mean_l2(const Tensor& x, const Tensor& y);

double rbf(std::span<const double> a, std::span<const double> b, double sigma2);

struct Mmd2Value {
    double value = 0.0;
    double sigma2 = 1.0;
    std::vector<double> grad_x;  // d value / d X, same layout as X
    std::vector<double> grad_y;
};

double mmd2_biased(const Tensor& x, const Tensor& y, const KernelSpec& kernel = {});
// Same value plus gradients, including the path through a data-driven sigma2.
Mmd2Value mmd2_biased_with_grad(const Tensor& x, const Tensor& y, const KernelSpec& kernel = {});

/// Σ_l w_l · mean_c MMD²(target_l[label c], source_l[label c]) over classes
/// present in both batches; 0 when no class is shared.
double layered_class_mmd(std::span<const Tensor> target_feats, std::span<const Tensor> source_feats,
                         std::span<const std::size_t> target_labels, std::span<const std::size_t> source_labels,
                         const MmdConfig& cfg = {});

double transfer_loss(double classification_loss, std::span<const double> per_source_mmd, double lambda);

// Differentiable counterparts recorded on a tape.
Var mmd2_biased(nn::Tape& tape, Var x, Var y, const KernelSpec& kernel = {});
Var layered_class_mmd(nn::Tape& tape, std::span<const Var> target_feats, std::span<const Var> source_feats,
                      std::span<const std::size_t> target_labels, std::span<const std::size_t> source_labels,
                      const MmdConfig& cfg = {});
Var transfer_loss(nn::Tape& tape, Var classification_loss, std::span<const Var> per_source_mmd, double lambda);

}  // namespace scsn::mmd
