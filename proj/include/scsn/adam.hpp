#pragma once

#include "scsn/tensor.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace scsn::train {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    std::size_t step = 0;
};

// One bias-corrected Adam update from each tensor's grad slot. The state is
// sized on first use and must match the parameter list afterwards.
void adam_step(std::span<nn::Tensor* const> params, AdamState& state, const AdamConfig& cfg);

}  // namespace scsn::train
