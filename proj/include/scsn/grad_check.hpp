#pragma once

#include "scsn/tape.hpp"

#include <functional>
#include <span>
#include <vector>

namespace scsn::nn {

// Builds a scalar loss from the given input variables.
using LossBuilder = std::function<Var(Tape&, std::span<const Var>)>;

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::vector<std::vector<double>> analytic;
    std::vector<std::vector<double>> numeric;
};

/// Compares reverse-mode gradients against central differences with step
/// `eps` for every element of every input. Relative error per element is
/// |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const LossBuilder& build, std::vector<Tensor> inputs, double eps = 1e-5);

}  // namespace scsn::nn
