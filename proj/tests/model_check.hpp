#pragma once

// Finite-difference check of a loss over every parameter of a model.

#include "scsn/models.hpp"
#include "scsn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace scsn::testing {

// Builds the scalar loss on `tape` from the model's current parameters.
using ModelLoss = std::function<nn::Var(models::Model&, nn::Tape&)>;

inline double model_grad_check(models::Model& model, const ModelLoss& loss, double eps = 1e-5) {
    model.params().zero_grad();
    {
        nn::Tape tape;
        tape.backward(loss(model, tape));
    }
    auto eval = [&] {
        nn::Tape tape;
        return tape.value(loss(model, tape))[0];
    };
    double worst = 0.0;
    for (std::size_t p = 0; p < model.params().size(); ++p) {
        nn::Tensor& t = model.params().tensor(p);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double keep = t[i];
            t[i] = keep + eps;
            const double up = eval();
            t[i] = keep - eps;
            const double down = eval();
            t[i] = keep;
            const double numeric = (up - down) / (2.0 * eps);
            const double analytic = t.grad()[i];
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            worst = std::max(worst, std::abs(analytic - numeric) / denom);
        }
    }
    return worst;
}

}  // namespace scsn::testing
