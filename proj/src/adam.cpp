#include "scsn/adam.hpp"

#include "scsn/errors.hpp"

#include <cmath>

namespace scsn::train {

void adam_step(std::span<nn::Tensor* const> params, AdamState& state, const AdamConfig& cfg) {
    if (!(cfg.lr > 0.0)) throw ParameterError("learning rate must be positive");
    if (state.m.empty() && state.step == 0) {
        for (nn::Tensor* p : params) {
            state.m.emplace_back(p->size(), 0.0);
            state.v.emplace_back(p->size(), 0.0);
        }
    }
    if (state.m.size() != params.size() || state.v.size() != params.size()) {
        throw ContractError("Adam state holds " + std::to_string(state.m.size()) + " tensors, got " +
                            std::to_string(params.size()) + " parameters");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (state.m[i].size() != params[i]->size() || state.v[i].size() != params[i]->size()) {
            throw ContractError("Adam state shape mismatch for parameter " + std::to_string(i));
        }
    }
    ++state.step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        nn::Tensor& p = *params[i];
        if (!p.has_grad()) continue;
        auto g = p.grad();
        auto& m = state.m[i];
        auto& v = state.v[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            const double mhat = m[j] / c1;
            const double vhat = v[j] / c2;
            p[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
    }
}

}  // namespace scsn::train
