#include "scsn/grad_check.hpp"

#include "scsn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace scsn::nn {

namespace {

double evaluate(const LossBuilder& build, std::vector<Tensor>& inputs) {
    Tape tape;
    std::vector<Var> vars;
    for (Tensor& t : inputs) vars.push_back(tape.parameter(t));
    const Tensor& loss = tape.value(build(tape, vars));
    if (loss.size() != 1) throw ContractError("grad_check: loss must be a scalar, got " + shape_string(loss.shape()));
    return loss[0];
}

}  // namespace

GradCheckResult grad_check(const LossBuilder& build, std::vector<Tensor> inputs, double eps) {
    if (!(eps > 0.0)) throw ParameterError("grad_check: eps must be positive");
    GradCheckResult res;
    {
        for (Tensor& t : inputs) t.zero_grad();
        Tape tape;
        std::vector<Var> vars;
        for (Tensor& t : inputs) vars.push_back(tape.parameter(t));
        Var loss = build(tape, vars);
        if (tape.value(loss).size() != 1) {
            throw ContractError("grad_check: loss must be a scalar, got " + shape_string(tape.value(loss).shape()));
        }
        tape.backward(loss);
        for (Tensor& t : inputs) {
            res.analytic.emplace_back(t.grad().begin(), t.grad().end());
            t.drop_grad();
        }
    }
    for (std::size_t p = 0; p < inputs.size(); ++p) {
        std::vector<double> num(inputs[p].size());
        for (std::size_t i = 0; i < num.size(); ++i) {
            const double orig = inputs[p][i];
            inputs[p][i] = orig + eps;
            const double up = evaluate(build, inputs);
            inputs[p][i] = orig - eps;
            const double down = evaluate(build, inputs);
            inputs[p][i] = orig;
            num[i] = (up - down) / (2.0 * eps);
            const double a = res.analytic[p][i];
            const double denom = std::max({std::abs(a), std::abs(num[i]), 1e-8});
            res.max_rel_error = std::max(res.max_rel_error, std::abs(a - num[i]) / denom);
        }
        res.numeric.push_back(std::move(num));
    }
    return res;
}

}  // namespace scsn::nn
