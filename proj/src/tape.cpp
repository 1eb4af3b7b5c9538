#include "scsn/tape.hpp"

#include "scsn/errors.hpp"

namespace scsn::nn {

const Tape::Node& Tape::node(Var v) const {
    if (!v.valid() || v.id >= nodes_.size()) throw StateError("variable is not recorded on this tape");
    return nodes_[v.id];
}

Tape::Node& Tape::node(Var v) {
    if (!v.valid() || v.id >= nodes_.size()) throw StateError("variable is not recorded on this tape");
    return nodes_[v.id];
}

Var Tape::constant(Tensor value) {
    Node n;
    n.owned = std::move(value);
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
}

Var Tape::parameter(Tensor& param) {
    Node n;
    n.param = &param;
    n.needs_grad = true;
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
}

Var Tape::constant_ref(const Tensor& value) {
    Node n;
    n.ref = &value;
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, Backward fn) {
    return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(fn));
}

Var Tape::record(Tensor value, std::span<const Var> inputs, Backward fn) {
    Node n;
    n.owned = std::move(value);
    for (Var in : inputs) n.needs_grad = n.needs_grad || node(in).needs_grad;
    if (n.needs_grad) n.fn = std::move(fn);
    nodes_.push_back(std::move(n));
    return Var{nodes_.size() - 1};
}

const Tensor& Tape::value(Var v) const {
    const Node& n = node(v);
    if (n.param) return *n.param;
    return n.ref ? *n.ref : n.owned;
}

bool Tape::requires_grad(Var v) const { return node(v).needs_grad; }

std::span<double> Tape::grad(Var v) {
    Node& n = node(v);
    if (n.grad.empty()) n.grad.assign(value(v).size(), 0.0);
    return n.grad;
}

std::span<const double> Tape::grad_if_any(Var v) const { return node(v).grad; }

void Tape::backward(Var loss) {
    if (nodes_.empty()) throw StateError("backward called before any forward pass was recorded");
    const Tensor& out = value(loss);
    if (out.size() != 1) throw ContractError("backward requires a scalar loss, got " + shape_string(out.shape()));
    if (!node(loss).needs_grad) return;
    grad(loss)[0] += 1.0;

    for (std::size_t i = loss.id + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.grad.empty()) continue;
        if (n.fn) {
            // The closure may append to other nodes' grads; keep our buffer alive.
            std::vector<double> g = std::move(n.grad);
            n.fn(*this, g);
            nodes_[i].grad = std::move(g);
        } else if (n.param) {
            auto pg = n.param->grad();
            for (std::size_t j = 0; j < pg.size(); ++j) pg[j] += n.grad[j];
        }
    }
}

}  // namespace scsn::nn
