#pragma once

#include "scsn/tensor.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace scsn::nn {

/// Handle to a value recorded on a Tape.
struct Var {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    std::size_t id = npos;
    bool valid() const { return id != npos; }
};

/// Records a forward computation and replays it in reverse to fill the
/// gradient slots of bound parameter tensors.
///
/// Parameters are bound by reference and must outlive the tape. Nodes that
/// depend on no parameter are marked as not requiring a gradient and are
/// skipped during the reverse sweep.
class Tape {
public:
    using Backward = std::function<void(Tape&, std::span<const double> out_grad)>;

    Var constant(Tensor value);
    Var parameter(Tensor& param);
    // Read-only view of an external tensor; never receives a gradient.
    Var constant_ref(const Tensor& value);

    // Appends an op result. `inputs` decides whether the node needs a gradient.
    Var record(Tensor value, std::initializer_list<Var> inputs, Backward fn);
    Var record(Tensor value, std::span<const Var> inputs, Backward fn);

    const Tensor& value(Var v) const;
    bool requires_grad(Var v) const;
    // Gradient buffer of a node, allocated (zeroed) on first access.
    std::span<double> grad(Var v);
    std::span<const double> grad_if_any(Var v) const;

    // Reverse sweep from a scalar node; adds into each bound parameter's grad.
    void backward(Var loss);

    std::size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }

private:
    struct Node {
        Tensor owned;
        Tensor* param = nullptr;
        const Tensor* ref = nullptr;
        std::vector<double> grad;
        Backward fn;
        bool needs_grad = false;
    };
    const Node& node(Var v) const;
    Node& node(Var v);

    std::vector<Node> nodes_;
};

}  // namespace scsn::nn
