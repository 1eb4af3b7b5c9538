#include "scsn/tensor.hpp"

#include "scsn/errors.hpp"

#include <sstream>

namespace scsn::nn {

std::size_t shape_size(const Shape& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

std::string shape_string(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

namespace {
void check_extents(const Shape& shape) {
    for (std::size_t d : shape) {
        if (d == 0) throw ShapeError("tensor extent must be positive: " + shape_string(shape));
    }
}
}  // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
    check_extents(shape_);
    values_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    check_extents(shape_);
    if (shape_size(shape_) != values_.size()) {
        throw ShapeError("value count " + std::to_string(values_.size()) +
                         " does not match shape " + shape_string(shape_));
    }
}

std::span<double> Tensor::grad() {
    if (grad_.size() != values_.size()) grad_.assign(values_.size(), 0.0);
    return grad_;
}

void Tensor::zero_grad() { grad_.assign(values_.size(), 0.0); }

void Tensor::reshape(Shape shape) {
    check_extents(shape);
    if (shape_size(shape) != values_.size()) {
        throw ShapeError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    }
    shape_ = std::move(shape);
}

}  // namespace scsn::nn
