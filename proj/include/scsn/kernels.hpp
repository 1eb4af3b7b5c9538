#pragma once

// Inner loops of the convolutional decoder. Each kernel exists twice: a
// plain serial reference and an OpenMP version. The parallel versions split
// work over independent output elements and keep the per-element summation
// order of the reference, so both produce bit-identical results for any
// thread count. Backward kernels accumulate (+=) into their outputs.

#include <cstddef>
#include <span>

namespace scsn::kernels {

// x[batch][channels][time] * k[filters][kernel] -> y[batch][filters][channels][out_time]
struct ConvTimeDims {
    std::size_t batch = 1, channels = 1, time = 1, filters = 1, kernel = 1, stride = 1;
    std::size_t out_time() const { return (time - kernel) / stride + 1; }
};

// x[batch][filters][channels][time] * w[outputs][filters][channels] -> y[batch][outputs][time]
struct ConvSpaceDims {
    std::size_t batch = 1, filters = 1, channels = 1, time = 1, outputs = 1;
};

// x[rows][time] -> y[rows][out_time], window means
struct PoolDims {
    std::size_t rows = 1, time = 1, width = 1, stride = 1;
    std::size_t out_time() const { return (time - width) / stride + 1; }
};

// x[batch][in] , w[out][in], b[out] -> y[batch][out]
struct DenseDims {
    std::size_t batch = 1, in = 1, out = 1;
};

using In = std::span<const double>;
using Out = std::span<double>;

namespace serial {
void conv_time_forward(const ConvTimeDims& d, In x, In k, Out y);
void conv_time_backward_input(const ConvTimeDims& d, In gy, In k, Out gx);
void conv_time_backward_kernel(const ConvTimeDims& d, In gy, In x, Out gk);

void conv_space_forward(const ConvSpaceDims& d, In x, In w, Out y);
void conv_space_backward_input(const ConvSpaceDims& d, In gy, In w, Out gx);
void conv_space_backward_weight(const ConvSpaceDims& d, In gy, In x, Out gw);

void mean_pool_forward(const PoolDims& d, In x, Out y);
void mean_pool_backward(const PoolDims& d, In gy, Out gx);

void dense_forward(const DenseDims& d, In x, In w, In b, Out y);
void dense_backward_input(const DenseDims& d, In gy, In w, Out gx);
void dense_backward_params(const DenseDims& d, In gy, In x, Out gw, Out gb);
}  // namespace serial

namespace parallel {
void conv_time_forward(const ConvTimeDims& d, In x, In k, Out y);
void conv_time_backward_input(const ConvTimeDims& d, In gy, In k, Out gx);
void conv_time_backward_kernel(const ConvTimeDims& d, In gy, In x, Out gk);

void conv_space_forward(const ConvSpaceDims& d, In x, In w, Out y);
void conv_space_backward_input(const ConvSpaceDims& d, In gy, In w, Out gx);
void conv_space_backward_weight(const ConvSpaceDims& d, In gy, In x, Out gw);

void mean_pool_forward(const PoolDims& d, In x, Out y);
void mean_pool_backward(const PoolDims& d, In gy, Out gx);

void dense_forward(const DenseDims& d, In x, In w, In b, Out y);
void dense_backward_input(const DenseDims& d, In gy, In w, Out gx);
void dense_backward_params(const DenseDims& d, In gy, In x, Out gw, Out gb);
}  // namespace parallel

}  // namespace scsn::kernels
