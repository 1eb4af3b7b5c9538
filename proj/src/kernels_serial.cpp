#include "scsn/kernels.hpp"

namespace scsn::kernels::serial {

void conv_time_forward(const ConvTimeDims& d, In x, In k, Out y) {
    const std::size_t T = d.out_time();
    for (std::size_t b = 0; b < d.batch; ++b)
        for (std::size_t f = 0; f < d.filters; ++f)
            for (std::size_t c = 0; c < d.channels; ++c)
                for (std::size_t t = 0; t < T; ++t) {
                    const double* xs = &x[(b * d.channels + c) * d.time + t * d.stride];
                    const double* ks = &k[f * d.kernel];
                    double acc = 0.0;
                    for (std::size_t j = 0; j < d.kernel; ++j) acc += ks[j] * xs[j];
                    y[((b * d.filters + f) * d.channels + c) * T + t] = acc;
                }
}

void conv_time_backward_input(const ConvTimeDims& d, In gy, In k, Out gx) {
    const std::size_t T = d.out_time();
    for (std::size_t b = 0; b < d.batch; ++b)
        for (std::size_t c = 0; c < d.channels; ++c)
            for (std::size_t f = 0; f < d.filters; ++f)
                for (std::size_t t = 0; t < T; ++t) {
                    const double g = gy[((b * d.filters + f) * d.channels + c) * T + t];
                    double* gxs = &gx[(b * d.channels + c) * d.time + t * d.stride];
                    for (std::size_t j = 0; j < d.kernel; ++j) gxs[j] += g * k[f * d.kernel + j];
                }
}

void conv_time_backward_kernel(const ConvTimeDims& d, In gy, In x, Out gk) {
    const std::size_t T = d.out_time();
    for (std::size_t b = 0; b < d.batch; ++b)
        for (std::size_t f = 0; f < d.filters; ++f)
            for (std::size_t c = 0; c < d.channels; ++c)
                for (std::size_t t = 0; t < T; ++t) {
                    const double g = gy[((b * d.filters + f) * d.channels + c) * T + t];
                    const double* xs = &x[(b * d.channels + c) * d.time + t * d.stride];
                    for (std::size_t j = 0; j < d.kernel; ++j) gk[f * d.kernel + j] += g * xs[j];
                }
}

void conv_space_forward(const ConvSpaceDims& d, In x, In w, Out y) {
    const std::size_t FC = d.filters * d.channels;
    for (std::size_t b = 0; b < d.batch; ++b)
        for (std::size_t o = 0; o < d.outputs; ++o) {
            double* ys = &y[(b * d.outputs + o) * d.time];
            for (std::size_t t = 0; t < d.time; ++t) ys[t] = 0.0;
            for (std::size_t fc = 0; fc < FC; ++fc) {
                const double wv = w[o * FC + fc];
                const double* xs = &x[(b * FC + fc) * d.time];
                for (std::size_t t = 0; t < d.time; ++t) ys[t] += wv * xs[t];
            }
        }
}

void conv_space_backward_input(const ConvSpaceDims& d, In gy, In w, Out gx) {
    const std::size_t FC = d.filters * d.channels;
    for (std::size_t b = 0; b < d.batch; ++b)
        for (std::size_t fc = 0; fc < FC; ++fc) {
            double* gxs = &gx[(b * FC + fc) * d.time];
            for (std::size_t o = 0; o < d.outputs; ++o) {
                const double wv = w[o * FC + fc];
                const double* gys = &gy[(b * d.outputs + o) * d.time];
                for (std::size_t t = 0; t < d.time; ++t) gxs[t] += wv * gys[t];
            }
        }
}

void conv_space_backward_weight(const ConvSpaceDims& d, In gy, In x, Out gw) {
    const std::size_t FC = d.filters * d.channels;
    for (std::size_t o = 0; o < d.outputs; ++o)
        for (std::size_t fc = 0; fc < FC; ++fc) {
            double acc = gw[o * FC + fc];
            for (std::size_t b = 0; b < d.batch; ++b) {
                const double* gys = &gy[(b * d.outputs + o) * d.time];
                const double* xs = &x[(b * FC + fc) * d.time];
                for (std::size_t t = 0; t < d.time; ++t) acc += gys[t] * xs[t];
            }
            gw[o * FC + fc] = acc;
        }
}

void mean_pool_forward(const PoolDims& d, In x, Out y) {
    const std::size_t T = d.out_time();
    const double inv = 1.0 / static_cast<double>(d.width);
    for (std::size_t r = 0; r < d.rows; ++r)
        for (std::size_t t = 0; t < T; ++t) {
            const double* xs = &x[r * d.time + t * d.stride];
            double acc = 0.0;
            for (std::size_t j = 0; j < d.width; ++j) acc += xs[j];
            y[r * T + t] = acc * inv;
        }
}

void mean_pool_backward(const PoolDims& d, In gy, Out gx) {
    const std::size_t T = d.out_time();
    const double inv = 1.0 / static_cast<double>(d.width);
    for (std::size_t r = 0; r < d.rows; ++r)
        for (std::size_t t = 0; t < T; ++t) {
            const double g = gy[r * T + t] * inv;
            double* gxs = &gx[r * d.time + t * d.stride];
            for (std::size_t j = 0; j < d.width; ++j) gxs[j] += g;
        }
}

void dense_forward(const DenseDims& d, In x, In w, In b, Out y) {
    for (std::size_t n = 0; n < d.batch; ++n)
        for (std::size_t o = 0; o < d.out; ++o) {
            const double* ws = &w[o * d.in];
            const double* xs = &x[n * d.in];
            double acc = 0.0;
            for (std::size_t i = 0; i < d.in; ++i) acc += ws[i] * xs[i];
            y[n * d.out + o] = acc + b[o];
        }
}

void dense_backward_input(const DenseDims& d, In gy, In w, Out gx) {
    for (std::size_t n = 0; n < d.batch; ++n)
        for (std::size_t o = 0; o < d.out; ++o) {
            const double g = gy[n * d.out + o];
            const double* ws = &w[o * d.in];
            double* gxs = &gx[n * d.in];
            for (std::size_t i = 0; i < d.in; ++i) gxs[i] += g * ws[i];
        }
}

void dense_backward_params(const DenseDims& d, In gy, In x, Out gw, Out gb) {
    for (std::size_t o = 0; o < d.out; ++o)
        for (std::size_t n = 0; n < d.batch; ++n) {
            const double g = gy[n * d.out + o];
            const double* xs = &x[n * d.in];
            double* gws = &gw[o * d.in];
            for (std::size_t i = 0; i < d.in; ++i) gws[i] += g * xs[i];
            gb[o] += g;
        }
}

}  // namespace scsn::kernels::serial
