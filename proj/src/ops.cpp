#include "scsn/ops.hpp"

#include "scsn/errors.hpp"
#include "scsn/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace scsn::nn {

namespace kp = kernels::parallel;

namespace {

void add_into(std::span<double> dst, std::span<const double> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

// Splits an op input into (batch, per-sample shape) given the unbatched rank.
std::pair<std::size_t, bool> batch_of(const Tensor& t, std::size_t sample_rank, const char* op) {
    if (t.rank() == sample_rank) return {1, false};
    if (t.rank() == sample_rank + 1) return {t.dim(0), true};
    throw ShapeError(std::string(op) + ": unexpected input rank " + std::to_string(t.rank()) + " " +
                     shape_string(t.shape()));
}

}  // namespace

Var conv_time(Tape& tape, Var input, Var kernels, std::size_t stride) {
    const Tensor& x = tape.value(input);
    const Tensor& k = tape.value(kernels);
    if (stride == 0) throw ShapeError("conv_time: stride must be >= 1");
    if (k.rank() != 2) throw ShapeError("conv_time: kernels must be [filters x k], got " + shape_string(k.shape()));
    auto [batch, batched] = batch_of(x, 2, "conv_time");
    kernels::ConvTimeDims d;
    d.batch = batch;
    d.channels = x.dim(batched ? 1 : 0);
    d.time = x.dim(batched ? 2 : 1);
    d.filters = k.dim(0);
    d.kernel = k.dim(1);
    d.stride = stride;
    if (d.kernel > d.time) {
        throw ShapeError("conv_time: kernel length " + std::to_string(d.kernel) + " exceeds signal length " +
                         std::to_string(d.time));
    }
    Shape out_shape{d.filters, d.channels, d.out_time()};
    if (batched) out_shape.insert(out_shape.begin(), batch);
    Tensor y(out_shape);
    kp::conv_time_forward(d, x.values(), k.values(), y.values());
    return tape.record(std::move(y), {input, kernels}, [=](Tape& t, std::span<const double> gy) {
        if (t.requires_grad(kernels))
            kp::conv_time_backward_kernel(d, gy, t.value(input).values(), t.grad(kernels));
        if (t.requires_grad(input)) kp::conv_time_backward_input(d, gy, t.value(kernels).values(), t.grad(input));
    });
}

Var conv_space(Tape& tape, Var input, Var weights) {
    const Tensor& x = tape.value(input);
    const Tensor& w = tape.value(weights);
    if (w.rank() != 3) throw ShapeError("conv_space: weights must be [outputs x filters x channels]");
    auto [batch, batched] = batch_of(x, 3, "conv_space");
    kernels::ConvSpaceDims d;
    d.batch = batch;
    d.filters = x.dim(batched ? 1 : 0);
    d.channels = x.dim(batched ? 2 : 1);
    d.time = x.dim(batched ? 3 : 2);
    d.outputs = w.dim(0);
    if (w.dim(1) != d.filters || w.dim(2) != d.channels) {
        throw ShapeError("conv_space: weights " + shape_string(w.shape()) + " do not match input " +
                         shape_string(x.shape()));
    }
    Shape out_shape{d.outputs, d.time};
    if (batched) out_shape.insert(out_shape.begin(), batch);
    Tensor y(out_shape);
    kp::conv_space_forward(d, x.values(), w.values(), y.values());
    return tape.record(std::move(y), {input, weights}, [=](Tape& t, std::span<const double> gy) {
        if (t.requires_grad(weights))
            kp::conv_space_backward_weight(d, gy, t.value(input).values(), t.grad(weights));
        if (t.requires_grad(input)) kp::conv_space_backward_input(d, gy, t.value(weights).values(), t.grad(input));
    });
}

Var mean_pool(Tape& tape, Var input, std::size_t width, std::size_t stride) {
    const Tensor& x = tape.value(input);
    if (width == 0 || stride == 0) throw ShapeError("mean_pool: width and stride must be >= 1");
    if (x.rank() < 1) throw ShapeError("mean_pool: input must have a time axis");
    kernels::PoolDims d;
    d.time = x.shape().back();
    d.rows = x.size() / d.time;
    d.width = width;
    d.stride = stride;
    if (width > d.time) {
        throw ShapeError("mean_pool: width " + std::to_string(width) + " exceeds length " + std::to_string(d.time));
    }
    Shape out_shape = x.shape();
    out_shape.back() = d.out_time();
    Tensor y(out_shape);
    kp::mean_pool_forward(d, x.values(), y.values());
    return tape.record(std::move(y), {input}, [=](Tape& t, std::span<const double> gy) {
        kp::mean_pool_backward(d, gy, t.grad(input));
    });
}

Var dense(Tape& tape, Var input, Var weights, Var bias) {
    const Tensor& x = tape.value(input);
    const Tensor& w = tape.value(weights);
    const Tensor& b = tape.value(bias);
    if (w.rank() != 2) throw ShapeError("dense: weights must be [out x in]");
    auto [batch, batched] = batch_of(x, 1, "dense");
    kernels::DenseDims d;
    d.batch = batch;
    d.in = x.shape().back();
    d.out = w.dim(0);
    if (w.dim(1) != d.in || b.size() != d.out) {
        throw ShapeError("dense: input " + shape_string(x.shape()) + ", weights " + shape_string(w.shape()) +
                         ", bias " + shape_string(b.shape()) + " disagree");
    }
    Shape out_shape{d.out};
    if (batched) out_shape.insert(out_shape.begin(), batch);
    Tensor y(out_shape);
    kp::dense_forward(d, x.values(), w.values(), b.values(), y.values());
    return tape.record(std::move(y), {input, weights, bias}, [=](Tape& t, std::span<const double> gy) {
        if (t.requires_grad(weights) || t.requires_grad(bias))
            kp::dense_backward_params(d, gy, t.value(input).values(), t.grad(weights), t.grad(bias));
        if (t.requires_grad(input)) kp::dense_backward_input(d, gy, t.value(weights).values(), t.grad(input));
    });
}

Var square(Tape& tape, Var input) {
    Tensor y = tape.value(input);
    y.drop_grad();
    for (double& v : y.values()) v = v * v;
    return tape.record(std::move(y), {input}, [=](Tape& t, std::span<const double> gy) {
        auto x = t.value(input).values();
        auto gx = t.grad(input);
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += 2.0 * x[i] * gy[i];
    });
}

Var log_floor(Tape& tape, Var input) {
    Tensor y = tape.value(input);
    y.drop_grad();
    for (double& v : y.values()) v = std::log(std::max(v, kLogFloor));
    return tape.record(std::move(y), {input}, [=](Tape& t, std::span<const double> gy) {
        auto x = t.value(input).values();
        auto gx = t.grad(input);
        for (std::size_t i = 0; i < gx.size(); ++i)
            if (x[i] > kLogFloor) gx[i] += gy[i] / x[i];
    });
}

Var tanh(Tape& tape, Var input) {
    Tensor y = tape.value(input);
    y.drop_grad();
    for (double& v : y.values()) v = std::tanh(v);
    const std::size_t out_id = tape.size();
    return tape.record(std::move(y), {input}, [=](Tape& t, std::span<const double> gy) {
        auto yv = t.value(Var{out_id}).values();
        auto gx = t.grad(input);
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += (1.0 - yv[i] * yv[i]) * gy[i];
    });
}

Var flatten(Tape& tape, Var input) {
    Tensor y = tape.value(input);
    y.drop_grad();
    if (y.rank() > 1) y.reshape({y.dim(0), y.size() / y.dim(0)});
    return tape.record(std::move(y), {input}, [=](Tape& t, std::span<const double> gy) {
        add_into(t.grad(input), gy);
    });
}

Var gather_rows(Tape& tape, Var input, std::span<const std::size_t> rows) {
    const Tensor& x = tape.value(input);
    if (x.rank() != 2) throw ShapeError("gather_rows: input must be [rows x dim]");
    if (rows.empty()) throw ContractError("gather_rows: empty row selection");
    const std::size_t dim = x.dim(1);
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    Tensor y({idx.size(), dim});
    for (std::size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] >= x.dim(0)) throw ContractError("gather_rows: row index out of range");
        std::copy_n(x.values().data() + idx[r] * dim, dim, y.values().data() + r * dim);
    }
    return tape.record(std::move(y), {input}, [=](Tape& t, std::span<const double> gy) {
        auto gx = t.grad(input);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t j = 0; j < dim; ++j) gx[idx[r] * dim + j] += gy[r * dim + j];
    });
}

Var dropout(Tape& tape, Var input, double rate, bool training, std::mt19937_64& rng) {
    if (rate < 0.0 || rate >= 1.0) throw ParameterError("dropout rate must be in [0, 1)");
    if (!training || rate == 0.0) return input;
    Tensor y = tape.value(input);
    y.drop_grad();
    std::vector<double> mask(y.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double keep = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = u(rng) < rate ? 0.0 : keep;
        y[i] *= mask[i];
    }
    return tape.record(std::move(y), {input}, [=, mask = std::move(mask)](Tape& t, std::span<const double> gy) {
        auto gx = t.grad(input);
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += mask[i] * gy[i];
    });
}

std::vector<double> softmax(std::span<const double> logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) z += (p[i] = std::exp(logits[i] - mx));
    for (double& v : p) v /= z;
    return p;
}

SoftmaxXent softmax_xent(std::span<const double> logits, std::size_t label) {
    if (logits.size() < 2) throw ContractError("softmax_xent: need at least 2 classes");
    if (label >= logits.size()) {
        throw std::out_of_range("softmax_xent: label " + std::to_string(label) + " out of range for " +
                                std::to_string(logits.size()) + " classes");
    }
    const double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double v : logits) z += std::exp(v - mx);
    SoftmaxXent out;
    out.loss = -(logits[label] - mx - std::log(z));
    out.probabilities = softmax(logits);
    return out;
}

Var softmax_xent(Tape& tape, Var logits, std::span<const std::size_t> labels) {
    const Tensor& x = tape.value(logits);
    const std::size_t classes = x.shape().back();
    const std::size_t rows = x.size() / classes;
    if (labels.size() != rows) {
        throw ShapeError("softmax_xent: " + std::to_string(labels.size()) + " labels for " + std::to_string(rows) +
                         " rows");
    }
    std::vector<double> probs(x.size());
    double loss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        auto res = softmax_xent(x.values().subspan(r * classes, classes), labels[r]);
        loss += res.loss;
        std::copy(res.probabilities.begin(), res.probabilities.end(), probs.begin() + r * classes);
    }
    loss /= static_cast<double>(rows);
    std::vector<std::size_t> lab(labels.begin(), labels.end());
    return tape.record(Tensor({1}, {loss}), {logits},
                       [=, probs = std::move(probs)](Tape& t, std::span<const double> gy) {
                           auto gx = t.grad(logits);
                           const double s = gy[0] / static_cast<double>(rows);
                           for (std::size_t r = 0; r < rows; ++r)
                               for (std::size_t c = 0; c < classes; ++c) {
                                   const double target = c == lab[r] ? 1.0 : 0.0;
                                   gx[r * classes + c] += s * (probs[r * classes + c] - target);
                               }
                       });
}

Var sum(Tape& tape, Var input) {
    double s = 0.0;
    for (double v : tape.value(input).values()) s += v;
    return tape.record(Tensor({1}, {s}), {input}, [=](Tape& t, std::span<const double> gy) {
        for (double& g : t.grad(input)) g += gy[0];
    });
}

Var add(Tape& tape, Var a, Var b) {
    const Tensor& x = tape.value(a);
    const Tensor& y = tape.value(b);
    if (x.shape() != y.shape()) throw ShapeError("add: shapes differ");
    Tensor out = x;
    out.drop_grad();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
    return tape.record(std::move(out), {a, b}, [=](Tape& t, std::span<const double> gy) {
        if (t.requires_grad(a)) add_into(t.grad(a), gy);
        if (t.requires_grad(b)) add_into(t.grad(b), gy);
    });
}

Var scale(Tape& tape, Var input, double factor) {
    Tensor out = tape.value(input);
    out.drop_grad();
    for (double& v : out.values()) v *= factor;
    return tape.record(std::move(out), {input}, [=](Tape& t, std::span<const double> gy) {
        auto gx = t.grad(input);
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += factor * gy[i];
    });
}

Var weighted_sum(Tape& tape, std::span<const Var> terms, std::span<const double> weights) {
    if (terms.size() != weights.size()) throw ShapeError("weighted_sum: term/weight count mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Tensor& v = tape.value(terms[i]);
        if (v.size() != 1) throw ShapeError("weighted_sum: terms must be scalars");
        s += weights[i] * v[0];
    }
    std::vector<Var> ts(terms.begin(), terms.end());
    std::vector<double> ws(weights.begin(), weights.end());
    return tape.record(Tensor({1}, {s}), terms, [=](Tape& t, std::span<const double> gy) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (t.requires_grad(ts[i])) t.grad(ts[i])[0] += ws[i] * gy[0];
    });
}

}  // namespace scsn::nn
