#pragma once

// Differentiable layer ops recorded on a Tape. Convolution, pooling and dense
// ops accept an optional leading batch axis: a rank-2 input to conv_time is
// one [channels x time] sample, a rank-3 input is [batch x channels x time].

#include "scsn/tape.hpp"

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace scsn::nn {

enum class LayerKind { TemporalConv, SpatialConv, Square, Log, MeanPool, Dense, Dropout, Softmax };

inline constexpr double kLogFloor = 1e-6;

// [C x T] or [B x C x T] with kernels [F x K] -> [F x C x T'] or [B x F x C x T']
Var conv_time(Tape& tape, Var input, Var kernels, std::size_t stride = 1);
// [F x C x T] or [B x F x C x T] with weights [O x F x C] -> [O x T] or [B x O x T]
Var conv_space(Tape& tape, Var input, Var weights);
// [F x T] or [B x F x T] -> [F x T'] or [B x F x T']
Var mean_pool(Tape& tape, Var input, std::size_t width, std::size_t stride);
// [n] or [B x n] with weights [m x n], bias [m] -> [m] or [B x m]
Var dense(Tape& tape, Var input, Var weights, Var bias);

Var square(Tape& tape, Var input);
// log(max(x, 1e-6)); the gradient is zero where the floor is active.
Var log_floor(Tape& tape, Var input);
Var tanh(Tape& tape, Var input);

// Keeps the leading axis, collapses the rest.
Var flatten(Tape& tape, Var input);
Var gather_rows(Tape& tape, Var input, std::span<const std::size_t> rows);

// Inverted dropout. Identity (no RNG draw) when rate == 0 or !training.
Var dropout(Tape& tape, Var input, double rate, bool training, std::mt19937_64& rng);

// Mean cross-entropy of rows of [B x classes] (or one [classes] vector).
Var softmax_xent(Tape& tape, Var logits, std::span<const std::size_t> labels);

Var sum(Tape& tape, Var input);
Var add(Tape& tape, Var a, Var b);
Var scale(Tape& tape, Var input, double factor);
// Σ weights[i]·terms[i] over scalar terms.
Var weighted_sum(Tape& tape, std::span<const Var> terms, std::span<const double> weights);

struct SoftmaxXent {
    double loss = 0.0;
    std::vector<double> probabilities;
};

std::vector<double> softmax(std::span<const double> logits);
SoftmaxXent softmax_xent(std::span<const double> logits, std::size_t label);

}  // namespace scsn::nn
