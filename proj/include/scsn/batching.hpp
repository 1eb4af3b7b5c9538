#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace scsn::data {

// Indices into each branch's pool, one list per branch.
using MultiBatch = std::vector<std::vector<std::size_t>>;

/// Multi-branch batch sequence: every batch holds `batch_per_branch` items
/// of every pool, drawn without replacement from a per-epoch shuffle. An
/// epoch ends when the smallest pool runs out.
class BatchIterator {
public:
    BatchIterator(std::vector<std::size_t> pool_sizes, std::size_t batch_per_branch, std::uint64_t seed);

    std::vector<MultiBatch> next_epoch();
    std::size_t batches_per_epoch() const;

private:
    std::vector<std::size_t> pool_sizes_;
    std::size_t batch_;
    std::mt19937_64 rng_;
};

}  // namespace scsn::data
