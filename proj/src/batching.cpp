#include "scsn/batching.hpp"

#include "scsn/errors.hpp"

#include <algorithm>
#include <numeric>

namespace scsn::data {

BatchIterator::BatchIterator(std::vector<std::size_t> pool_sizes, std::size_t batch_per_branch, std::uint64_t seed)
    : pool_sizes_(std::move(pool_sizes)), batch_(batch_per_branch), rng_(seed) {
    if (pool_sizes_.empty()) throw ContractError("batch iterator needs at least one pool");
    if (batch_ == 0) throw ContractError("batch size must be positive");
    for (std::size_t i = 0; i < pool_sizes_.size(); ++i) {
        if (pool_sizes_[i] < batch_) {
            throw ContractError("pool " + std::to_string(i) + " holds " + std::to_string(pool_sizes_[i]) +
                                " items, fewer than the batch size " + std::to_string(batch_));
        }
    }
}

std::size_t BatchIterator::batches_per_epoch() const {
    return *std::min_element(pool_sizes_.begin(), pool_sizes_.end()) / batch_;
}

std::vector<MultiBatch> BatchIterator::next_epoch() {
    std::vector<std::vector<std::size_t>> order;
    for (std::size_t n : pool_sizes_) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng_);
        order.push_back(std::move(idx));
    }
    std::vector<MultiBatch> epoch(batches_per_epoch());
    for (std::size_t b = 0; b < epoch.size(); ++b) {
        for (const auto& idx : order) {
            epoch[b].emplace_back(idx.begin() + static_cast<std::ptrdiff_t>(b * batch_),
                                  idx.begin() + static_cast<std::ptrdiff_t>((b + 1) * batch_));
        }
    }
    return epoch;
}

}  // namespace scsn::data
