#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace scsn {

/// One labeled multi-channel recording window. Samples are stored as 32-bit
/// floats in [channel][sample] order, the same precision as the on-disk
/// container, so load(save(x)) is exact.
struct Epoch {
    std::size_t n_channels = 0;
    std::size_t n_samples = 0;
    std::vector<float> data;
    std::size_t label = 0;
    std::string subject_id;
    double fs = 0.0;

    std::span<const float> channel(std::size_t c) const { return {data.data() + c * n_samples, n_samples}; }
    std::span<float> channel(std::size_t c) { return {data.data() + c * n_samples, n_samples}; }
    double duration_s() const { return static_cast<double>(n_samples) / fs; }

    friend bool operator==(const Epoch&, const Epoch&) = default;
};

struct TrialSet {
    std::string subject_id;
    double fs = 0.0;
    std::vector<std::string> channel_names;
    std::vector<std::string> class_names;
    std::vector<Epoch> trials;

    std::size_t size() const { return trials.size(); }
    bool empty() const { return trials.empty(); }
    std::size_t n_channels() const { return channel_names.size(); }
    std::size_t n_samples() const { return trials.empty() ? 0 : trials.front().n_samples; }
    std::size_t n_classes() const { return class_names.size(); }

    // Trial counts per class index.
    std::vector<std::size_t> class_counts() const;
    // Same metadata, no trials.
    TrialSet empty_like() const;
    // Throws InvalidArgument-family errors when shapes, fs or labels disagree.
    void validate() const;

    friend bool operator==(const TrialSet&, const TrialSet&) = default;
};

struct SubjectDataset {
    std::string subject_id;
    std::vector<TrialSet> sessions;  // chronological
};

}  // namespace scsn
