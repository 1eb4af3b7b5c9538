#pragma once

#include "scsn/trialset.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scsn::data {

// Zero-based half-open trial index range [begin, end).
struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

// Parses "start:end".
Range parse_range(const std::string& text);

struct SplitSpec {
    std::string target_subject;
    std::size_t calib_trials = 0;  // leading trials of the target's second session moved to training
    Range val;
    Range test;

    void validate(std::size_t session2_size) const;
};

struct SubjectTrials {
    std::string subject_id;
    TrialSet set;
};

struct Split {
    std::vector<SubjectTrials> train;  // one entry per subject, input order
    std::size_t target_index = 0;
    TrialSet val;
    TrialSet test;

    std::size_t train_size() const;
    const TrialSet& target_train() const { return train.at(target_index).set; }
    // Same split with only the target subject's training data.
    Split single_subject() const;
};

/// Sources train on session 1; the target trains on session 1 plus the first
/// `calib_trials` of session 2, validates and tests on the given ranges of
/// session 2.
Split make_splits(const std::vector<SubjectDataset>& datasets, const SplitSpec& spec);

/// Appends random same-class duplicates until the set has `target_size`
/// trials, always topping up the currently smallest class.
TrialSet balanced_upsample(const TrialSet& set, std::size_t target_size, std::uint64_t seed);

}  // namespace scsn::data
