#pragma once

#include "scsn/tensor.hpp"
#include "scsn/trialset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scsn::data {

struct SynthConfig {
    std::size_t n_subjects = 5;
    std::size_t n_sessions = 2;
    std::size_t n_trials = 288;
    std::size_t n_channels = 22;
    double fs = 250.0;
    double duration_s = 4.0;
    std::size_t n_classes = 4;
    double shift_strength = 0.5;  // 0 = every subject shares one distribution
    double snr = 5.0;             // oscillation RMS over noise standard deviation
    std::uint64_t seed = 7;

    void validate() const;
};

/// How one subject deviates from the shared generative model. Trials of
/// class c show pattern class_perm[c], then get mixed across channels.
/// class_perm cycles round(shift_strength * n_classes) classes.
struct SubjectShift {
    nn::Tensor mixing;                   // [channels x channels]
    std::vector<std::size_t> class_perm;
};

// Class-discriminative oscillations shared by all subjects.
struct ClassPatterns {
    std::vector<double> freq_hz;                       // per class, in 8-30 Hz
    std::vector<std::vector<double>> spatial_weights;  // per class, per channel
};

ClassPatterns class_patterns(const SynthConfig& cfg);
SubjectShift subject_shift(const SynthConfig& cfg, std::size_t subject);

std::vector<std::string> default_channel_names(std::size_t n);
std::vector<std::string> default_class_names(std::size_t n);
std::string subject_name(std::size_t index);

std::vector<SubjectDataset> synth_multisubject(const SynthConfig& cfg);

}  // namespace scsn::data
