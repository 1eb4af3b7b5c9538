#include "scsn/synth.hpp"

#include "scsn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

namespace scsn::data {

namespace {

// 10-10 montage names; the motor-cortex subset FC1..P4 is included.
const std::vector<std::string> kMontage = {
    "Fz",  "FC3", "FC1", "FCz", "FC2", "FC4", "C5",  "C3",  "C1",  "Cz",  "C2",  "C4",  "C6",
    "CP3", "CP1", "CPz", "CP2", "CP4", "P1",  "Pz",  "P2",  "POz", "Fp1", "Fp2", "AF7", "AF3",
    "AFz", "AF4", "AF8", "F7",  "F5",  "F3",  "F1",  "F2",  "F4",  "F6",  "F8",  "FT7", "FC5",
    "FC6", "FT8", "T7",  "T8",  "TP7", "CP5", "CP6", "TP8", "P7",  "P5",  "P3",  "P4",  "P6",
    "P8",  "PO7", "PO3", "PO4", "PO8", "O1",  "Oz",  "O2",  "Iz",  "FT9", "FT10", "TP9"};

constexpr double kBandLow = 8.0;
constexpr double kBandHigh = 30.0;
// Off-diagonal mixing spread at shift_strength 1.
constexpr double kMixingScale = 0.1;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)};
    return std::mt19937_64(seq);
}

}  // namespace

void SynthConfig::validate() const {
    if (!n_subjects || !n_sessions || !n_trials || !n_channels || !n_classes) {
        throw ParameterError("synthetic data counts must be positive");
    }
    if (n_classes > 256) throw ParameterError("at most 256 classes");
    if (!(fs > 0.0) || !(duration_s > 0.0)) throw ParameterError("fs and duration must be positive");
    if (!(shift_strength >= 0.0 && shift_strength <= 1.0)) throw ParameterError("shift_strength must lie in [0, 1]");
    if (!(snr > 0.0)) throw ParameterError("snr must be positive");
    if (fs / 2.0 <= kBandHigh) throw ParameterError("fs must exceed 60 Hz so 8-30 Hz oscillations are representable");
    const double samples = fs * duration_s;
    if (std::abs(samples - std::round(samples)) > 1e-6) throw ParameterError("fs * duration must be integral");
}

std::vector<std::string> default_channel_names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(i < kMontage.size() ? kMontage[i] : "Ch" + std::to_string(i + 1));
    return out;
}

std::vector<std::string> default_class_names(std::size_t n) {
    if (n == 4) return {"left_hand", "right_hand", "feet", "tongue"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("class" + std::to_string(i));
    return out;
}

std::string subject_name(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%02zu", index + 1);
    return buf;
}

ClassPatterns class_patterns(const SynthConfig& cfg) {
    ClassPatterns p;
    const auto K = cfg.n_classes;
    const auto C = cfg.n_channels;
    for (std::size_t c = 0; c < K; ++c) {
        p.freq_hz.push_back(kBandLow + (static_cast<double>(c) + 0.5) * (kBandHigh - kBandLow) / static_cast<double>(K));
    }
    // Each class drives a disjoint (when possible) channel group, with a
    // weaker spill-over onto the rest of the montage.
    auto rng = stream(cfg.seed, 0xC1A55);
    std::vector<std::size_t> order(C);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t group = std::max<std::size_t>(1, C / K);
    std::uniform_real_distribution<double> spill(0.0, 0.15);
    for (std::size_t c = 0; c < K; ++c) {
        std::vector<double> w(C);
        for (double& v : w) v = spill(rng);
        for (std::size_t j = 0; j < group; ++j) w[order[(c * group + j) % C]] = 1.0;
        p.spatial_weights.push_back(std::move(w));
    }
    return p;
}

SubjectShift subject_shift(const SynthConfig& cfg, std::size_t subject) {
    const auto C = cfg.n_channels;
    const auto K = cfg.n_classes;
    const double s = cfg.shift_strength;
    auto rng = stream(cfg.seed, 0x5B1EC7, subject);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SubjectShift out;
    out.mixing = nn::Tensor({C, C}, 0.0);
    const double noise_scale = kMixingScale / std::sqrt(static_cast<double>(C));
    for (std::size_t r = 0; r < C; ++r)
        for (std::size_t c = 0; c < C; ++c) out.mixing[r * C + c] = (r == c ? 1.0 : 0.0) + s * noise_scale * gauss(rng);

    // Cycle round(s * K) randomly chosen classes.
    std::vector<std::size_t> chosen(K);
    std::iota(chosen.begin(), chosen.end(), 0);
    std::shuffle(chosen.begin(), chosen.end(), rng);
    const auto moved = static_cast<std::size_t>(std::llround(s * static_cast<double>(K)));
    out.class_perm.resize(K);
    std::iota(out.class_perm.begin(), out.class_perm.end(), 0);
    if (moved > 1)
        for (std::size_t j = 0; j < moved; ++j) out.class_perm[chosen[j]] = chosen[(j + 1) % moved];
    return out;
}

std::vector<SubjectDataset> synth_multisubject(const SynthConfig& cfg) {
    cfg.validate();
    const auto C = cfg.n_channels;
    const auto K = cfg.n_classes;
    const auto S = static_cast<std::size_t>(std::llround(cfg.fs * cfg.duration_s));
    const ClassPatterns patterns = class_patterns(cfg);
    const double noise_sd = (1.0 / std::numbers::sqrt2) / cfg.snr;
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<SubjectDataset> out;
    for (std::size_t subj = 0; subj < cfg.n_subjects; ++subj) {
        const SubjectShift shift = subject_shift(cfg, subj);
        SubjectDataset ds;
        ds.subject_id = subject_name(subj);
        for (std::size_t sess = 0; sess < cfg.n_sessions; ++sess) {
            auto rng = stream(cfg.seed, 0x7A1A15, subj, sess);
            std::normal_distribution<double> noise(0.0, noise_sd);
            std::uniform_real_distribution<double> unit(0.0, 1.0);

            TrialSet set;
            set.subject_id = ds.subject_id;
            set.fs = cfg.fs;
            set.channel_names = default_channel_names(C);
            set.class_names = default_class_names(K);

            std::vector<std::size_t> labels(cfg.n_trials);
            for (std::size_t t = 0; t < labels.size(); ++t) labels[t] = t % K;
            std::shuffle(labels.begin(), labels.end(), rng);

            std::vector<double> clean(C * S);
            for (std::size_t t = 0; t < cfg.n_trials; ++t) {
                const std::size_t label = labels[t];
                const std::size_t shown = shift.class_perm[label];
                const double amp = 0.7 + 0.6 * unit(rng);
                const double freq = patterns.freq_hz[shown] + (unit(rng) - 0.5);
                const double phase = two_pi * unit(rng);
                // Background rhythm common to all classes.
                const double bg_freq = kBandLow + (kBandHigh - kBandLow) * unit(rng);
                const double bg_phase = two_pi * unit(rng);
                const double bg_amp = 0.3 * unit(rng);
                const auto& w = patterns.spatial_weights[shown];
                for (std::size_t i = 0; i < S; ++i) {
                    const double tt = static_cast<double>(i) / cfg.fs;
                    const double osc = amp * std::sin(two_pi * freq * tt + phase);
                    const double bg = bg_amp * std::sin(two_pi * bg_freq * tt + bg_phase);
                    for (std::size_t c = 0; c < C; ++c) clean[c * S + i] = w[c] * osc + bg;
                }
                Epoch e;
                e.n_channels = C;
                e.n_samples = S;
                e.label = label;
                e.subject_id = ds.subject_id;
                e.fs = cfg.fs;
                e.data.resize(C * S);
                for (std::size_t r = 0; r < C; ++r)
                    for (std::size_t i = 0; i < S; ++i) {
                        double v = 0.0;
                        for (std::size_t c = 0; c < C; ++c) v += shift.mixing[r * C + c] * clean[c * S + i];
                        e.data[r * S + i] = static_cast<float>(v + noise(rng));
                    }
                set.trials.push_back(std::move(e));
            }
            ds.sessions.push_back(std::move(set));
        }
        out.push_back(std::move(ds));
    }
    return out;
}

}  // namespace scsn::data
