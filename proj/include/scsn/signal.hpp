#pragma once

#include "scsn/tensor.hpp"
#include "scsn/trialset.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace scsn::signal {

// Second-order section, a[0] == 1.
struct Biquad {
    std::array<double, 3> b{};
    std::array<double, 3> a{1.0, 0.0, 0.0};
};
using Sos = std::vector<Biquad>;

inline constexpr double kNotchQ = 30.0;
inline constexpr int kBandpassOrder = 4;

Sos design_notch(double f0, double fs, double q = kNotchQ);
// Butterworth bandpass from an order-`order` lowpass prototype (2*order poles).
Sos design_butter_bandpass(int order, double low, double high, double fs);

std::complex<double> frequency_response(const Sos& sos, double f, double fs);

// Single causal pass from the given per-section states (2 per section).
std::vector<double> sosfilt(const Sos& sos, std::span<const double> x, std::span<const double> zi = {});
// Steady-state per-section states for a unit step input.
std::vector<double> sosfilt_zi(const Sos& sos);
// Forward-backward (zero-phase) filtering with odd-extension padding.
std::vector<double> sosfiltfilt(const Sos& sos, std::span<const double> x);

// Row-wise filters over a [channels x samples] tensor.
nn::Tensor notch_filter(const nn::Tensor& x, double f0, double fs);
nn::Tensor bandpass_filter(const nn::Tensor& x, double low, double high, double fs);

nn::Tensor to_tensor(const Epoch& e);
void assign_from_tensor(Epoch& e, const nn::Tensor& t);

struct CropGeometry {
    std::size_t window = 0;  // samples
    std::size_t stride = 0;  // samples
    std::size_t count = 0;   // crops per trial
};

// Window/stride in samples; throws ParameterError when either is not integral.
CropGeometry crop_geometry(double fs, std::size_t n_samples, double win_s, double overlap_s);
std::vector<Epoch> crop_trials(const Epoch& epoch, double win_s, double overlap_s);
TrialSet crop_set(const TrialSet& set, double win_s, double overlap_s);
std::size_t crop_count(std::size_t length, std::size_t window, std::size_t stride);

TrialSet select_channels(const TrialSet& set, std::span<const std::string> names);

struct PreprocessOptions {
    double notch_hz = 50.0;
    double band_low_hz = 1.0;
    double band_high_hz = 100.0;
    bool notch = true;
    bool bandpass = true;
    std::vector<std::string> channels;  // empty keeps all
};
TrialSet preprocess(const TrialSet& set, const PreprocessOptions& opts);

struct BandPowerRow {
    std::string class_name;
    std::string channel;
    double power_db = 0.0;
};

struct BandPowerMap {
    std::vector<BandPowerRow> rows;
    std::vector<std::string> warnings;

    double at(const std::string& class_name, const std::string& channel) const;
};

/// Per class: bandpass every trial, average squared amplitude per channel
/// over trials and samples, report 10*log10 of it.
BandPowerMap band_power_map(const TrialSet& set, double band_low, double band_high);
void write_band_power_csv(std::ostream& os, const BandPowerMap& map);

}  // namespace scsn::signal
