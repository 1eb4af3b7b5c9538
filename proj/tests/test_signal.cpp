#include "scsn/errors.hpp"
#include "scsn/signal.hpp"
#include "scsn/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace scsn;
namespace sig = scsn::signal;

namespace {

std::vector<double> tone(double f, double fs, std::size_t n, double amp = 1.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2 * std::numbers::pi * f * static_cast<double>(i) / fs);
    return x;
}

double rms(std::span<const double> x, std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t i = from; i < to; ++i) s += x[i] * x[i];
    return std::sqrt(s / static_cast<double>(to - from));
}

double db(double ratio) { return 20.0 * std::log10(ratio); }

// Reference values from scipy.signal (iirnotch Q=30, butter order 4 bandpass), fs = 250.
const double kFreqs[] = {0.5, 1, 5, 10, 49, 50, 51, 100, 110, 124};
const double kNotchMag[] = {9.999999274269141e-01, 9.999997095544835e-01, 9.999926145617830e-01,
                            9.999688115752959e-01, 7.695333559529262e-01, 9.614886167266138e-15,
                            7.669614303680671e-01, 9.999393679706223e-01, 9.999806271563749e-01,
                            9.999999191050370e-01};
const double kBandMag[] = {6.161008778471987e-02, 7.071067811866621e-01, 9.999994480173433e-01,
                           9.999999999298004e-01, 9.999978821497326e-01, 9.999972891772225e-01,
                           9.999965437146012e-01, 7.071067811865469e-01, 1.167363891474777e-01,
                           2.201554590828316e-06};

std::vector<double> probe() {
    std::vector<double> x(120);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double t = static_cast<double>(n);
        x[n] = std::sin(2 * std::numbers::pi * 10 * t / 250) + 0.5 * std::sin(2 * std::numbers::pi * 50 * t / 250) +
               0.01 * t + 0.3;
    }
    return x;
}
const std::size_t kProbeIdx[] = {0, 1, 17, 59, 60, 100, 118, 119};
const double kNotchFiltfilt[] = {2.916491074197631e-01,  7.613546867798927e-01, -3.319276299020167e-01,
                                 1.556315932298891e+00,  1.474928675207002e+00, 1.273268815032496e+00,
                                 4.269891206602150e-01,  3.120697374521911e-01};
const double kBandFiltfilt[] = {-1.516614635924003e-01, 5.671314565260202e-01, -8.269925654226445e-01,
                                3.412604757953130e-01,  6.496139444262594e-01, 9.996442516794131e-01,
                                2.360545488501808e-01,  6.023309034220192e-02};

}  // namespace

TEST_CASE("filter magnitude responses match reference designs") {
    const auto notch = sig::design_notch(50, 250);
    const auto band = sig::design_butter_bandpass(sig::kBandpassOrder, 1, 100, 250);
    CHECK(band.size() == 4);
    for (std::size_t i = 0; i < std::size(kFreqs); ++i) {
        CAPTURE(kFreqs[i]);
        CHECK(std::abs(std::abs(sig::frequency_response(notch, kFreqs[i], 250)) - kNotchMag[i]) < 1e-9);
        CHECK(std::abs(std::abs(sig::frequency_response(band, kFreqs[i], 250)) - kBandMag[i]) < 1e-9);
    }
}

TEST_CASE("zero-phase filtering matches reference output") {
    const auto x = probe();
    const auto yn = sig::sosfiltfilt(sig::design_notch(50, 250), x);
    const auto yb = sig::sosfiltfilt(sig::design_butter_bandpass(4, 1, 100, 250), x);
    for (std::size_t k = 0; k < std::size(kProbeIdx); ++k) {
        CAPTURE(kProbeIdx[k]);
        CHECK(std::abs(yn[kProbeIdx[k]] - kNotchFiltfilt[k]) < 1e-9);
        CHECK(std::abs(yb[kProbeIdx[k]] - kBandFiltfilt[k]) < 1e-9);
    }
}

TEST_CASE("notch attenuates 50 Hz and passes 10 Hz") {
    const auto sos = sig::design_notch(50, 250);
    const auto x50 = tone(50, 250, 2500);
    const auto y50 = sig::sosfiltfilt(sos, x50);
    CHECK(db(rms(y50, 500, 2000) / rms(x50, 500, 2000)) <= -20.0);
    const auto x10 = tone(10, 250, 2500);
    const auto y10 = sig::sosfiltfilt(sos, x10);
    CHECK(std::abs(db(rms(y10, 500, 2000) / rms(x10, 500, 2000))) <= 1.0);
    for (double v : sig::sosfiltfilt(sos, std::vector<double>(300, 0.0))) CHECK(v == 0.0);
}

TEST_CASE("bandpass removes DC and passes 10 Hz") {
    const auto sos = sig::design_butter_bandpass(4, 1, 100, 250);
    const auto y = sig::sosfiltfilt(sos, std::vector<double>(2500, 5.0));
    double mean = 0.0;
    for (double v : y) mean += v;
    CHECK(std::abs(mean / static_cast<double>(y.size())) < 1e-2);
    const auto x10 = tone(10, 250, 2500);
    const auto y10 = sig::sosfiltfilt(sos, x10);
    CHECK(std::abs(db(rms(y10, 500, 2000) / rms(x10, 500, 2000))) <= 1.0);
    for (double v : sig::sosfiltfilt(sos, std::vector<double>(300, 0.0))) CHECK(v == 0.0);
}

TEST_CASE("filters are linear") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    std::vector<double> x(700), y(700), z(700);
    for (auto& v : x) v = g(rng);
    for (auto& v : y) v = g(rng);
    const double a = 1.7, b = -0.6;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
    for (const auto& sos : {sig::design_notch(50, 250), sig::design_butter_bandpass(4, 1, 100, 250)}) {
        const auto fx = sig::sosfiltfilt(sos, x), fy = sig::sosfiltfilt(sos, y), fz = sig::sosfiltfilt(sos, z);
        for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(fz[i] - (a * fx[i] + b * fy[i])) < 1e-9);
    }
}

TEST_CASE("zero-phase: in-band sine keeps its alignment") {
    const auto x = tone(10, 250, 1000);
    const auto y = sig::sosfiltfilt(sig::design_butter_bandpass(4, 1, 100, 250), x);
    int best = 0;
    double best_c = -1e300;
    for (int lag = -10; lag <= 10; ++lag) {
        double c = 0.0;
        for (int i = 200; i < 800; ++i) c += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i + lag)];
        if (c > best_c) best_c = c, best = lag;
    }
    CHECK(best == 0);
}

TEST_CASE("filter parameter errors") {
    CHECK_THROWS_AS(sig::design_butter_bandpass(4, 1, 125, 250), ParameterError);
    CHECK_THROWS_AS(sig::design_butter_bandpass(4, 30, 10, 250), ParameterError);
    CHECK_THROWS_AS(sig::design_notch(130, 250), ParameterError);
}

TEST_CASE("crop arithmetic") {
    auto g = sig::crop_geometry(250, 1000, 2.0, 1.9);
    CHECK(g.window == 500);
    CHECK(g.stride == 25);
    CHECK(g.count == 21);
    CHECK(sig::crop_geometry(250, 1250, 2.0, 1.9).count == 31);
    CHECK(sig::crop_geometry(250, 500, 2.0, 1.9).count == 1);
    CHECK_THROWS_AS(sig::crop_geometry(128, 384, 2.0, 1.9), ParameterError);
    CHECK_THROWS_AS(sig::crop_geometry(250, 400, 2.0, 1.9), ParameterError);

    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const std::size_t W = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
        const std::size_t S = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
        const std::size_t L = W + std::uniform_int_distribution<std::size_t>(0, 200)(rng);
        std::size_t n = 0;
        for (std::size_t start = 0; start + W <= L; start += S) ++n;
        CHECK(sig::crop_count(L, W, S) == n);
    }
}

TEST_CASE("crop_trials slices and keeps labels") {
    Epoch e{2, 10, {}, 3, "S01", 5.0};
    for (int i = 0; i < 20; ++i) e.data.push_back(static_cast<float>(i));
    auto crops = sig::crop_trials(e, 1.0, 0.6);  // window 5, stride 2
    REQUIRE(crops.size() == 3);
    CHECK(crops[1].label == 3);
    CHECK(crops[1].n_samples == 5);
    CHECK(crops[1].data[0] == 2.0f);
    CHECK(crops[1].data[5] == 12.0f);
    auto whole = sig::crop_trials(e, 2.0, 0.0);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == e);
}

namespace {

TrialSet montage_set(std::size_t n_channels, std::size_t n_trials = 3, std::size_t n_samples = 250) {
    TrialSet s;
    s.subject_id = "S01";
    s.fs = 250;
    s.channel_names = data::default_channel_names(n_channels);
    s.class_names = {"a", "b"};
    std::mt19937_64 rng(1);
    std::normal_distribution<float> g;
    for (std::size_t t = 0; t < n_trials; ++t) {
        Epoch e{n_channels, n_samples, std::vector<float>(n_channels * n_samples), t % 2, "S01", 250};
        for (auto& v : e.data) v = g(rng);
        s.trials.push_back(std::move(e));
    }
    return s;
}

}  // namespace

TEST_CASE("select_channels") {
    const auto set = montage_set(64);
    auto same = sig::select_channels(set, set.channel_names);
    CHECK(same == set);
    const std::vector<std::string> motor{"FC1", "FC2", "C3", "C4", "CP5", "CP1", "CP2", "CP6", "P3", "Pz", "P4"};
    auto sub = sig::select_channels(set, motor);
    CHECK(sub.channel_names == motor);
    CHECK(sub.trials[0].n_channels == 11);
    const std::vector<std::string> c3{"C3"};
    auto one = sig::select_channels(set, c3);
    const std::size_t idx = static_cast<std::size_t>(
        std::find(set.channel_names.begin(), set.channel_names.end(), "C3") - set.channel_names.begin());
    auto src = set.trials[1].channel(idx);
    auto dst = one.trials[1].channel(0);
    CHECK(std::equal(src.begin(), src.end(), dst.begin()));
    const std::vector<std::string> bad{"C3", "Q9"};
    try {
        sig::select_channels(set, bad);
        FAIL("expected a lookup error");
    } catch (const LookupError& e) {
        CHECK(std::string(e.what()).find("Q9") != std::string::npos);
    }
}

TEST_CASE("preprocess defaults on fs=250 data") {
    auto out = sig::preprocess(montage_set(4), {});
    CHECK(out.size() == 3);
    CHECK(out.n_channels() == 4);
    sig::PreprocessOptions opts;
    opts.band_high_hz = 125;
    CHECK_THROWS_AS(sig::preprocess(montage_set(4), opts), ParameterError);
}

TEST_CASE("band power map") {
    TrialSet s = montage_set(8, 4, 500);
    const auto names = s.channel_names;
    const std::size_t c3 = static_cast<std::size_t>(std::find(names.begin(), names.end(), "C3") - names.begin());
    for (auto& e : s.trials) {
        std::fill(e.data.begin(), e.data.end(), 0.0f);
        auto ch = e.channel(c3);
        const auto x = tone(10, 250, 500);
        std::copy(x.begin(), x.end(), ch.begin());
    }
    const auto map = sig::band_power_map(s, 8, 30);
    for (const auto& name : names) {
        if (name != "C3") CHECK(map.at("a", "C3") > map.at("a", name));
    }
    TrialSet doubled = montage_set(8, 4, 500);
    TrialSet base = doubled;
    for (auto& e : doubled.trials)
        for (auto& v : e.data) v *= 2.0f;
    const auto m1 = sig::band_power_map(base, 8, 30), m2 = sig::band_power_map(doubled, 8, 30);
    for (std::size_t i = 0; i < m1.rows.size(); ++i) {
        CHECK(std::abs(m2.rows[i].power_db - m1.rows[i].power_db - 20 * std::log10(2.0)) < 1e-9);
    }

    TrialSet same = montage_set(3, 2, 300);
    same.trials[1].data = same.trials[0].data;
    const auto m3 = sig::band_power_map(same, 8, 30);
    for (const auto& ch : same.channel_names) CHECK(std::abs(m3.at("a", ch) - m3.at("b", ch)) < 1e-9);

    TrialSet missing = montage_set(2, 2, 300);
    missing.class_names.push_back("c");
    const auto m4 = sig::band_power_map(missing, 8, 30);
    CHECK(m4.warnings.size() == 1);

    std::ostringstream os;
    sig::write_band_power_csv(os, m3);
    CHECK(os.str().rfind("class,channel,power_db\n", 0) == 0);
}
