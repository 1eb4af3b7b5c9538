#include "scsn/signal.hpp"

#include "scsn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace scsn::signal {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check_band_edge(double f, double fs, const char* what) {
    if (!(fs > 0.0)) throw ParameterError("sampling rate must be positive");
    if (!(f > 0.0) || !(f < fs / 2.0)) {
        throw ParameterError(std::string(what) + " " + std::to_string(f) + " Hz must lie in (0, " +
                             std::to_string(fs / 2.0) + ") Hz for fs=" + std::to_string(fs));
    }
}

Biquad section_from_poles(cd p1, cd p2) {
    Biquad s;
    s.b = {1.0, 0.0, -1.0};
    s.a = {1.0, -(p1 + p2).real(), (p1 * p2).real()};
    return s;
}

cd section_response(const Biquad& s, cd z_inv) {
    const cd num = s.b[0] + z_inv * (s.b[1] + z_inv * s.b[2]);
    const cd den = s.a[0] + z_inv * (s.a[1] + z_inv * s.a[2]);
    return num / den;
}

// Nearest integer when x is integral to within rounding noise.
bool integral_samples(double x, std::size_t& out) {
    const double r = std::round(x);
    if (r < 0.0 || std::abs(x - r) > 1e-6) return false;
    out = static_cast<std::size_t>(r);
    return true;
}

}  // namespace

Sos design_notch(double f0, double fs, double q) {
    check_band_edge(f0, fs, "notch frequency");
    if (!(q > 0.0)) throw ParameterError("notch quality factor must be positive");
    const double w0 = 2.0 * kPi * f0 / fs;
    const double bw = w0 / q;
    const double gain = 1.0 / (1.0 + std::tan(bw / 2.0));
    Biquad s;
    s.b = {gain, -2.0 * gain * std::cos(w0), gain};
    s.a = {1.0, -2.0 * gain * std::cos(w0), 2.0 * gain - 1.0};
    return {s};
}

Sos design_butter_bandpass(int order, double low, double high, double fs) {
    if (order < 1) throw ParameterError("filter order must be >= 1");
    check_band_edge(low, fs, "bandpass low edge");
    check_band_edge(high, fs, "bandpass high edge");
    if (!(low < high)) throw ParameterError("bandpass low edge must be below high edge");

    // Pre-warped analog edges, then lowpass prototype -> bandpass -> bilinear.
    const double k2 = 2.0 * fs;
    const double wl = k2 * std::tan(kPi * low / fs);
    const double wh = k2 * std::tan(kPi * high / fs);
    const double bw = wh - wl;
    const double w0 = std::sqrt(wl * wh);

    std::vector<cd> poles;
    for (int k = 0; k < order; ++k) {
        const double theta = kPi * (2.0 * k + order + 1.0) / (2.0 * order);
        const cd p = std::polar(1.0, theta);
        const cd half = p * (bw / 2.0);
        const cd root = std::sqrt(half * half - w0 * w0);
        for (cd s : {half + root, half - root}) poles.push_back((k2 + s) / (k2 - s));
    }

    std::vector<cd> upper, real;
    for (cd p : poles) {
        if (std::abs(p.imag()) < 1e-12) real.push_back(p.real());
        else if (p.imag() > 0.0) upper.push_back(p);
    }
    Sos sos;
    for (cd p : upper) sos.push_back(section_from_poles(p, std::conj(p)));
    std::sort(real.begin(), real.end(), [](cd a, cd b) { return a.real() < b.real(); });
    for (std::size_t i = 0; i + 1 < real.size(); i += 2) sos.push_back(section_from_poles(real[i], real[i + 1]));
    if (sos.size() != static_cast<std::size_t>(order)) throw ParameterError("bandpass design produced unpaired poles");

    // Unit gain of every section at the digital image of the analog center.
    const double wc = 2.0 * std::atan(w0 / k2);
    const cd z_inv = std::polar(1.0, -wc);
    for (Biquad& s : sos) {
        const double g = 1.0 / std::abs(section_response(s, z_inv));
        for (double& v : s.b) v *= g;
    }
    return sos;
}

std::complex<double> frequency_response(const Sos& sos, double f, double fs) {
    const cd z_inv = std::polar(1.0, -2.0 * kPi * f / fs);
    cd h = 1.0;
    for (const Biquad& s : sos) h *= section_response(s, z_inv);
    return h;
}

std::vector<double> sosfilt(const Sos& sos, std::span<const double> x, std::span<const double> zi) {
    if (!zi.empty() && zi.size() != 2 * sos.size()) throw ShapeError("sosfilt: zi must hold 2 states per section");
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t s = 0; s < sos.size(); ++s) {
        const Biquad& q = sos[s];
        double z1 = zi.empty() ? 0.0 : zi[2 * s];
        double z2 = zi.empty() ? 0.0 : zi[2 * s + 1];
        for (double& v : y) {
            const double in = v;
            const double out = q.b[0] * in + z1;
            z1 = q.b[1] * in - q.a[1] * out + z2;
            z2 = q.b[2] * in - q.a[2] * out;
            v = out;
        }
    }
    return y;
}

std::vector<double> sosfilt_zi(const Sos& sos) {
    std::vector<double> zi;
    double scale = 1.0;
    for (const Biquad& q : sos) {
        const double g = (q.b[0] + q.b[1] + q.b[2]) / (q.a[0] + q.a[1] + q.a[2]);
        zi.push_back(scale * (g - q.b[0]));
        zi.push_back(scale * (q.b[2] - q.a[2] * g));
        scale *= g;
    }
    return zi;
}

std::vector<double> sosfiltfilt(const Sos& sos, std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    std::size_t pad = 3 * (2 * sos.size() + 1);
    pad = std::min(pad, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    const std::vector<double> zi = sosfilt_zi(sos);
    std::vector<double> z(zi.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = zi[i] * ext.front();
    std::vector<double> y = sosfilt(sos, ext, z);
    std::reverse(y.begin(), y.end());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = zi[i] * y.front();
    y = sosfilt(sos, y, z);
    std::reverse(y.begin(), y.end());
    return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

namespace {
nn::Tensor filter_rows(const nn::Tensor& x, const Sos& sos) {
    if (x.rank() != 2) throw ShapeError("filters expect a [channels x samples] tensor");
    nn::Tensor out(x.shape());
    const std::size_t n = x.dim(1);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < x.dim(0); ++c) {
        std::vector<double> y = sosfiltfilt(sos, x.values().subspan(c * n, n));
        std::copy(y.begin(), y.end(), out.values().begin() + static_cast<std::ptrdiff_t>(c * n));
    }
    return out;
}
}  // namespace

nn::Tensor notch_filter(const nn::Tensor& x, double f0, double fs) { return filter_rows(x, design_notch(f0, fs)); }

nn::Tensor bandpass_filter(const nn::Tensor& x, double low, double high, double fs) {
    return filter_rows(x, design_butter_bandpass(kBandpassOrder, low, high, fs));
}

nn::Tensor to_tensor(const Epoch& e) {
    return nn::Tensor({e.n_channels, e.n_samples}, std::vector<double>(e.data.begin(), e.data.end()));
}

void assign_from_tensor(Epoch& e, const nn::Tensor& t) {
    if (t.size() != e.data.size()) throw ShapeError("tensor size does not match epoch payload");
    for (std::size_t i = 0; i < t.size(); ++i) e.data[i] = static_cast<float>(t[i]);
}

std::size_t crop_count(std::size_t length, std::size_t window, std::size_t stride) {
    if (window == 0 || stride == 0 || window > length) return 0;
    return (length - window) / stride + 1;
}

CropGeometry crop_geometry(double fs, std::size_t n_samples, double win_s, double overlap_s) {
    if (!(win_s > 0.0)) throw ParameterError("crop window must be positive");
    if (!(overlap_s >= 0.0) || !(overlap_s < win_s)) throw ParameterError("crop overlap must lie in [0, window)");
    CropGeometry g;
    if (!integral_samples(win_s * fs, g.window)) {
        throw ParameterError("crop window of " + std::to_string(win_s) + " s at fs=" + std::to_string(fs) +
                             " is not an integer sample count");
    }
    if (!integral_samples((win_s - overlap_s) * fs, g.stride) || g.stride == 0) {
        throw ParameterError("crop stride of " + std::to_string(win_s - overlap_s) + " s at fs=" + std::to_string(fs) +
                             " is not an integer sample count");
    }
    if (g.window > n_samples) throw ParameterError("crop window is longer than the trial");
    g.count = crop_count(n_samples, g.window, g.stride);
    return g;
}

std::vector<Epoch> crop_trials(const Epoch& epoch, double win_s, double overlap_s) {
    const CropGeometry g = crop_geometry(epoch.fs, epoch.n_samples, win_s, overlap_s);
    const std::size_t window = g.window, stride = g.stride;
    const std::size_t n = crop_count(epoch.n_samples, window, stride);
    std::vector<Epoch> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Epoch c;
        c.n_channels = epoch.n_channels;
        c.n_samples = window;
        c.label = epoch.label;
        c.subject_id = epoch.subject_id;
        c.fs = epoch.fs;
        c.data.resize(window * epoch.n_channels);
        for (std::size_t ch = 0; ch < epoch.n_channels; ++ch) {
            auto src = epoch.channel(ch).subspan(i * stride, window);
            std::copy(src.begin(), src.end(), c.data.begin() + static_cast<std::ptrdiff_t>(ch * window));
        }
        out.push_back(std::move(c));
    }
    return out;
}

TrialSet crop_set(const TrialSet& set, double win_s, double overlap_s) {
    TrialSet out = set.empty_like();
    for (const Epoch& e : set.trials) {
        auto crops = crop_trials(e, win_s, overlap_s);
        std::move(crops.begin(), crops.end(), std::back_inserter(out.trials));
    }
    return out;
}

TrialSet select_channels(const TrialSet& set, std::span<const std::string> names) {
    std::vector<std::size_t> rows;
    for (const std::string& name : names) {
        auto it = std::find(set.channel_names.begin(), set.channel_names.end(), name);
        if (it == set.channel_names.end()) throw LookupError("unknown channel name: " + name);
        rows.push_back(static_cast<std::size_t>(it - set.channel_names.begin()));
    }
    TrialSet out = set.empty_like();
    out.channel_names.assign(names.begin(), names.end());
    for (const Epoch& e : set.trials) {
        Epoch s = e;
        s.n_channels = rows.size();
        s.data.resize(rows.size() * e.n_samples);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            auto src = e.channel(rows[r]);
            std::copy(src.begin(), src.end(), s.data.begin() + static_cast<std::ptrdiff_t>(r * e.n_samples));
        }
        out.trials.push_back(std::move(s));
    }
    return out;
}

TrialSet preprocess(const TrialSet& set, const PreprocessOptions& opts) {
    // Validate parameters up front so empty sets fail the same way.
    const Sos notch = opts.notch ? design_notch(opts.notch_hz, set.fs) : Sos{};
    const Sos band =
        opts.bandpass ? design_butter_bandpass(kBandpassOrder, opts.band_low_hz, opts.band_high_hz, set.fs) : Sos{};
    TrialSet out = opts.channels.empty() ? set : select_channels(set, opts.channels);
    for (Epoch& e : out.trials) {
        nn::Tensor t = to_tensor(e);
        if (opts.notch) t = filter_rows(t, notch);
        if (opts.bandpass) t = filter_rows(t, band);
        assign_from_tensor(e, t);
    }
    return out;
}

double BandPowerMap::at(const std::string& class_name, const std::string& channel) const {
    for (const BandPowerRow& r : rows)
        if (r.class_name == class_name && r.channel == channel) return r.power_db;
    throw LookupError("no band power entry for (" + class_name + ", " + channel + ")");
}

BandPowerMap band_power_map(const TrialSet& set, double band_low, double band_high) {
    const Sos band = design_butter_bandpass(kBandpassOrder, band_low, band_high, set.fs);
    BandPowerMap map;
    const std::size_t nc = set.n_channels();
    for (std::size_t cls = 0; cls < set.n_classes(); ++cls) {
        std::vector<double> power(nc, 0.0);
        std::size_t trials = 0;
        for (const Epoch& e : set.trials) {
            if (e.label != cls) continue;
            nn::Tensor t = filter_rows(to_tensor(e), band);
            for (std::size_t c = 0; c < nc; ++c) {
                double s = 0.0;
                for (std::size_t i = 0; i < e.n_samples; ++i) s += t[c * e.n_samples + i] * t[c * e.n_samples + i];
                power[c] += s / static_cast<double>(e.n_samples);
            }
            ++trials;
        }
        if (trials == 0) {
            map.warnings.push_back("class '" + set.class_names[cls] + "' has no trials; skipped");
            continue;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            map.rows.push_back({set.class_names[cls], set.channel_names[c],
                                10.0 * std::log10(power[c] / static_cast<double>(trials))});
        }
    }
    return map;
}

void write_band_power_csv(std::ostream& os, const BandPowerMap& map) {
    os << "class,channel,power_db\n";
    char buf[64];
    for (const BandPowerRow& r : map.rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.power_db);
        os << r.class_name << ',' << r.channel << ',' << buf << '\n';
    }
}

}  // namespace scsn::signal
