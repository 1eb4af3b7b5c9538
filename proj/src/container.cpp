#include "scsn/container.hpp"

#include "scsn/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace scsn::data {

namespace {

constexpr int kFormatVersion = 1;

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(',', start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t parse_count(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("container header missing field '" + key + "'");
    std::size_t v = 0;
    const auto& s = it->second;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw FormatError("container header field '" + key + "' is not a count: '" + s + "'");
    }
    return v;
}

const std::string& field(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("container header missing field '" + key + "'");
    return it->second;
}

uint32_t to_le(uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
    return v;
}

}  // namespace

void write_trialset(std::ostream& os, const TrialSet& set) {
    set.validate();
    if (set.n_classes() > 256) throw ContractError("container labels are 8-bit; at most 256 classes");
    char fs_buf[64];
    std::snprintf(fs_buf, sizeof fs_buf, "%.17g", set.fs);
    os << "format_version=" << kFormatVersion << '\n'
       << "fs_hz=" << fs_buf << '\n'
       << "n_trials=" << set.size() << '\n'
       << "n_channels=" << set.n_channels() << '\n'
       << "n_samples=" << set.n_samples() << '\n'
       << "channel_names=" << join(set.channel_names) << '\n'
       << "class_names=" << join(set.class_names) << '\n'
       << "subject_id=" << set.subject_id << '\n'
       << '\n';
    for (const Epoch& e : set.trials) os.put(static_cast<char>(static_cast<uint8_t>(e.label)));
    for (const Epoch& e : set.trials) {
        for (float v : e.data) {
            uint32_t bits = to_le(std::bit_cast<uint32_t>(v));
            os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
    }
    if (!os) throw FormatError("failed writing trial set");
}

TrialSet read_trialset(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    bool terminated = false;
    while (std::getline(is, line)) {
        if (line.empty()) {
            terminated = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("malformed container header line: '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (!terminated) throw FormatError("container header is not terminated by a blank line");

    if (parse_count(kv, "format_version") != kFormatVersion) {
        throw FormatError("unsupported format_version '" + field(kv, "format_version") + "'");
    }
    TrialSet set;
    {
        const std::string& s = field(kv, "fs_hz");
        char* end = nullptr;
        set.fs = std::strtod(s.c_str(), &end);
        if (s.empty() || *end != '\0') throw FormatError("container header field 'fs_hz' is not a number: '" + s + "'");
        if (!(set.fs > 0.0)) throw FormatError("container header field 'fs_hz' must be positive, got " + s);
    }
    const std::size_t n_trials = parse_count(kv, "n_trials");
    const std::size_t n_channels = parse_count(kv, "n_channels");
    const std::size_t n_samples = parse_count(kv, "n_samples");
    set.channel_names = split_list(field(kv, "channel_names"));
    set.class_names = split_list(field(kv, "class_names"));
    set.subject_id = field(kv, "subject_id");
    if (set.channel_names.size() != n_channels) {
        throw FormatError("container header field 'channel_names' lists " + std::to_string(set.channel_names.size()) +
                          " names but n_channels=" + std::to_string(n_channels));
    }
    if (set.class_names.empty()) throw FormatError("container header field 'class_names' is empty");
    if (n_trials > 0 && (n_channels == 0 || n_samples == 0)) {
        throw FormatError("container header fields 'n_channels'/'n_samples' must be positive");
    }

    std::vector<uint8_t> labels(n_trials);
    is.read(reinterpret_cast<char*>(labels.data()), static_cast<std::streamsize>(n_trials));
    if (static_cast<std::size_t>(is.gcount()) != n_trials) throw FormatError("container labels truncated");

    const std::size_t per_trial = n_channels * n_samples;
    set.trials.reserve(n_trials);
    std::vector<uint32_t> raw(per_trial);
    for (std::size_t t = 0; t < n_trials; ++t) {
        if (labels[t] >= set.class_names.size()) {
            throw FormatError("container label " + std::to_string(labels[t]) + " of trial " + std::to_string(t) +
                              " exceeds class count");
        }
        is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(per_trial * sizeof(uint32_t)));
        if (static_cast<std::size_t>(is.gcount()) != per_trial * sizeof(uint32_t)) {
            throw FormatError("container payload truncated at trial " + std::to_string(t));
        }
        Epoch e;
        e.n_channels = n_channels;
        e.n_samples = n_samples;
        e.label = labels[t];
        e.subject_id = set.subject_id;
        e.fs = set.fs;
        e.data.resize(per_trial);
        for (std::size_t i = 0; i < per_trial; ++i) e.data[i] = std::bit_cast<float>(to_le(raw[i]));
        set.trials.push_back(std::move(e));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("container payload longer than header declares");
    return set;
}

void save_trialset(const TrialSet& set, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trialset(os, set);
}

TrialSet load_trialset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_trialset(is);
}

}  // namespace scsn::data
