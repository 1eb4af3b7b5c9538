#include "manifest.hpp"

#include "scsn/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace scsn::cli {

std::string fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

void RunManifest::add_input(const std::filesystem::path& p) { inputs[p.string()] = fnv1a64_file(p); }

void RunManifest::add_output(const std::filesystem::path& dir, const std::string& name) {
    outputs[name] = fnv1a64_file(dir / name);
}

void RunManifest::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write manifest " + path.string());
    os << "command=" << command << '\n';
    os << "argv=" << nlohmann::json(argv).dump() << '\n';
    os << "cwd=" << cwd << '\n';
    for (const auto& [k, v] : config) os << "config." << k << '=' << v << '\n';
    for (const auto& [k, v] : inputs) os << "input." << k << '=' << v << '\n';
    for (const auto& [k, v] : outputs) os << "output." << k << '=' << v << '\n';
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char ts[64];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "timestamp=" << ts << '\n';
    char wt[32];
    std::snprintf(wt, sizeof wt, "%.3f", wall_time_s);
    os << "wall_time_s=" << wt << '\n';
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read manifest " + path.string());
    RunManifest m;
    std::string line;
    auto strip = [](const std::string& s, const std::string& prefix, std::string& rest) {
        if (s.rfind(prefix, 0) != 0) return false;
        rest = s.substr(prefix.size());
        return true;
    };
    while (std::getline(is, line)) {
        // Keys may contain '=' only for input paths; split on the last one there.
        std::string rest;
        if (strip(line, "input.", rest)) {
            const auto eq = rest.rfind('=');
            if (eq == std::string::npos) throw FormatError("malformed manifest line '" + line + "'");
            m.inputs[rest.substr(0, eq)] = rest.substr(eq + 1);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("malformed manifest line '" + line + "'");
        const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "command") m.command = val;
        else if (key == "argv") m.argv = nlohmann::json::parse(val).get<std::vector<std::string>>();
        else if (key == "cwd") m.cwd = val;
        else if (key == "timestamp") m.timestamp = val;
        else if (key == "wall_time_s") m.wall_time_s = std::stod(val);
        else if (strip(key, "config.", rest)) m.config[rest] = val;
        else if (strip(key, "output.", rest)) m.outputs[rest] = val;
    }
    if (m.argv.empty()) throw FormatError("manifest " + path.string() + " has no argv");
    return m;
}

}  // namespace scsn::cli
