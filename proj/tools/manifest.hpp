#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace scsn::cli {

std::string fnv1a64_file(const std::filesystem::path& path);

/// One per command invocation: the resolved argument list (enough to re-run
/// it), resolved configuration, and checksums of inputs and outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    std::string cwd;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> inputs;   // path -> checksum
    std::map<std::string, std::string> outputs;  // file name (in out dir) -> checksum
    std::string timestamp;
    double wall_time_s = 0.0;

    void add_input(const std::filesystem::path& p);
    void add_output(const std::filesystem::path& dir, const std::string& name);

    void save(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

}  // namespace scsn::cli
