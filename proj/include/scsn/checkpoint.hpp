#pragma once

// Model checkpoint: `key=value` header lines echoing the architecture (plus
// caller metadata), a blank line, then one block per parameter:
//   <name> <rank> <dim0> ... <dimN-1>\n  followed by little-endian float64 values.

#include "scsn/models.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace scsn::models {

struct Checkpoint {
    Model model;
    std::map<std::string, std::string> metadata;
};

void save_checkpoint(const Model& model, const std::filesystem::path& path,
                     const std::map<std::string, std::string>& metadata = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace scsn::models
