#pragma once

// One TrialSet per file:
//
//   format_version=1
//   fs_hz=<real>
//   n_trials=<int>
//   n_channels=<int>
//   n_samples=<int>
//   channel_names=<comma separated>
//   class_names=<comma separated>
//   subject_id=<string>
//   <blank line>
//   n_trials unsigned 8-bit labels
//   float32 little-endian payload in [trial][channel][sample] order

#include "scsn/trialset.hpp"

#include <filesystem>
#include <iosfwd>

namespace scsn::data {

void write_trialset(std::ostream& os, const TrialSet& set);
TrialSet read_trialset(std::istream& is);

void save_trialset(const TrialSet& set, const std::filesystem::path& path);
TrialSet load_trialset(const std::filesystem::path& path);

}  // namespace scsn::data
