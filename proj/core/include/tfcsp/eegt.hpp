#pragma once

#include "tfcsp/trialset.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace tfcsp {

// EEGT container, little-endian throughout:
//
//   "EEGT" | u32 version | u32 sampling_rate_millihz | u16 class_count |
//   u16 n_channels | u32 n_samples_per_trial | u32 n_trials |
//   n_channels x (u16 length, UTF-8 bytes) |
//   n_trials x (u16 label, n_channels * n_samples float32, channel-major)
inline constexpr std::uint32_t kEegtVersion = 1;
inline constexpr std::size_t kEegtFixedHeaderBytes = 4 + 4 + 4 + 2 + 2 + 4 + 4;

void save_trialset(const TrialSet& set, const std::filesystem::path& path);
TrialSet load_trialset(const std::filesystem::path& path);

// Stream variants used by the file functions; exposed for in-memory tests.
void write_trialset(const TrialSet& set, std::ostream& out);
TrialSet read_trialset(std::istream& in);

// Exact byte size of the container that save_trialset would produce.
std::size_t eegt_size_bytes(const TrialSet& set);

}  // namespace tfcsp
