#pragma once

#include "tfcsp/pipeline.hpp"

#include <filesystem>
#include <string>

namespace tfcsp {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON; every matrix is {"rows", "cols", "data"} with data the
// base64 encoding of its row-major little-endian float64 values.
std::string pipeline_to_json(const TrainedPipeline& p);
// Throws FormatError on malformed or unsupported documents.
TrainedPipeline pipeline_from_json(const std::string& text);

void save_pipeline(const TrainedPipeline& p, const std::filesystem::path& path);
TrainedPipeline load_pipeline(const std::filesystem::path& path);

}  // namespace tfcsp
