#pragma once

#include <string>
#include <vector>

#include "gazeaudit/denoiser.hpp"

namespace gazeaudit {

// Flat binary model container: "GAZM" magic, u32 format version, u64 metadata
// length + UTF-8 JSON metadata, u32 tensor count, then per tensor a u32 name
// length + name, u32 rank, u64 dims and little-endian IEEE-754 doubles.
void write_model_file(const std::string& path, const std::string& meta_json,
                      const std::vector<NamedTensor>& tensors);

struct ModelFile {
    std::string meta_json;
    std::vector<NamedTensor> tensors;
};
ModelFile read_model_file(const std::string& path);

}  // namespace gazeaudit
