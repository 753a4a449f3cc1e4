#pragma once

#include <string>
#include <string_view>

namespace gazeaudit {

// Lowercase hex SHA-256 digest; used for config hashes in run manifests.
std::string sha256_hex(std::string_view data);

}  // namespace gazeaudit
