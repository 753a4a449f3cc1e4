#pragma once

namespace gazeaudit {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kCatalogVersion = "v1";
inline constexpr int kModelFormatVersion = 1;

}  // namespace gazeaudit
