#pragma once

#include <string>

namespace qsvm {

/// Written into every file the library produces. Loaders accept any minor
/// version of the same major.
inline constexpr const char* kFormatVersion = "1.0";
inline constexpr int kFormatMajor = 1;

/// Throws ConfigError if `version` is missing or has a different major.
void check_format_version(const std::string& version, const std::string& what);

}  // namespace qsvm
