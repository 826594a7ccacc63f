#include "qsvm/version.hpp"

#include <charconv>

#include <fmt/format.h>

#include "qsvm/errors.hpp"

namespace qsvm {

void check_format_version(const std::string& version, const std::string& what) {
    if (version.empty()) throw ConfigError(fmt::format("{}: missing format_version", what));
    int major = -1;
    const auto dot = version.find('.');
    const auto head = version.substr(0, dot);
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), major);
    if (ec != std::errc{} || ptr != head.data() + head.size()) {
        throw ConfigError(fmt::format("{}: malformed format_version '{}'", what, version));
    }
    if (major != kFormatMajor) {
        throw ConfigError(fmt::format("{}: unsupported format_version {} (this build reads {}.x)", what,
                                      version, kFormatMajor));
    }
}

}  // namespace qsvm
