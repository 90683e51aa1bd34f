#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace femtoloss {

/// Locale-independent shortest round-trip representation; "nan"/"inf" for
/// non-finite values.
inline std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

}  // namespace femtoloss
