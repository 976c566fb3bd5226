#pragma once

#include <string_view>

namespace smf {

/// Library version, e.g. "1.0.0".
std::string_view version() noexcept;

}  // namespace smf
