#include "smf/version.h"

namespace smf {

std::string_view version() noexcept { return SMF_VERSION; }

}  // namespace smf
