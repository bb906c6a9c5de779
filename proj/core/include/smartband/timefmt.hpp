#pragma once

#include <cstdint>
#include <string>

namespace smartband {

/// Renders epoch_unix + offset_s (floored to whole seconds) as
/// "YYYY-MM-DD HH:MM:SS UTC". Proleptic Gregorian, no leap seconds.
std::string format_utc(std::int64_t epoch_unix, double offset_s);

}  // namespace smartband
