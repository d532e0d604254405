#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace driftwatch {

// UTC timestamp with seconds precision. Fractional seconds in input are
// truncated on parse.
struct UtcTime {
  std::int64_t seconds = 0;  // seconds since 1970-01-01T00:00:00Z

  friend bool operator==(UtcTime a, UtcTime b) { return a.seconds == b.seconds; }
  friend bool operator!=(UtcTime a, UtcTime b) { return a.seconds != b.seconds; }
  friend bool operator<(UtcTime a, UtcTime b) { return a.seconds < b.seconds; }
  friend bool operator<=(UtcTime a, UtcTime b) { return a.seconds <= b.seconds; }
};

// Parses an RFC 3339 timestamp ("2018-03-15T23:59:29Z", optional fractional
// seconds, 'Z' or +hh:mm / -hh:mm offset). Returns nullopt on malformed input.
std::optional<UtcTime> parse_rfc3339(const std::string& text);

// Formats as "YYYY-MM-DDThh:mm:ssZ".
std::string format_rfc3339(UtcTime t);

}  // namespace driftwatch
