#pragma once

#include <cstddef>
#include <string_view>

namespace ripple {

// Writes a warning line to stderr. Thread-safe.
void log_warning(std::string_view message);

// Number of warnings emitted since process start (used by tests).
std::size_t warning_count();

// Silences stderr output of warnings (counting continues).
void set_warnings_quiet(bool quiet);

}  // namespace ripple
