#include "ripple/core/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace ripple {
namespace {
std::mutex g_log_mutex;
std::atomic<std::size_t> g_warnings{0};
std::atomic<bool> g_quiet{false};
}  // namespace

void log_warning(std::string_view message) {
  ++g_warnings;
  if (g_quiet.load()) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "ripple: warning: " << message << '\n';
}

std::size_t warning_count() { return g_warnings.load(); }

void set_warnings_quiet(bool quiet) { g_quiet.store(quiet); }

}  // namespace ripple
