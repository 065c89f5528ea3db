#include "texseg/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace texseg {
namespace {

std::mutex g_mutex;
WarningSink g_sink;
std::set<std::string> g_seen;

}  // namespace

void warn(const std::string& message)
{
  std::lock_guard lock(g_mutex);
  if (g_sink) {
    g_sink(message);
    return;
  }
  if (g_seen.insert(message).second)
    std::cerr << "texseg warning: " << message << '\n';
}

WarningSink set_warning_sink(WarningSink sink)
{
  std::lock_guard lock(g_mutex);
  WarningSink previous = std::move(g_sink);
  g_sink = std::move(sink);
  return previous;
}

}  // namespace texseg
