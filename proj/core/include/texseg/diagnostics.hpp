#pragma once

#include <functional>
#include <string>

namespace texseg {

using WarningSink = std::function<void(const std::string&)>;

/// Routes a non-fatal diagnostic to the installed sink. The default sink
/// prints each distinct message once to stderr.
void warn(const std::string& message);

/// Installs a new sink and returns the previous one. Passing an empty
/// function restores the default.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace texseg
