#pragma once

#include <functional>
#include <string>

namespace ewr {

using WarningSink = std::function<void(const std::string&)>;

/// Replace the warning sink (default: prefix "warning: " on stderr).
/// Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace ewr
