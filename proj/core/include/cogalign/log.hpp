#pragma once

#include <string_view>

#include "cogalign/manifest.hpp"

namespace cogalign {

// Line-delimited JSON events on stderr. Artifacts never go to stdout through
// this interface.
void log_event(std::string_view level, std::string_view event,
               const Json& fields = Json::object());

void log_info(std::string_view event, const Json& fields = Json::object());
void log_warn(std::string_view event, const Json& fields = Json::object());
void log_error(std::string_view event, const Json& fields = Json::object());

}  // namespace cogalign
