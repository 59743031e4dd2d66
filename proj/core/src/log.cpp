#include "cogalign/log.hpp"

#include <iostream>
#include <mutex>

namespace cogalign {

namespace {
std::mutex g_log_mutex;
}

void log_event(std::string_view level, std::string_view event,
               const Json& fields) {
  Json j;
  j["level"] = level;
  j["event"] = event;
  for (const auto& [k, v] : fields.items()) j[k] = v;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << j.dump() << '\n';
}

void log_info(std::string_view event, const Json& fields) {
  log_event("info", event, fields);
}
void log_warn(std::string_view event, const Json& fields) {
  log_event("warn", event, fields);
}
void log_error(std::string_view event, const Json& fields) {
  log_event("error", event, fields);
}

}  // namespace cogalign
