#include "cogalign/paraphrase.hpp"

#include <array>
#include <cctype>
#include <cstdlib>

#include "httplib.h"
#include "cogalign/error.hpp"
#include "cogalign/manifest.hpp"

namespace cogalign::pref {

namespace {

constexpr std::string_view kFrames[] = {
    "In this image, ",
    "Looking at the figure, ",
    "Based on the picture, ",
};

// canonical -> rewrite, unique in both directions, longest first.
constexpr std::pair<std::string_view, std::string_view> kPhrases[] = {
    {"have the same slope as the black line.",
     "share the slope of the black line."},
    {"has the same slope as the black line.",
     "shares the slope of the black line."},
    {"appear the same number of times.", "appear an equal number of times."},
    {"occupy the exact same position", "sit at the exact same spot"},
    {"has the longer distance.", "has the greater separation."},
    {"has the smaller distance.", "has the smaller separation."},
    {"has the larger volume.", "encloses the larger volume."},
    {"has the smaller volume.", "encloses the smaller volume."},
    {"does not intersect", "does not cross"},
    {"does intersect", "does cross"},
    {"appears more times.", "shows up more times."},
    {"appears less times.", "shows up less times."},
    {"are the same length.", "are equal in length."},
    {"has the same slope.", "has an identical slope."},
    {"are the same.", "are identical."},
    {"is larger.", "is the larger one."},
    {"is smaller.", "is the smaller one."},
    {"is longer.", "is the longer one."},
    {"is shorter.", "is the shorter one."},
};

bool replace_first(std::string& text, std::string_view from,
                   std::string_view to) {
  const size_t at = text.find(from);
  if (at == std::string::npos) return false;
  text.replace(at, from.size(), to);
  return true;
}

}  // namespace

std::string fallback_rewrite(const std::string& text, RandomStream& stream) {
  std::string out = text;
  if (stream.bernoulli(0.5)) {
    for (const auto& [canonical, rewrite] : kPhrases) {
      if (replace_first(out, canonical, rewrite)) break;
    }
  }
  const auto frame =
      kFrames[static_cast<size_t>(stream.uniform_int(0, std::size(kFrames) - 1))];
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(out[0]));
  return std::string(frame) + out;
}

std::string normalize_statement(std::string text) {
  for (std::string_view frame : kFrames) {
    if (text.rfind(frame, 0) == 0) {
      text.erase(0, frame.size());
      if (!text.empty()) text[0] = static_cast<char>(std::toupper(text[0]));
      break;
    }
  }
  for (const auto& [canonical, rewrite] : kPhrases) {
    replace_first(text, rewrite, canonical);
  }
  return text;
}

HttpParaphraseClient::HttpParaphraseClient(std::string url, int timeout_ms)
    : timeout_ms_(timeout_ms) {
  // Split scheme://host[:port]/path.
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw ConfigError("paraphrase.url must start with http:// or https://");
  const size_t path_at = url.find('/', scheme + 3);
  if (path_at == std::string::npos) {
    base_ = url;
    path_ = "/";
  } else {
    base_ = url.substr(0, path_at);
    path_ = url.substr(path_at);
  }
}

std::optional<std::vector<std::string>> HttpParaphraseClient::paraphrase(
    const std::string& text, int k) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_ms_ / 1000, timeout_ms_ % 1000 * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, timeout_ms_ % 1000 * 1000);
  httplib::Headers headers;
  if (const char* token = std::getenv(kTokenEnvVar)) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  Json body;
  body["text"] = text;
  body["k"] = k;
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res || res->status != 200) return std::nullopt;
  try {
    const Json j = Json::parse(res->body);
    auto variants = j.at("variants").get<std::vector<std::string>>();
    if (static_cast<int>(variants.size()) != k) return std::nullopt;
    return variants;
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

std::unique_ptr<ParaphraseClient> make_client(const ParaphraseConfig& cfg) {
  if (cfg.mode != "client") return nullptr;
  if (cfg.url.empty())
    throw ConfigError("paraphrase.mode=client requires paraphrase.url");
  return std::make_unique<HttpParaphraseClient>(cfg.url, cfg.timeout_ms);
}

}  // namespace cogalign::pref
