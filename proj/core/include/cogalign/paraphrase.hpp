#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cogalign/config.hpp"
#include "cogalign/random.hpp"

namespace cogalign::pref {

inline constexpr const char* kTokenEnvVar = "COGALIGN_PARAPHRASE_TOKEN";

// External paraphrase service. Request body {"text": ..., "k": ...};
// expected response {"variants": ["...", ...]}.
class ParaphraseClient {
 public:
  virtual ~ParaphraseClient() = default;
  // k meaning-preserving rewrites; nullopt on any transport or schema error.
  virtual std::optional<std::vector<std::string>> paraphrase(
      const std::string& text, int k) = 0;
};

// HTTP JSON client. Bearer token read from COGALIGN_PARAPHRASE_TOKEN when
// present.
class HttpParaphraseClient final : public ParaphraseClient {
 public:
  HttpParaphraseClient(std::string url, int timeout_ms);
  std::optional<std::vector<std::string>> paraphrase(const std::string& text,
                                                     int k) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  int timeout_ms_;
};

std::unique_ptr<ParaphraseClient> make_client(const ParaphraseConfig& cfg);

// Deterministic rule-based rewrite: a sentence frame plus phrase synonyms.
// Entity bindings (colors, shapes, letters, position words) are never
// touched, so rewrites stay evaluable after normalize_statement.
std::string fallback_rewrite(const std::string& text, RandomStream& stream);

// Invert fallback rewrites (strip frames, map synonyms back). Identity on
// untouched template statements.
std::string normalize_statement(std::string text);

}  // namespace cogalign::pref
