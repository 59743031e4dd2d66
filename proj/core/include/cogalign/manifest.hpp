#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace cogalign {

using Json = nlohmann::ordered_json;

enum class Split : uint8_t { train, dev, test };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

// One probing example. `meta` holds the exact ground-truth scene numbers;
// the label must be recomputable from meta alone.
struct ProbeInstance {
  std::string id;
  std::string task;
  Split split = Split::train;
  std::string image;       // path relative to the manifest directory
  std::string query;
  std::string query_type;  // original | empty | irrelevant
  int label = 0;
  Json meta;
};

Json to_json(const ProbeInstance& p);
ProbeInstance probe_instance_from_json(const Json& j);

// One preference record (query, image, positive response, negative response).
struct PreferencePair {
  std::string id;
  std::string task;
  std::string image;
  std::string prompt;
  std::string chosen;
  std::string rejected;
  Json meta;
  Json provenance;
};

Json to_json(const PreferencePair& p);
PreferencePair preference_pair_from_json(const Json& j);

// JSONL: one object per line, no indentation, LF terminated.
void write_jsonl(const std::filesystem::path& path,
                 const std::vector<Json>& lines);
std::vector<Json> read_jsonl(const std::filesystem::path& path);

}  // namespace cogalign
