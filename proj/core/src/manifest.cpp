#include "cogalign/manifest.hpp"

#include <fstream>

#include "cogalign/error.hpp"

namespace cogalign {

std::string_view split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev:   return "dev";
    case Split::test:  return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "dev") return Split::dev;
  if (name == "test") return Split::test;
  throw ConfigError("unknown split: " + std::string(name));
}

Json to_json(const ProbeInstance& p) {
  Json j;
  j["id"] = p.id;
  j["task"] = p.task;
  j["split"] = split_name(p.split);
  j["image"] = p.image;
  j["query"] = p.query;
  j["query_type"] = p.query_type;
  j["label"] = p.label;
  j["meta"] = p.meta;
  return j;
}

ProbeInstance probe_instance_from_json(const Json& j) {
  ProbeInstance p;
  try {
    p.id = j.at("id").get<std::string>();
    p.task = j.at("task").get<std::string>();
    p.split = parse_split(j.at("split").get<std::string>());
    p.image = j.at("image").get<std::string>();
    p.query = j.at("query").get<std::string>();
    p.query_type = j.at("query_type").get<std::string>();
    p.label = j.at("label").get<int>();
    p.meta = j.at("meta");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad probing manifest line: ") + e.what());
  }
  return p;
}

Json to_json(const PreferencePair& p) {
  Json j;
  j["id"] = p.id;
  j["task"] = p.task;
  j["image"] = p.image;
  j["prompt"] = p.prompt;
  j["chosen"] = p.chosen;
  j["rejected"] = p.rejected;
  j["meta"] = p.meta;
  j["provenance"] = p.provenance;
  return j;
}

PreferencePair preference_pair_from_json(const Json& j) {
  PreferencePair p;
  try {
    p.id = j.at("id").get<std::string>();
    p.task = j.at("task").get<std::string>();
    p.image = j.at("image").get<std::string>();
    p.prompt = j.at("prompt").get<std::string>();
    p.chosen = j.at("chosen").get<std::string>();
    p.rejected = j.at("rejected").get<std::string>();
    p.meta = j.at("meta");
    p.provenance = j.at("provenance");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad preference manifest line: ") + e.what());
  }
  return p;
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<Json>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  for (const Json& j : lines) {
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("manifest write failed: " + path.string());
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::vector<Json> lines;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      lines.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw ConfigError("bad JSONL at " + path.string() + ":" +
                        std::to_string(lineno) + ": " + e.what());
    }
  }
  return lines;
}

}  // namespace cogalign
