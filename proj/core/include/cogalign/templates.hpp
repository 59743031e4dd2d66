#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "cogalign/config.hpp"
#include "cogalign/manifest.hpp"

namespace cogalign::pref {

enum class Task : uint8_t {
  angle,
  length,
  distance,
  quantity,
  volume,
  position,
  slope,
  intersection,
};

inline constexpr std::array<Task, 8> kAllTasks = {
    Task::angle,  Task::length,   Task::distance, Task::quantity,
    Task::volume, Task::position, Task::slope,    Task::intersection,
};

std::string_view task_name(Task t);
Task parse_task(std::string_view name);
uint64_t task_stream_id(Task t);  // stream ids 20..27

// One row of the shipped response-template table. `text` contains the
// placeholders [COLOR], [COLOR-A], [COLOR-B], [SHAPE], [SHAPE-A], [SHAPE-B],
// [POSITION], [WRONG-POSITION], and the bare letter slot X.
struct TemplateRow {
  Task task;
  int row;  // 1-based row number within the task
  std::string_view text;
};

std::span<const TemplateRow> template_table();
std::span<const TemplateRow> templates_for(Task t);

using Bindings = std::map<std::string, std::string>;

// Fill placeholders; throws DomainError when a placeholder has no binding.
std::string instantiate(const TemplateRow& row, const Bindings& bindings);

// A parsed statement: which template row it instantiates and with which
// bindings. Row semantics against meta live in claim_truth.
struct Claim {
  Task task = Task::angle;
  int row = 0;
  Bindings bindings;
};

// Match a statement against the task's template rows. Rows 1 and 3 of the
// position task realize identically; the first matching row wins (their
// truth conditions coincide).
std::optional<Claim> match_statement(Task task, const std::string& text);

// Evaluate a claim against instance meta using geometry only.
// Throws ConfigError when meta lacks required fields.
bool claim_truth(const Claim& claim, const Json& meta);

// Position-word vocabulary: relation enum <-> template phrase.
std::string_view position_phrase(geom::RelPosition p);
geom::RelPosition parse_position_phrase(std::string_view phrase);

// The five fixed prompt phrasings per task (docs/queries.md).
std::span<const std::string_view> prompts_for(Task t);

}  // namespace cogalign::pref
