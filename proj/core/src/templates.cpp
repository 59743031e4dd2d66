#include "cogalign/templates.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cogalign/error.hpp"
#include "cogalign/geometry.hpp"

namespace cogalign::pref {

using geom::LineSegment;
using geom::Point2;

namespace {

constexpr double kEqualTol = 1e-9;

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= kEqualTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool strictly_greater(double a, double b) {
  return a > b && !nearly_equal(a, b);
}

// Orientation gap on the mod-180 circle.
double orientation_gap(double a, double b) {
  double d = std::fabs(a - b);
  d = std::fmod(d, 180.0);
  return std::min(d, 180.0 - d);
}

bool same_orientation(double a, double b) {
  return orientation_gap(a, b) <= 1e-7;
}

// ---------------------------------------------------------------------------
// Template table (response templates, shipped verbatim)
// ---------------------------------------------------------------------------

constexpr TemplateRow kTemplates[] = {
    {Task::angle, 1, "The angle with the [COLOR] color is larger."},
    {Task::angle, 2, "The angle X is larger."},
    {Task::angle, 3, "The angle with the [COLOR] color is smaller."},
    {Task::angle, 4, "The angle X is smaller."},
    {Task::angle, 5, "These two angles are the same."},

    {Task::length, 1, "The line with the [COLOR] color is longer."},
    {Task::length, 2, "The line X is longer."},
    {Task::length, 3, "The line with the [COLOR] color is shorter."},
    {Task::length, 4, "The line X is shorter."},
    {Task::length, 5, "These two lines are the same length."},

    {Task::distance, 1,
     "The pair of circles with the [COLOR] color has the longer distance."},
    {Task::distance, 2,
     "The pair of circles with the [COLOR] color has the smaller distance."},
    {Task::distance, 3, "These two pair of circles have the same distance."},

    {Task::quantity, 1, "The [COLOR] [SHAPE] appears more times."},
    {Task::quantity, 2, "The [COLOR] [SHAPE] appears less times."},
    {Task::quantity, 3,
     "The [COLOR-A] [SHAPE-A] and [COLOR-B] [SHAPE-B] appear the same number "
     "of times."},

    {Task::volume, 1, "The [COLOR] [SHAPE] has the larger volume."},
    {Task::volume, 2, "The [COLOR] [SHAPE] has the smaller volume."},
    {Task::volume, 3, "These two shapes have the same volume."},

    {Task::slope, 1, "The line with the [COLOR] has the same slope."},
    {Task::slope, 2, "Both lines have the same slope as the black line."},
    {Task::slope, 3, "Neither line has the same slope as the black line."},

    {Task::position, 1,
     "The [COLOR-A] [SHAPE-A] is [POSITION] of [COLOR-B] [SHAPE-B]."},
    {Task::position, 2, "They occupy the exact same position in the image."},
    {Task::position, 3,
     "The [COLOR-A] [SHAPE-A] is [WRONG-POSITION] of [COLOR-B] [SHAPE-B]."},

    {Task::intersection, 1, "Yes, the line does intersect the [COLOR] [SHAPE]."},
    {Task::intersection, 2,
     "No, the line does not intersect the [COLOR] [SHAPE]."},
};

// ---------------------------------------------------------------------------
// Placeholder vocabulary and the sequential matcher
// ---------------------------------------------------------------------------

const std::vector<std::string>& vocab_for(const std::string& slot) {
  static const std::vector<std::string> colors = {
      "black", "white", "red",   "blue", "green",
      "orange", "purple", "brown", "gray"};
  static const std::vector<std::string> shapes = {
      "circle", "square", "triangle", "star", "pentagon",
      "cube",   "sphere", "cylinder"};
  static const std::vector<std::string> positions = {
      "to the left", "to the right", "on top", "at the bottom"};
  static const std::vector<std::string> letters = {"A", "B", "C", "S", "X"};
  if (slot.rfind("COLOR", 0) == 0) return colors;
  if (slot.rfind("SHAPE", 0) == 0) return shapes;
  if (slot == "POSITION" || slot == "WRONG-POSITION") return positions;
  if (slot == "X") return letters;
  throw DomainError("unknown template placeholder: " + slot);
}

struct TemplatePart {
  bool is_slot = false;
  std::string text;  // literal text or slot name
};

std::vector<TemplatePart> parse_template(std::string_view text) {
  std::vector<TemplatePart> parts;
  std::string literal;
  for (size_t i = 0; i < text.size();) {
    if (text[i] == '[') {
      const size_t end = text.find(']', i);
      if (end == std::string_view::npos)
        throw DomainError("unterminated placeholder in template");
      if (!literal.empty()) {
        parts.push_back({false, literal});
        literal.clear();
      }
      parts.push_back({true, std::string(text.substr(i + 1, end - i - 1))});
      i = end + 1;
      continue;
    }
    // Bare X placeholder: an isolated capital X between word boundaries.
    if (text[i] == 'X' &&
        (i == 0 || text[i - 1] == ' ') &&
        (i + 1 == text.size() || text[i + 1] == ' ' || text[i + 1] == '.')) {
      if (!literal.empty()) {
        parts.push_back({false, literal});
        literal.clear();
      }
      parts.push_back({true, "X"});
      ++i;
      continue;
    }
    literal += text[i];
    ++i;
  }
  if (!literal.empty()) parts.push_back({false, literal});
  return parts;
}

bool match_parts(const std::vector<TemplatePart>& parts,
                 const std::string& text, Bindings& out) {
  size_t at = 0;
  for (const TemplatePart& part : parts) {
    if (!part.is_slot) {
      if (text.compare(at, part.text.size(), part.text) != 0) return false;
      at += part.text.size();
      continue;
    }
    bool bound = false;
    for (const std::string& word : vocab_for(part.text)) {
      if (text.compare(at, word.size(), word) == 0) {
        out[part.text] = word;
        at += word.size();
        bound = true;
        break;
      }
    }
    if (!bound) return false;
  }
  return at == text.size();
}

// ---------------------------------------------------------------------------
// Meta access helpers
// ---------------------------------------------------------------------------

Point2 point_from(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

LineSegment segment_from(const Json& j) {
  return {point_from(j.at("p0")), point_from(j.at("p1")),
          parse_color(j.at("color").get<std::string>()), {}};
}

geom::ShapeInstance shape_from(const Json& j) {
  geom::ShapeInstance s;
  s.kind = geom::parse_shape_kind(j.at("shape").get<std::string>());
  s.color = parse_color(j.at("color").get<std::string>());
  s.center = point_from(j.at("center"));
  s.size = j.at("size").get<double>();
  return s;
}

geom::Solid solid_from(const Json& j) {
  geom::Solid s;
  s.kind = geom::parse_solid_kind(j.at("kind").get<std::string>());
  s.dims = j.at("dims").get<std::vector<double>>();
  s.color = parse_color(j.at("color").get<std::string>());
  return s;
}

// Index of the entity matching a field value, or -1.
int find_by(const Json& arr, const char* field, const std::string& value) {
  for (size_t i = 0; i < arr.size(); ++i) {
    if (arr.at(i).at(field).get<std::string>() == value)
      return static_cast<int>(i);
  }
  return -1;
}

const std::string& get_binding(const Claim& c, const char* slot) {
  auto it = c.bindings.find(slot);
  if (it == c.bindings.end())
    throw DomainError(std::string("claim lacks binding ") + slot);
  return it->second;
}

// Truth of a two-entity comparison row: pick the referenced entity, compare
// its measure against the other one.
bool compare_row_truth(int referenced, bool wants_greater,
                       const std::vector<double>& measures) {
  if (referenced < 0) return false;
  const double mine = measures[static_cast<size_t>(referenced)];
  const double other = measures[static_cast<size_t>(1 - referenced)];
  return wants_greater ? strictly_greater(mine, other)
                       : strictly_greater(other, mine);
}

}  // namespace

std::string_view task_name(Task t) {
  switch (t) {
    case Task::angle:        return "angle";
    case Task::length:       return "length";
    case Task::distance:     return "distance";
    case Task::quantity:     return "quantity";
    case Task::volume:       return "volume";
    case Task::position:     return "position";
    case Task::slope:        return "slope";
    case Task::intersection: return "intersection";
  }
  return "angle";
}

Task parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  throw ConfigError("unknown preference task: " + std::string(name));
}

uint64_t task_stream_id(Task t) { return 20 + static_cast<uint64_t>(t); }

std::span<const TemplateRow> template_table() { return kTemplates; }

std::span<const TemplateRow> templates_for(Task t) {
  const TemplateRow* begin = nullptr;
  const TemplateRow* end = nullptr;
  for (const TemplateRow& row : kTemplates) {
    if (row.task == t) {
      if (!begin) begin = &row;
      end = &row + 1;
    }
  }
  return {begin, end};
}

std::string instantiate(const TemplateRow& row, const Bindings& bindings) {
  std::string out;
  for (const TemplatePart& part : parse_template(row.text)) {
    if (!part.is_slot) {
      out += part.text;
      continue;
    }
    auto it = bindings.find(part.text);
    if (it == bindings.end())
      throw DomainError("no binding for placeholder [" + part.text +
                        "] in template row");
    out += it->second;
  }
  return out;
}

std::optional<Claim> match_statement(Task task, const std::string& text) {
  for (const TemplateRow& row : templates_for(task)) {
    Bindings bindings;
    if (match_parts(parse_template(row.text), text, bindings)) {
      return Claim{task, row.row, std::move(bindings)};
    }
  }
  return std::nullopt;
}

std::string_view position_phrase(geom::RelPosition p) {
  switch (p) {
    case geom::RelPosition::left_of:  return "to the left";
    case geom::RelPosition::right_of: return "to the right";
    case geom::RelPosition::above:    return "on top";
    case geom::RelPosition::below:    return "at the bottom";
  }
  return "to the left";
}

geom::RelPosition parse_position_phrase(std::string_view phrase) {
  for (auto p : {geom::RelPosition::left_of, geom::RelPosition::right_of,
                 geom::RelPosition::above, geom::RelPosition::below}) {
    if (position_phrase(p) == phrase) return p;
  }
  throw ConfigError("unknown position phrase: " + std::string(phrase));
}

bool claim_truth(const Claim& claim, const Json& meta) {
  try {
    switch (claim.task) {
      case Task::angle: {
        const Json& wedges = meta.at("wedges");
        const std::vector<double> sweeps = {
            wedges.at(0).at("sweep_deg").get<double>(),
            wedges.at(1).at("sweep_deg").get<double>()};
        if (claim.row == 5) return nearly_equal(sweeps[0], sweeps[1]);
        const bool by_color = claim.row == 1 || claim.row == 3;
        const int idx = by_color
                            ? find_by(wedges, "color", get_binding(claim, "COLOR"))
                            : find_by(wedges, "letter", get_binding(claim, "X"));
        return compare_row_truth(idx, claim.row <= 2, sweeps);
      }
      case Task::length: {
        const Json& segments = meta.at("segments");
        const std::vector<double> lengths = {
            geom::measure_length(segment_from(segments.at(0))),
            geom::measure_length(segment_from(segments.at(1)))};
        if (claim.row == 5) return nearly_equal(lengths[0], lengths[1]);
        const bool by_color = claim.row == 1 || claim.row == 3;
        const int idx =
            by_color ? find_by(segments, "color", get_binding(claim, "COLOR"))
                     : find_by(segments, "letter", get_binding(claim, "X"));
        return compare_row_truth(idx, claim.row <= 2, lengths);
      }
      case Task::distance: {
        const Json& pairs = meta.at("pairs");
        auto dist = [&](int i) {
          geom::CirclePair p;
          p.a_center = point_from(pairs.at(i).at("a_center"));
          p.b_center = point_from(pairs.at(i).at("b_center"));
          p.radius = pairs.at(i).at("radius").get<double>();
          return geom::center_distance(p);
        };
        const std::vector<double> distances = {dist(0), dist(1)};
        if (claim.row == 3) return nearly_equal(distances[0], distances[1]);
        const int idx = find_by(pairs, "color", get_binding(claim, "COLOR"));
        return compare_row_truth(idx, claim.row == 1, distances);
      }
      case Task::quantity: {
        const Json& groups = meta.at("groups");
        auto count_of = [&](int i) {
          return static_cast<double>(groups.at(i).at("centers").size());
        };
        const std::vector<double> counts = {count_of(0), count_of(1)};
        if (claim.row == 3) {
          const int a = find_by(groups, "color", get_binding(claim, "COLOR-A"));
          const int b = find_by(groups, "color", get_binding(claim, "COLOR-B"));
          if (a < 0 || b < 0 || a == b) return false;
          if (groups.at(a).at("shape").get<std::string>() !=
                  get_binding(claim, "SHAPE-A") ||
              groups.at(b).at("shape").get<std::string>() !=
                  get_binding(claim, "SHAPE-B"))
            return false;
          return counts[static_cast<size_t>(a)] ==
                 counts[static_cast<size_t>(b)];
        }
        int idx = find_by(groups, "color", get_binding(claim, "COLOR"));
        if (idx >= 0 && groups.at(idx).at("shape").get<std::string>() !=
                            get_binding(claim, "SHAPE"))
          idx = -1;
        return compare_row_truth(idx, claim.row == 1, counts);
      }
      case Task::volume: {
        const Json& solids = meta.at("solids");
        const std::vector<double> volumes = {
            geom::solid_volume(solid_from(solids.at(0))),
            geom::solid_volume(solid_from(solids.at(1)))};
        if (claim.row == 3) return nearly_equal(volumes[0], volumes[1]);
        int idx = find_by(solids, "color", get_binding(claim, "COLOR"));
        if (idx >= 0 && solids.at(idx).at("kind").get<std::string>() !=
                            get_binding(claim, "SHAPE"))
          idx = -1;
        return compare_row_truth(idx, claim.row == 1, volumes);
      }
      case Task::position: {
        const Json& shapes = meta.at("shapes");
        if (claim.row == 2) {
          const Point2 a = point_from(shapes.at(0).at("center"));
          const Point2 b = point_from(shapes.at(1).at("center"));
          return a.x == b.x && a.y == b.y;
        }
        int subject = find_by(shapes, "color", get_binding(claim, "COLOR-A"));
        int object = find_by(shapes, "color", get_binding(claim, "COLOR-B"));
        if (subject < 0 || object < 0 || subject == object) return false;
        if (shapes.at(subject).at("shape").get<std::string>() !=
                get_binding(claim, "SHAPE-A") ||
            shapes.at(object).at("shape").get<std::string>() !=
                get_binding(claim, "SHAPE-B"))
          return false;
        const char* slot = claim.row == 1 ? "POSITION" : "WRONG-POSITION";
        const geom::RelPosition claimed =
            parse_position_phrase(get_binding(claim, slot));
        return geom::relative_position(shape_from(shapes.at(subject)),
                                       shape_from(shapes.at(object))) == claimed;
      }
      case Task::slope: {
        const LineSegment ref = segment_from(meta.at("reference"));
        const Json& lines = meta.at("lines");
        const double ref_deg = geom::orientation_deg(ref);
        auto matches = [&](int i) {
          return same_orientation(
              geom::orientation_deg(segment_from(lines.at(i))), ref_deg);
        };
        if (claim.row == 2) return matches(0) && matches(1);
        if (claim.row == 3) return !matches(0) && !matches(1);
        const int idx = find_by(lines, "color", get_binding(claim, "COLOR"));
        if (idx < 0) return false;
        return matches(idx);
      }
      case Task::intersection: {
        const LineSegment seg = segment_from(meta.at("segment"));
        const geom::ShapeInstance shape = shape_from(meta.at("shape"));
        if (shape_kind_name(shape.kind) != get_binding(claim, "SHAPE") ||
            std::string(color_name(shape.color)) !=
                get_binding(claim, "COLOR"))
          return false;
        const bool hit = geom::intersects(seg, shape);
        return claim.row == 1 ? hit : !hit;
      }
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("claim_truth: missing meta field: ") +
                      e.what());
  }
  throw DomainError("unknown claim task");
}

std::span<const std::string_view> prompts_for(Task t) {
  static const std::string_view angle[] = {
      "Compare the two angles shown. Which is larger, or are they the same?",
      "Look at the two angles in the image. Is one of them larger?",
      "Which of the two angles is bigger, or do they have the same measure?",
      "Examine both angles. How do their sizes compare?",
      "Are the two angles equal, or is one larger than the other?"};
  static const std::string_view length[] = {
      "Compare the two lines shown. Which is longer, or are they the same "
      "length?",
      "Look at the two lines in the image. Is one of them longer?",
      "Which of the two lines is longer, or do they have the same length?",
      "Examine both lines. How do their lengths compare?",
      "Are the two lines equally long, or is one longer than the other?"};
  static const std::string_view distance[] = {
      "Compare the two pairs of circles. Which pair has the longer distance "
      "between its circles, or are the distances the same?",
      "Look at both circle pairs. Does one pair have a larger separation?",
      "Which pair of circles is farther apart, or are they equally far apart?",
      "Examine the two circle pairs. How do their separations compare?",
      "Are the two circle pairs separated by the same distance?"};
  static const std::string_view quantity[] = {
      "Compare the two kinds of shapes shown. Which appears more times, or "
      "do they appear equally often?",
      "Look at the shapes in the image. Does one kind appear more often?",
      "Which kind of shape is more numerous, or are the counts the same?",
      "Examine both groups of shapes. How do their counts compare?",
      "Do the two kinds of shapes appear the same number of times?"};
  static const std::string_view volume[] = {
      "Compare the two solids shown. Which has the larger volume, or are "
      "they the same?",
      "Look at the two solids in the image. Does one enclose more volume?",
      "Which of the two solids is bigger by volume, or are they equal?",
      "Examine both solids. How do their volumes compare?",
      "Do the two solids have the same volume, or is one larger?"};
  static const std::string_view position[] = {
      "Describe where the first shape sits relative to the second shape.",
      "Look at the two shapes. What is their relative position?",
      "How is the first shape positioned with respect to the second?",
      "Examine the two shapes. Where is one relative to the other?",
      "What is the spatial relation between the two shapes?"};
  static const std::string_view slope[] = {
      "Compare the colored lines with the black line. Which of them has the "
      "same slope as the black line?",
      "Look at the lines in the image. Do the colored lines share the black "
      "line's slope?",
      "Which colored line, if any, is parallel to the black line?",
      "Examine the three lines. Which ones have equal slopes?",
      "Does either colored line have the same slope as the black line?"};
  static const std::string_view intersection[] = {
      "Does the line intersect the shape shown in the image?",
      "Look at the line and the shape. Do they intersect?",
      "Does the line pass through the shape?",
      "Examine the line and the shape. Does the line cross it?",
      "Is the line intersecting the shape, yes or no?"};
  switch (t) {
    case Task::angle:        return angle;
    case Task::length:       return length;
    case Task::distance:     return distance;
    case Task::quantity:     return quantity;
    case Task::volume:       return volume;
    case Task::position:     return position;
    case Task::slope:        return slope;
    case Task::intersection: return intersection;
  }
  return angle;
}

}  // namespace cogalign::pref
