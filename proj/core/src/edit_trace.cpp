#include "rvasm/edit_trace.hpp"

#include "rvasm/assembler.hpp"
#include "rvasm/error.hpp"

namespace rvasm {

using nlohmann::json;

json edit_event_to_json(const EditEvent& event) {
  json out;
  out["op"] = edit_kind_name(event.kind);
  switch (event.kind) {
    case EditKind::kInsertChar:
      out["line"] = event.line;
      out["col"] = event.col;
      out["ch"] = std::string(1, event.ch);
      break;
    case EditKind::kInsertNewline:
      out["line"] = event.line;
      out["col"] = event.col;
      break;
    case EditKind::kDeleteRange:
      out["start_line"] = event.line;
      out["start_col"] = event.col;
      out["end_line"] = event.end_line;
      out["end_col"] = event.end_col;
      break;
    case EditKind::kPaste:
      out["line"] = event.line;
      out["col"] = event.col;
      out["text"] = event.text;
      break;
  }
  return out;
}

namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCode::kBadRequest, message);
}

int int_field(const json& object, const char* name) {
  const auto it = object.find(name);
  if (it == object.end() || !it->is_number_integer()) {
    bad(std::string("edit event needs integer field '") + name + "'");
  }
  const auto value = it->get<std::int64_t>();
  if (value < 0 || value > 0x7FFFFFFF) bad(std::string("field '") + name + "' out of range");
  return static_cast<int>(value);
}

std::string string_field(const json& object, const char* name) {
  const auto it = object.find(name);
  if (it == object.end() || !it->is_string()) {
    bad(std::string("edit event needs string field '") + name + "'");
  }
  return it->get<std::string>();
}

}  // namespace

EditEvent edit_event_from_json(const json& object) {
  if (!object.is_object()) bad("edit event must be a JSON object");
  const std::string op = string_field(object, "op");
  if (op == "insert_char") {
    const std::string ch = string_field(object, "ch");
    if (ch.size() != 1 || ch[0] == '\n' || static_cast<unsigned char>(ch[0]) >= 0x80) {
      bad("'ch' must be one ASCII character other than newline");
    }
    return EditEvent::insert_char(int_field(object, "line"), int_field(object, "col"), ch[0]);
  }
  if (op == "insert_newline") {
    return EditEvent::insert_newline(int_field(object, "line"), int_field(object, "col"));
  }
  if (op == "delete_range") {
    return EditEvent::delete_range(int_field(object, "start_line"), int_field(object, "start_col"),
                                   int_field(object, "end_line"), int_field(object, "end_col"));
  }
  if (op == "paste") {
    return EditEvent::paste(int_field(object, "line"), int_field(object, "col"),
                            string_field(object, "text"));
  }
  bad("unknown edit op '" + op + "'");
}

std::string write_edit_trace(const std::vector<EditEvent>& events) {
  std::string out;
  for (const EditEvent& event : events) {
    out += edit_event_to_json(event).dump();
    out += '\n';
  }
  return out;
}

std::vector<EditEvent> read_edit_trace(std::string_view text) {
  std::vector<EditEvent> events;
  const std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
    json object = json::parse(lines[i], nullptr, false);
    if (object.is_discarded()) bad("trace line " + std::to_string(i + 1) + " is not JSON");
    try {
      events.push_back(edit_event_from_json(object));
    } catch (const Error& e) {
      bad("trace line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return events;
}

}  // namespace rvasm
