#ifndef RVASM_EDIT_TRACE_HPP_
#define RVASM_EDIT_TRACE_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvasm/document.hpp"

// Edit traces: one JSON object per line, one edit event per object.
//   {"op":"insert_char","line":L,"col":C,"ch":"x"}
//   {"op":"insert_newline","line":L,"col":C}
//   {"op":"delete_range","start_line":L,"start_col":C,"end_line":L2,"end_col":C2}
//   {"op":"paste","line":L,"col":C,"text":"..."}
namespace rvasm {

nlohmann::json edit_event_to_json(const EditEvent& event);
// Throws Error(kBadRequest) on malformed objects.
EditEvent edit_event_from_json(const nlohmann::json& object);

std::string write_edit_trace(const std::vector<EditEvent>& events);
// Blank lines are skipped. Throws Error(kBadRequest) naming the bad line.
std::vector<EditEvent> read_edit_trace(std::string_view text);

}  // namespace rvasm

#endif  // RVASM_EDIT_TRACE_HPP_
