#pragma once

#include <optional>
#include <string>

#include "robobench/common.hpp"

namespace robobench {

// Canonical action-call text, the line format shared by ground-truth traces,
// session traces, and judge inputs:
//
//   name(key=value, ...) -> ok|fail
//
// Arguments appear in declaration order, strings are double-quoted, numbers
// carry at most 4 decimals. Ground-truth lines omit the " -> ok" suffix.

/// Formats a number with up to 4 decimal places, trailing zeros trimmed
/// ("0.45", "-0.1", "3"). Negative zero collapses to "0".
std::string format_number(double value);

/// Renders a JSON value in canonical call syntax: quoted strings, trimmed
/// numbers, [a, b] lists, {"k": v} records.
std::string render_value(const Json& value);

/// `pick(object_name="lemon")` -- args is an ordered object.
std::string render_call(const std::string& action, const Json& args);

/// `pick(object_name="lemon") -> ok`
std::string render_trace_line(const std::string& action, const Json& args, bool ok);

/// Strips an optional trailing ` -> ok|fail` marker from a trace line,
/// returning the bare call text and the flag when present.
struct SplitTraceLine {
    std::string call_text;
    std::optional<bool> ok;
};
SplitTraceLine split_trace_line(const std::string& line);

}  // namespace robobench
