#pragma once

// Structured logging to standard error, one logfmt line per event:
//   ts=2026-01-01T12:00:00.000 level=info event=load path=data.jsonl samples=12

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

namespace much::log {

enum class Level { Debug, Info, Warn, Error, Off };

void set_level(Level level);

using Field = std::pair<std::string_view, std::string>;

void emit(Level level, std::string_view event, std::initializer_list<Field> fields = {});

inline void info(std::string_view event, std::initializer_list<Field> fields = {}) {
  emit(Level::Info, event, fields);
}
inline void warn(std::string_view event, std::initializer_list<Field> fields = {}) {
  emit(Level::Warn, event, fields);
}
inline void error(std::string_view event, std::initializer_list<Field> fields = {}) {
  emit(Level::Error, event, fields);
}

// Quotes a value when it contains spaces, quotes, '=' or is empty.
std::string quote(std::string_view value);

}  // namespace much::log
