#include "kcsim/text.hpp"

#include <cstdio>

#include "kcsim/error.hpp"

namespace kcsim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedInput: return "malformed input";
    case ErrorKind::kDivisionDegenerate: return "division degenerate";
    case ErrorKind::kLogDomain: return "log domain";
    case ErrorKind::kMissingN: return "missing N";
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kOutOfRange: return "out of range";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  if (out.size() > 1 && out[0] == '-' &&
      out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);  // no "-0.000000"
  }
  return out;
}

std::string format_trimmed(double value, int decimals) {
  std::string out = format_fixed(value, decimals);
  if (out.find('.') == std::string::npos) return out;
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorKind::kMalformedInput,
                "unterminated quote in CSV line: " + std::string(line));
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace kcsim
