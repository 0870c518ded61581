#include <charconv>
#include <cmath>
#include <sstream>

#include "catdec/cli.hpp"

namespace catdec::cli {
namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

// Metadata values are preformatted; numbers pass through, anything else is quoted.
std::string json_value(const std::string& s) {
  if (s == "nan" || s == "inf" || s == "-inf") return "null";
  double parsed = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), parsed);
  if (ec == std::errc{} && end == s.data() + s.size() && std::isfinite(parsed)) return s;
  return json_string(s);
}

std::string json_cell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "null";
  return format_number(*v);
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string render_csv(const Table& t) {
  std::ostringstream out;
  out << "# " << t.title << '\n';
  for (const auto& [key, value] : t.metadata) out << "# " << key << " = " << value << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  const bool with_notes = !t.notes_column.empty();
  if (with_notes) out << ',' << t.notes_column;
  out << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) out << (c ? "," : "") << csv_cell(t.rows[r][c]);
    if (with_notes) {
      std::string note = r < t.notes.size() ? t.notes[r] : "";
      for (char& ch : note) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      out << ',' << note;
    }
    out << '\n';
  }
  return out.str();
}

std::string render_json(const Table& t) {
  std::ostringstream out;
  out << "{\n  \"title\": " << json_string(t.title) << ",\n  \"metadata\": {";
  for (std::size_t i = 0; i < t.metadata.size(); ++i) {
    out << (i ? ",\n    " : "\n    ") << json_string(t.metadata[i].first) << ": "
        << json_value(t.metadata[i].second);
  }
  out << (t.metadata.empty() ? "},\n" : "\n  },\n") << "  \"columns\": [";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? ", " : "") << json_string(t.columns[c]);
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out << (r ? ",\n    [" : "\n    [");
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) out << (c ? ", " : "") << json_cell(t.rows[r][c]);
    out << ']';
  }
  out << (t.rows.empty() ? "]" : "\n  ]");
  if (!t.notes_column.empty()) {
    out << ",\n  " << json_string(t.notes_column) << ": [";
    for (std::size_t r = 0; r < t.notes.size(); ++r) out << (r ? ", " : "") << json_string(t.notes[r]);
    out << ']';
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16);
  return std::string(buf, result.ptr);
}

std::string render(const Table& table, OutputFormat format) {
  return format == OutputFormat::csv ? render_csv(table) : render_json(table);
}

}  // namespace catdec::cli
