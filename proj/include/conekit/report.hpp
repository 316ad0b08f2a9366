#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace conekit {

/// Fixed 12-significant-digit rendering; the single formatting used by all
/// reports so that identical runs stay byte-identical.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct ReportEntry {
  std::string key;
  std::string value;
  std::string note;  // defining formula or provenance of the value
};

/// Flat, ordered report: rendered as annotated text or as a machine-readable
/// key/value document.
struct ReportDocument {
  std::string command;
  std::vector<ReportEntry> entries;

  void add(const std::string& key, const std::string& value, const std::string& note = "") {
    entries.push_back({key, value, note});
  }
  void add(const std::string& key, double value, const std::string& note = "") {
    add(key, format_double(value), note);
  }
  void add(const std::string& key, std::size_t value, const std::string& note = "") {
    add(key, std::to_string(value), note);
  }
  void add(const std::string& key, bool value, const std::string& note = "") {
    add(key, std::string(value ? "true" : "false"), note);
  }

  std::string renderText() const {
    std::string out = "# conekit report: " + command + "\n";
    for (const ReportEntry& e : entries) {
      out += e.key + ": " + e.value;
      if (!e.note.empty()) out += "  [" + e.note + "]";
      out += "\n";
    }
    return out;
  }

  std::string renderKv() const {
    std::string out = "command " + command + "\n";
    for (const ReportEntry& e : entries) out += e.key + " " + e.value + "\n";
    return out;
  }

  std::string render(const std::string& mode) const {
    if (mode == "kv") return renderKv();
    return renderText();
  }
};

}  // namespace conekit
