#pragma once

#include <string>
#include <vector>

namespace eiskit {

// A single problem found in user input, anchored to a source position when
// one is known (1-based; 0 means "no position").
struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline std::string to_string(const Diagnostic& d) {
  if (d.line == 0) return d.message;
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

inline std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const Diagnostic& d : ds) {
    if (!out.empty()) out += "\n";
    out += to_string(d);
  }
  return out;
}

}  // namespace eiskit
