#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace genpatch {

/// Failure raised by any pipeline stage. `kind` is a short machine-readable
/// tag ("lexical", "malformed-diff", "stale-hunk", "validation", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// 64-bit FNV-1a. Stable across platforms, used for every persisted id.
std::uint64_t fnv1a(std::string_view data);
std::string hex_id(std::string_view data);

std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);
std::string ltrim(std::string_view s);
std::string rtrim(std::string_view s);
/// Collapse every whitespace run to one space and strip the ends.
std::string normalize_ws(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

std::string read_file(const std::string& path);
/// Write-temp-then-rename.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace genpatch
