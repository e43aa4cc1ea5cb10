#pragma once

#include <filesystem>
#include <string>

#include "genpatch/common.hpp"

namespace testing_support {

inline std::string source_path(const std::string& rel) { return std::string(GENPATCH_SOURCE_DIR) + "/" + rel; }
inline std::string source_file(const std::string& rel) { return genpatch::read_file(source_path(rel)); }

// Fresh directory under the temp dir, removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  TempDir();
  ~TempDir();
  std::string str() const { return path.string(); }
};

void write(const std::filesystem::path& p, const std::string& text);

}  // namespace testing_support
