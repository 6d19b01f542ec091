#pragma once

// Internal output helpers: 17-significant-digit float formatting and
// atomic (write-then-rename) file writes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rtnmpc/errors.hpp"

namespace rtnmpc::detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace rtnmpc::detail
