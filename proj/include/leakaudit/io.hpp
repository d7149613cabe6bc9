#pragma once

#include <cstdint>
#include <string>

namespace leakaudit {

// Writes to <path>.tmp and renames over the target, so readers never see
// a half-written file and an interrupted run leaves the old version
// intact.
void write_file_atomic(const std::string& path, const std::string& content);

// FNV-1a over the raw bytes of a file, for input digests in run
// manifests. Throws IoError when the file cannot be read.
std::uint64_t fnv1a64_file(const std::string& path);

std::string hex64(std::uint64_t v);

}  // namespace leakaudit
