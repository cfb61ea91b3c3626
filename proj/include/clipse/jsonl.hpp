#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

namespace clipse::jsonl {

// Reads a line-delimited JSON file: one object per non-empty line.
// Throws Error naming the file and line on parse failure.
std::vector<nlohmann::json> read_file(const std::filesystem::path& path);

// Writes one compact JSON object per line, trailing newline included.
void write_file(const std::filesystem::path& path,
                const std::vector<nlohmann::json>& rows);

}  // namespace clipse::jsonl
