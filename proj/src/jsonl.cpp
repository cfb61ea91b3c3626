#include "clipse/jsonl.hpp"

#include <fstream>
#include <string>

#include "clipse/types.hpp"

namespace clipse::jsonl {

std::vector<nlohmann::json> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::vector<nlohmann::json> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded()) {
      throw Error("invalid JSON at " + path.string() + ":" +
                  std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const std::filesystem::path& path,
                const std::vector<nlohmann::json>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  for (const auto& row : rows) {
    out << row.dump() << '\n';
  }
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

}  // namespace clipse::jsonl
