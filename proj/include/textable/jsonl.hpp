#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace textable::jsonl {

using json = nlohmann::json;

/// Calls `fn(record, line_number)` for every non-blank line. Line numbers are
/// 1-based. Parse failures and exceptions thrown by `fn` are rethrown as
/// invalid_input errors carrying "<path>:<line>".
void for_each(const std::filesystem::path& path, const std::function<void(const json&, std::size_t)>& fn);

/// Serializes one compact record per line.
void write(const std::filesystem::path& path, const std::vector<json>& records);

std::string required_string(const json& record, const char* field);
std::optional<std::string> optional_string(const json& record, const char* field);
std::size_t required_offset(const json& record, const char* field);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace textable::jsonl
