#include "textable/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "textable/error.hpp"
#include "textable/text.hpp"

namespace textable::jsonl {

void for_each(const std::filesystem::path& path, const std::function<void(const json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      invalid(path.string() + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
    }
    if (!record.is_object()) invalid(path.string() + ":" + std::to_string(line_no) + ": record is not an object");
    try {
      fn(record, line_no);
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void write(const std::filesystem::path& path, const std::vector<json>& records) {
  std::ostringstream out;
  for (const auto& r : records) out << r.dump() << '\n';
  write_file(path, out.str());
}

std::string required_string(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) invalid(std::string("field \"") + field + "\" must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) invalid(std::string("field \"") + field + "\" must be a string or null");
  return it->get<std::string>();
}

std::size_t required_offset(const json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_number_integer() || it->get<long long>() < 0) {
    invalid(std::string("field \"") + field + "\" must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) invalid("cannot write " + path.string());
  out << content;
  if (!out) invalid("write failed for " + path.string());
}

}  // namespace textable::jsonl
