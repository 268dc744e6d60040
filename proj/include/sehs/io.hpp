#pragma once
#include <string>

namespace sehs {

// Writes content to a temp file in the same directory, then renames it over
// path, so readers never observe a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);  // throws data_error

bool file_exists(const std::string& path);

}  // namespace sehs
