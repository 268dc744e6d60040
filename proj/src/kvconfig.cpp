#include "sehs/kvconfig.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sehs/errors.hpp"
#include "sehs/io.hpp"

namespace sehs {

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw data_error("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw data_error("atomic rename of '" + tmp + "' to '" + path + "' failed: " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

KvConfig KvConfig::parse(const std::string& text, const std::string& origin) {
  KvConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const std::size_t e = line.find_last_not_of(" \t");
    line = line.substr(b, e - b + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error(origin + ": line " + std::to_string(line_no) +
                         " is not of the form key=value: '" + line + "'");
    }
    auto trim = [](std::string s) {
      const std::size_t b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const std::size_t e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw config_error(origin + ": line " + std::to_string(line_no) + " has an empty key");
    }
    if (cfg.values_.count(key)) {
      throw config_error(origin + ": duplicate key '" + key + "' at line " +
                         std::to_string(line_no));
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

KvConfig KvConfig::load(const std::string& path) { return parse(read_file(path), path); }

bool KvConfig::has(const std::string& key) const { return values_.count(key) != 0; }

double KvConfig::get_double(const std::string& key, double fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  used_.insert(key);
  const std::string& s = it->second;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw config_error(origin_ + ": key '" + key + "' has non-numeric value '" + s + "'");
  }
  return v;
}

long KvConfig::get_int(const std::string& key, long fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  used_.insert(key);
  const std::string& s = it->second;
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw config_error(origin_ + ": key '" + key + "' has non-integer value '" + s + "'");
  }
  return v;
}

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  used_.insert(key);
  return it->second;
}

void KvConfig::reject_unknown_keys() const {
  for (const auto& [key, value] : values_) {
    if (!used_.count(key)) {
      std::string known;
      for (const auto& k : used_) {
        known += known.empty() ? k : ", " + k;
      }
      throw config_error(origin_ + ": unknown key '" + key + "'" +
                         (known.empty() ? "" : " (recognized keys: " + known + ")"));
    }
  }
}

}  // namespace sehs
