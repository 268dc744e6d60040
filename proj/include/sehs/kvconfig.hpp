#pragma once
#include <map>
#include <set>
#include <string>

namespace sehs {

// Flat key=value config file. '#' starts a comment, blank lines are ignored,
// whitespace around keys and values is trimmed. Lookups record which keys were
// consumed so reject_unknown_keys() can flag typos with a helpful message.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text, const std::string& origin = "<config>");
  static KvConfig load(const std::string& path);

  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback);
  long get_int(const std::string& key, long fallback);
  std::string get_string(const std::string& key, const std::string& fallback);

  // Throws config_error if the file contains keys nothing consumed.
  void reject_unknown_keys() const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

}  // namespace sehs
