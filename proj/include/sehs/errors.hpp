#pragma once
#include <stdexcept>
#include <string>

namespace sehs {

// Bad parameters, bad config files, bad CLI usage. CLI exit code 1.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (traces, datasets, models). CLI exit code 2.
struct data_error : std::runtime_error {
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Training failures (divergence, impossible splits). CLI exit code 3.
struct train_error : std::runtime_error {
  explicit train_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sehs
