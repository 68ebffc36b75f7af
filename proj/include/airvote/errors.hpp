#pragma once

#include <stdexcept>
#include <string>

namespace airvote {

/// Malformed external input (corrupt IDX file, bad magic, truncated payload).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally valid inputs that contradict each other or an API contract
/// (size mismatches, out-of-range labels, invalid parameter combinations).
class ConsistencyError : public std::invalid_argument {
 public:
  explicit ConsistencyError(const std::string& msg)
      : std::invalid_argument(msg) {}
};

/// Filesystem failure (missing file, unwritable output directory).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A channel draw left no usable transmit power (all gains below cutoff).
class DegenerateChannelError : public std::runtime_error {
 public:
  explicit DegenerateChannelError(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Invalid run configuration (unknown keys, wrong types, out-of-range values).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A bound was evaluated outside the regime where it holds.
class InvalidRegimeError : public std::domain_error {
 public:
  explicit InvalidRegimeError(const std::string& msg)
      : std::domain_error(msg) {}
};

}  // namespace airvote
