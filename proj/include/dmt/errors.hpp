#pragma once

#include <stdexcept>
#include <string>

namespace dmt {

// Thrown when sequence lengths disagree (signal vs spectrum vs observation).
class DimensionError : public std::invalid_argument {
  public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a numeric parameter is outside its admissible range.
class DomainError : public std::invalid_argument {
  public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown on malformed configuration (bad partitions, bad JSON, missing fields).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a request exceeds a hard resource cap (e.g. subset enumeration).
class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dmt
