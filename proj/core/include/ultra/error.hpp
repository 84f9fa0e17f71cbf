#pragma once

#include <stdexcept>
#include <string>

namespace ultra {

// Domain failure with a stable machine-readable kind tag (used by the CLI).
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string kind_, const std::string& what)
      : std::runtime_error(what), kind(std::move(kind_)) {}
};

}  // namespace ultra
