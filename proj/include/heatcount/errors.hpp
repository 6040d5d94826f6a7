#pragma once

#include <stdexcept>
#include <string>

namespace heatcount {

// Error taxonomy shared by the library and the CLI exit-code contract:
//   UsageError       -> malformed specs / flags            (CLI exit 2)
//   DomainError      -> divergent series, singular points,
//                       resource caps, invalid parameters  (CLI exit 1)
//   ConsistencyError -> a certification failed (rounding
//                       residue, orthogonality, degeneracy) (CLI exit 3)

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConsistencyError : std::runtime_error {
  explicit ConsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace heatcount
