#pragma once

#include <stdexcept>
#include <string>

namespace dqfe {

/// File access or parse failures. Messages carry the path and, where
/// available, a 1-based line/column location.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that parsed but violates a data invariant (non-finite values,
/// non-contiguous labels, mismatched dimensions, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeds the sizes this build is willing to simulate.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dqfe
