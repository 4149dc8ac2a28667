#pragma once

#include <stdexcept>

namespace vacant {

// Invalid parameters are reported with std::invalid_argument. The types below
// cover the remaining failure modes of the library.

struct SamplingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vacant
