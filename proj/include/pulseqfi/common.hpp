#pragma once

#include <stdexcept>
#include <string>

namespace pulseqfi {

// Error taxonomy used across the library. All derive from std::runtime_error
// so callers may catch coarsely; the CLI maps them to machine-readable records.

struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct regime_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct cutoff_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ill_conditioned_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pulseqfi
