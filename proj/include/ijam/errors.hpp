#pragma once

#include <stdexcept>
#include <string>

namespace ijam {

// Precondition violations use std::invalid_argument / std::out_of_range.
// The types below mark conditions callers are expected to handle.

/// No correlation peak above threshold in the search window.
class SyncFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A random schedule selected no samples; retry with another seed.
class EmptySchedule : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bob received errors although the run requires error-free reception.
class ConstraintViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ijam
