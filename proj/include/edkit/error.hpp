#pragma once

#include <stdexcept>
#include <string>

namespace edkit {

/// Problems with user-supplied data or options (malformed records, span
/// mismatches, missing predictions). The CLI maps these to exit status 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gold annotation cannot be rendered in the delimited target grammar.
class GrammarError : public DataError {
 public:
  using DataError::DataError;
};

/// Invalid combination of options (unknown format, template/task mismatch).
class UsageError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace edkit
